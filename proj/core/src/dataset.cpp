#include "dap/dataset.hpp"

#include <cstring>
#include <fstream>

namespace dap {

namespace {

constexpr char kMagic[4] = {'D', 'A', 'P', 'D'};
constexpr std::uint32_t kVersion = 1;

void append_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_f32(std::string& buf, float f) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    append_u32(buf, bits);
}

std::uint64_t byte_sum(const std::string& buf) {
    std::uint64_t sum = 0;
    for (unsigned char c : buf) sum += c;
    return sum;
}

class Reader {
public:
    Reader(const std::string& data, const std::string& path) : data_(data), path_(path) {}

    std::uint32_t read_u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(byte(pos_ + i)) << (8 * i);
        pos_ += 4;
        return v;
    }

    std::uint64_t read_u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(byte(pos_ + i)) << (8 * i);
        pos_ += 8;
        return v;
    }

    float read_f32() {
        const std::uint32_t bits = read_u32();
        float f;
        std::memcpy(&f, &bits, 4);
        return f;
    }

    std::size_t pos() const { return pos_; }

    void need(std::size_t n) const {
        if (pos_ + n > data_.size()) {
            throw DatasetParseError("dataset '" + path_ + "': truncated at byte offset " +
                                    std::to_string(pos_) + " (need " + std::to_string(n) +
                                    " more bytes)");
        }
    }

    unsigned char byte(std::size_t i) const { return static_cast<unsigned char>(data_[i]); }

    std::size_t skip_pos(std::size_t p) { return pos_ = p; }

private:
    const std::string& data_;
    std::string path_;
    std::size_t pos_ = 0;
};

}  // namespace

void save_dataset(const TargetDataset& d, const std::string& path) {
    if (d.records.empty()) throw ConfigError("dataset must contain at least one record");
    std::string buf;
    buf.append(kMagic, 4);
    append_u32(buf, kVersion);
    append_u32(buf, static_cast<std::uint32_t>(d.state_dim));
    append_u32(buf, static_cast<std::uint32_t>(d.action_dim));
    append_u64(buf, static_cast<std::uint64_t>(d.records.size()));
    for (const auto& r : d.records) {
        if (static_cast<int>(r.state.size()) != d.state_dim ||
            static_cast<int>(r.action.size()) != d.action_dim ||
            static_cast<int>(r.next_state.size()) != d.state_dim) {
            throw ConfigError("dataset record dimensions do not match header");
        }
        for (float f : r.state) append_f32(buf, f);
        for (float f : r.action) append_f32(buf, f);
        for (float f : r.next_state) append_f32(buf, f);
    }
    append_u64(buf, byte_sum(buf));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw std::runtime_error("write failure on '" + path + "'");
}

TargetDataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DatasetParseError("cannot open dataset file '" + path + "'");
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Reader r(data, path);

    r.need(4);
    if (std::memcmp(data.data(), kMagic, 4) != 0) {
        throw DatasetParseError("dataset '" + path + "': bad magic at byte offset 0");
    }
    r.skip_pos(4);
    const std::uint32_t version = r.read_u32();
    if (version != kVersion) {
        throw DatasetParseError("dataset '" + path + "': unsupported version " +
                                std::to_string(version) + " at byte offset 4");
    }
    TargetDataset d;
    d.state_dim = static_cast<int>(r.read_u32());
    d.action_dim = static_cast<int>(r.read_u32());
    const std::uint64_t m = r.read_u64();
    if (d.state_dim <= 0 || d.action_dim <= 0) {
        throw DatasetParseError("dataset '" + path + "': non-positive dimensions at byte offset 8");
    }
    if (m == 0) {
        throw DatasetParseError("dataset '" + path + "': empty dataset (M must be >= 1)");
    }
    d.records.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        DatasetRecord rec;
        rec.state.resize(d.state_dim);
        rec.action.resize(d.action_dim);
        rec.next_state.resize(d.state_dim);
        for (auto& f : rec.state) f = r.read_f32();
        for (auto& f : rec.action) f = r.read_f32();
        for (auto& f : rec.next_state) f = r.read_f32();
        d.records.push_back(std::move(rec));
    }
    const std::size_t checksum_offset = r.pos();
    const std::uint64_t expect = r.read_u64();
    const std::uint64_t got = byte_sum(data.substr(0, checksum_offset));
    if (expect != got) {
        throw DatasetParseError("dataset '" + path + "': checksum mismatch at byte offset " +
                                std::to_string(checksum_offset));
    }
    if (r.pos() != data.size()) {
        throw DatasetParseError("dataset '" + path + "': trailing garbage at byte offset " +
                                std::to_string(r.pos()));
    }
    return d;
}

TargetDataset collect_dataset(const EnvPair& pair, const std::string& env_id,
                              const GaussianPolicy& behavioral_policy, std::size_t M,
                              std::uint64_t seed) {
    if (M == 0) throw ConfigError("collect_dataset: M must be >= 1");
    const Env& env = *pair.target;
    TargetDataset d;
    d.env_id = env_id;
    d.collection_seed = seed;
    d.state_dim = env.spec().state_dim;
    d.action_dim = env.spec().action_dim;
    d.records.reserve(M);

    RngStreams streams(seed);
    std::uint64_t episode = 0;
    Vec s = env.reset(streams.stream(streams::kReset, episode).next_u64());
    int ep_step = 0;
    for (std::size_t t = 0; t < M; ++t) {
        Rng rng_pol = streams.stream(streams::kPolicy, t);
        Rng rng_env = streams.stream(streams::kEnv, t);
        const Vec a = behavioral_policy.select_action(s, ActionMode::Stochastic, rng_pol);
        const StepResult res = env.step_noisy(s, a, rng_env);

        DatasetRecord rec;
        auto to_f32 = [](const Vec& v) {
            std::vector<float> out(v.size());
            for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = static_cast<float>(v[i]);
            return out;
        };
        rec.state = to_f32(s);
        rec.action = to_f32(a);
        rec.next_state = to_f32(res.next_state);
        d.records.push_back(std::move(rec));

        s = res.next_state;
        if (++ep_step >= env.spec().max_episode_steps) {
            ep_step = 0;
            ++episode;
            s = env.reset(streams.stream(streams::kReset, episode).next_u64());
        }
    }
    return d;
}

}  // namespace dap
