#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

namespace dap {

// splitmix64; used to derive independent stream seeds from a single run seed.
inline std::uint64_t split_mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// xoshiro256** with hand-rolled uniform/normal draws. All sampling in the
// project goes through this class so that runs are bit-reproducible across
// standard library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& si : s_) {
            x = split_mix64(x);
            si = x;
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller (pairs cached)
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

    Eigen::VectorXd normal_vec(Eigen::Index n) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
        return v;
    }

    Eigen::VectorXd uniform_vec(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
        Eigen::VectorXd v(lo.size());
        for (Eigen::Index i = 0; i < lo.size(); ++i) v[i] = uniform(lo[i], hi[i]);
        return v;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Named, per-step derivable rng streams. Deriving a fresh generator per
// (stream, step) keeps independent components from desynchronizing each
// other's draw sequences.
class RngStreams {
public:
    explicit RngStreams(std::uint64_t run_seed) : run_seed_(run_seed) {}

    Rng stream(std::uint64_t stream_id, std::uint64_t step = 0) const {
        return Rng(split_mix64(run_seed_ ^ split_mix64(stream_id)) ^ split_mix64(step * 0x9e3779b97f4a7c15ULL + stream_id));
    }

    std::uint64_t run_seed() const { return run_seed_; }

private:
    std::uint64_t run_seed_;
};

// stream ids used by the trainer/harness
namespace streams {
inline constexpr std::uint64_t kInit = 1;
inline constexpr std::uint64_t kEnv = 2;
inline constexpr std::uint64_t kPolicy = 3;
inline constexpr std::uint64_t kResample = 4;
inline constexpr std::uint64_t kClassifier = 5;
inline constexpr std::uint64_t kEval = 6;
inline constexpr std::uint64_t kSacBatch = 7;
inline constexpr std::uint64_t kReset = 8;
}  // namespace streams

}  // namespace dap
