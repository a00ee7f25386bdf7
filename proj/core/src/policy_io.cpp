#include "dap/policy_io.hpp"

#include <fstream>

#include <json.hpp>

namespace dap {

using nlohmann::json;

namespace {

json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat matrix_from_json(const json& j) {
    const auto nrows = j.size();
    const auto ncols = j.at(0).size();
    Mat m(nrows, ncols);
    for (std::size_t i = 0; i < nrows; ++i)
        for (std::size_t c = 0; c < ncols; ++c) m(i, c) = j.at(i).at(c).get<double>();
    return m;
}

}  // namespace

void save_policy(const PolicySnapshot& snap, const std::string& path) {
    const GaussianPolicy& p = snap.policy;
    json j;
    j["format"] = "dap_policy";
    j["version"] = 1;
    j["env_id"] = snap.env_id;
    j["algo"] = snap.algo;
    j["layer_sizes"] = p.trunk().layer_sizes();
    j["activation"] = p.trunk().activation() == Activation::Relu ? "relu" : "tanh";
    j["action_low"] = std::vector<double>(p.action_low().data(),
                                          p.action_low().data() + p.action_low().size());
    j["action_high"] = std::vector<double>(p.action_high().data(),
                                           p.action_high().data() + p.action_high().size());
    json weights = json::array(), biases = json::array();
    for (const auto& w : p.trunk().weights()) weights.push_back(matrix_to_json(w));
    for (const auto& b : p.trunk().biases()) {
        biases.push_back(std::vector<double>(b.data(), b.data() + b.size()));
    }
    j["weights"] = std::move(weights);
    j["biases"] = std::move(biases);

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << j.dump(1) << "\n";
}

PolicySnapshot load_policy(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open policy file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("policy file '" + path + "' is not valid JSON: " + e.what());
    }
    if (j.value("format", "") != "dap_policy") {
        throw std::runtime_error("policy file '" + path + "' has wrong format tag");
    }

    const std::vector<int> sizes = j.at("layer_sizes").get<std::vector<int>>();
    const std::vector<int> hidden(sizes.begin() + 1, sizes.end() - 1);
    const auto low_v = j.at("action_low").get<std::vector<double>>();
    const auto high_v = j.at("action_high").get<std::vector<double>>();
    Vec low = Eigen::Map<const Vec>(low_v.data(), static_cast<Eigen::Index>(low_v.size()));
    Vec high = Eigen::Map<const Vec>(high_v.data(), static_cast<Eigen::Index>(high_v.size()));
    const Activation act =
        j.at("activation").get<std::string>() == "tanh" ? Activation::Tanh : Activation::Relu;

    Rng rng(0);
    PolicySnapshot snap;
    snap.env_id = j.value("env_id", "");
    snap.algo = j.value("algo", "");
    snap.policy = GaussianPolicy(sizes.front(), low, high, hidden, act, rng);
    auto& trunk = snap.policy.trunk();
    const json& jw = j.at("weights");
    const json& jb = j.at("biases");
    if (jw.size() != trunk.weights().size()) {
        throw std::runtime_error("policy file '" + path + "': layer count mismatch");
    }
    for (std::size_t l = 0; l < trunk.weights().size(); ++l) {
        Mat w = matrix_from_json(jw.at(l));
        if (w.rows() != trunk.weights()[l].rows() || w.cols() != trunk.weights()[l].cols()) {
            throw std::runtime_error("policy file '" + path + "': weight shape mismatch");
        }
        trunk.weights()[l] = std::move(w);
        const auto b = jb.at(l).get<std::vector<double>>();
        trunk.biases()[l] = Eigen::Map<const Vec>(b.data(), static_cast<Eigen::Index>(b.size()));
    }
    return snap;
}

}  // namespace dap
