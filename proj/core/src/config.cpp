#include "dap/config.hpp"

#include <fstream>
#include <sstream>

namespace dap {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' has non-numeric value '" + v + "'");
    }
}

long to_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' has non-integer value '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config: key '" + key + "' has non-boolean value '" + v + "'");
}

}  // namespace

AlgoKind algo_from_string(const std::string& s) {
    if (s == "sac_source") return AlgoKind::SacSource;
    if (s == "sac_target") return AlgoKind::SacTarget;
    if (s == "darc") return AlgoKind::Darc;
    if (s == "dap") return AlgoKind::Dap;
    if (s == "dap_u") return AlgoKind::DapU;
    throw ConfigError("unknown algo '" + s +
                      "' (expected sac_source|sac_target|darc|dap|dap_u)");
}

std::string algo_to_string(AlgoKind a) {
    switch (a) {
        case AlgoKind::SacSource: return "sac_source";
        case AlgoKind::SacTarget: return "sac_target";
        case AlgoKind::Darc: return "darc";
        case AlgoKind::Dap: return "dap";
        case AlgoKind::DapU: return "dap_u";
    }
    return "?";
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(static_cast<int>(to_long("list", item)));
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double("list", item));
    }
    return out;
}

std::map<std::string, std::string> ExperimentConfig::default_map() {
    return {
        {"algo", "dap"},
        {"env.id", "pointmass"},
        {"env.noise_std", "0.01"},
        {"seed", "0"},
        {"total_steps", "100000"},
        {"eval_interval", "5000"},
        {"eval.episodes", "10"},
        {"lambda", "0.10"},
        {"lambda_literal_sign", "false"},
        {"k", "0.10"},
        {"dataset_path", ""},
        {"dataset.max_records", "0"},
        {"sac.lr", "0.0003"},
        {"sac.batch_size", "256"},
        {"sac.polyak", "0.005"},
        {"sac.hidden", "256,256"},
        {"sac.warmup_steps", "1000"},
        {"sac.buffer_capacity", "100000"},
        {"sac.target_entropy", "auto"},
        {"classifier.n_ensemble", "5"},
        {"classifier.input_noise_std", "0.1"},
        {"classifier.clip", "10.0"},
        {"classifier.lr", "0.001"},
        {"classifier.hidden", "64,64"},
        {"classifier.batch", "128"},
        {"trainer.actor_gap_scale", "1.0"},
        {"trainer.delta_r_warmup", "2000"},
        {"trainer.delta_r_at_executed", "false"},
        {"trainer.store_executed_action", "true"},
    };
}

ExperimentConfig ExperimentConfig::from_map(const std::map<std::string, std::string>& values) {
    const auto defaults = default_map();
    for (const auto& [k, v] : values) {
        if (!defaults.count(k)) throw ConfigError("config: unknown key '" + k + "'");
    }
    std::map<std::string, std::string> merged = defaults;
    for (const auto& [k, v] : values) merged[k] = v;

    ExperimentConfig c;
    c.resolved = merged;
    c.algo = algo_from_string(merged.at("algo"));
    c.env_id = merged.at("env.id");
    c.env_noise_std = to_double("env.noise_std", merged.at("env.noise_std"));
    c.seed = static_cast<std::uint64_t>(to_long("seed", merged.at("seed")));
    c.total_steps = to_long("total_steps", merged.at("total_steps"));
    c.eval_interval = to_long("eval_interval", merged.at("eval_interval"));
    c.eval_episodes = static_cast<int>(to_long("eval.episodes", merged.at("eval.episodes")));
    c.lambda = to_double("lambda", merged.at("lambda"));
    c.lambda_literal_sign = to_bool("lambda_literal_sign", merged.at("lambda_literal_sign"));
    c.k = to_double("k", merged.at("k"));
    c.dataset_path = merged.at("dataset_path");
    c.dataset_max_records =
        static_cast<std::size_t>(to_long("dataset.max_records", merged.at("dataset.max_records")));

    c.sac.lr = to_double("sac.lr", merged.at("sac.lr"));
    c.sac.batch_size = static_cast<int>(to_long("sac.batch_size", merged.at("sac.batch_size")));
    c.sac.polyak = to_double("sac.polyak", merged.at("sac.polyak"));
    c.sac.hidden = parse_int_list(merged.at("sac.hidden"));
    c.sac.warmup_steps =
        static_cast<int>(to_long("sac.warmup_steps", merged.at("sac.warmup_steps")));
    c.sac.buffer_capacity = static_cast<std::size_t>(
        to_long("sac.buffer_capacity", merged.at("sac.buffer_capacity")));
    // "auto" keeps the agent's default of -action_dim
    if (merged.at("sac.target_entropy") != "auto") {
        c.sac.target_entropy =
            to_double("sac.target_entropy", merged.at("sac.target_entropy"));
    }

    c.classifier.n_ensemble =
        static_cast<int>(to_long("classifier.n_ensemble", merged.at("classifier.n_ensemble")));
    c.classifier.input_noise_std =
        to_double("classifier.input_noise_std", merged.at("classifier.input_noise_std"));
    c.classifier.clip = to_double("classifier.clip", merged.at("classifier.clip"));
    c.classifier.lr = to_double("classifier.lr", merged.at("classifier.lr"));
    c.classifier.hidden = parse_int_list(merged.at("classifier.hidden"));
    c.classifier.batch_size =
        static_cast<int>(to_long("classifier.batch", merged.at("classifier.batch")));

    c.actor_gap_scale =
        to_double("trainer.actor_gap_scale", merged.at("trainer.actor_gap_scale"));
    c.delta_r_warmup = to_long("trainer.delta_r_warmup", merged.at("trainer.delta_r_warmup"));
    c.delta_r_at_executed =
        to_bool("trainer.delta_r_at_executed", merged.at("trainer.delta_r_at_executed"));
    c.store_executed_action =
        to_bool("trainer.store_executed_action", merged.at("trainer.store_executed_action"));

    if (c.lambda < 0 || c.k < 0) throw ConfigError("config: lambda and k must be >= 0");
    if (c.total_steps <= 0 || c.eval_interval <= 0) {
        throw ConfigError("config: total_steps and eval_interval must be positive");
    }
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path,
                                        const std::map<std::string, std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::map<std::string, std::string> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: line " + std::to_string(lineno) + " is not key=value: '" +
                              t + "'");
        }
        values[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    for (const auto& [k, v] : overrides) values[k] = v;
    return from_map(values);
}

ExperimentConfig ExperimentConfig::from_overrides(
    const std::map<std::string, std::string>& overrides) {
    return from_map(overrides);
}

std::string ExperimentConfig::echo() const {
    std::string out;
    for (const auto& [k, v] : resolved) out += k + "=" + v + "\n";
    return out;
}

}  // namespace dap
