#pragma once

#include <map>
#include <string>
#include <vector>

#include "dap/classifier.hpp"
#include "dap/sac.hpp"

namespace dap {

enum class AlgoKind { SacSource, SacTarget, Darc, Dap, DapU };

AlgoKind algo_from_string(const std::string& s);
std::string algo_to_string(AlgoKind a);

// Every hyperparameter of a run. Parsed from flat key=value files with dotted
// keys; unknown keys are hard errors so misspelled hyperparameters cannot
// silently fall back to defaults.
struct ExperimentConfig {
    AlgoKind algo = AlgoKind::Dap;
    std::string env_id = "pointmass";
    double env_noise_std = 0.01;
    std::uint64_t seed = 0;
    long total_steps = 100000;
    long eval_interval = 5000;
    int eval_episodes = 10;

    double lambda = 0.10;
    bool lambda_literal_sign = false;  // true: paper-literal "+" regularizer
    double k = 0.10;

    std::string dataset_path;
    std::size_t dataset_max_records = 0;  // 0 = use all

    SacHyperParams sac;
    ClassifierHyperParams classifier;

    double actor_gap_scale = 1.0;        // actor-level gap coupling = scale * lambda
    long delta_r_warmup = 2000;          // delta_r forced to 0 before this step
    bool delta_r_at_executed = false;    // query delta_r at executed a_src instead of a_tgt
    bool store_executed_action = true;   // store/train on the resampled source action

    // raw key -> value map used to build this config (for echoing)
    std::map<std::string, std::string> resolved;

    static std::map<std::string, std::string> default_map();
    static ExperimentConfig from_map(const std::map<std::string, std::string>& values);

    // parse a key=value file and apply overrides on top of the defaults
    static ExperimentConfig load(const std::string& path,
                                 const std::map<std::string, std::string>& overrides = {});
    static ExperimentConfig from_overrides(const std::map<std::string, std::string>& overrides);

    std::string echo() const;  // sorted key=value text of the resolved config
};

std::vector<int> parse_int_list(const std::string& csv);
std::vector<double> parse_double_list(const std::string& csv);

}  // namespace dap
