#include <iostream>

#include <CLI11.hpp>

#include "dap/config.hpp"
#include "dap/dataset.hpp"
#include "dap/log.hpp"
#include "dap/metrics.hpp"
#include "dap/policy_io.hpp"
#include "dap/sweep.hpp"
#include "dap/trainer.hpp"

namespace {

std::vector<std::uint64_t> parse_seed_list(const std::string& csv) {
    std::vector<std::uint64_t> out;
    for (double v : dap::parse_double_list(csv)) out.push_back(static_cast<std::uint64_t>(v));
    if (out.empty()) throw dap::ConfigError("empty seed list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dual-action off-dynamics RL laboratory"};
    app.require_subcommand(1);

    // train
    auto* train = app.add_subcommand("train", "Train one policy and write metrics/policy");
    std::string train_config, train_algo, train_out;
    std::int64_t train_seed = -1;
    std::vector<std::string> train_sets;
    train->add_option("--config", train_config, "key=value config file");
    train->add_option("--algo", train_algo, "sac_source|sac_target|darc|dap|dap_u");
    train->add_option("--seed", train_seed, "run seed");
    train->add_option("--out", train_out, "output directory")->required();
    train->add_option("--set", train_sets, "extra key=value overrides")->take_all();

    // collect
    auto* collect = app.add_subcommand("collect", "Train a behavioral policy and collect a target dataset");
    std::string collect_env = "pointmass", collect_out;
    long collect_steps = 30000;
    std::size_t collect_size = 20000;
    std::uint64_t collect_seed = 0;
    std::string collect_config;
    collect->add_option("--env", collect_env, "environment id");
    collect->add_option("--steps", collect_steps, "behavioral policy training steps");
    collect->add_option("--dataset-size", collect_size, "number of transitions M");
    collect->add_option("--seed", collect_seed, "seed");
    collect->add_option("--config", collect_config, "config file for the behavioral run");
    collect->add_option("--out", collect_out, "dataset output path")->required();

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate a saved policy in the target environment");
    std::string eval_policy, eval_seeds = "0,1,2";
    int eval_episodes = 100;
    eval->add_option("--policy", eval_policy, "policy.json path")->required();
    eval->add_option("--episodes", eval_episodes, "episodes per seed");
    eval->add_option("--seeds", eval_seeds, "comma-separated seed list");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run an ablation sweep over lambda, k or M");
    std::string sweep_config, sweep_axis, sweep_values, sweep_seeds = "0", sweep_out;
    int sweep_jobs = 0;
    sweep->add_option("--config", sweep_config, "base config file");
    sweep->add_option("--axis", sweep_axis, "lambda|k|M")->required();
    sweep->add_option("--values", sweep_values, "comma-separated values")->required();
    sweep->add_option("--seeds", sweep_seeds, "comma-separated seed list");
    sweep->add_option("--jobs", sweep_jobs, "parallel workers (default: CPU count)");
    sweep->add_option("--out", sweep_out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) {
            std::map<std::string, std::string> overrides;
            for (const auto& kv : train_sets) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) throw dap::ConfigError("--set expects key=value");
                overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
            }
            if (!train_algo.empty()) overrides["algo"] = train_algo;
            if (train_seed >= 0) overrides["seed"] = std::to_string(train_seed);
            const dap::ExperimentConfig cfg =
                train_config.empty() ? dap::ExperimentConfig::from_overrides(overrides)
                                     : dap::ExperimentConfig::load(train_config, overrides);
            const dap::RunResult result = dap::run_experiment(cfg);
            dap::write_run_outputs(train_out, cfg, result);
            std::cout << "final_eval_return_mean " << dap::format_double(result.final_eval_mean)
                      << "\nfinal_eval_return_std " << dap::format_double(result.final_eval_std)
                      << "\n";
        } else if (*collect) {
            std::map<std::string, std::string> overrides{
                {"algo", "sac_source"},
                {"env.id", collect_env},
                {"seed", std::to_string(collect_seed)},
                {"total_steps", std::to_string(collect_steps)},
            };
            const dap::ExperimentConfig cfg =
                collect_config.empty() ? dap::ExperimentConfig::from_overrides(overrides)
                                       : dap::ExperimentConfig::load(collect_config, overrides);
            LOG_INFO("training behavioral policy (" + std::to_string(collect_steps) + " steps)");
            const dap::RunResult run = dap::run_experiment(cfg);
            const dap::EnvPair pair = dap::make_env_pair(cfg.env_id, cfg.env_noise_std);
            dap::TargetDataset d =
                dap::collect_dataset(pair, cfg.env_id, *run.policy, collect_size, collect_seed);
            d.behavioral_policy_id = "sac_source_seed" + std::to_string(collect_seed);
            dap::save_dataset(d, collect_out);
            std::cout << "wrote " << d.records.size() << " transitions to " << collect_out << "\n";
        } else if (*eval) {
            const dap::PolicySnapshot snap = dap::load_policy(eval_policy);
            const dap::EnvPair pair = dap::make_env_pair(snap.env_id);
            const dap::EvalResult res = dap::evaluate_policy(
                snap.policy, *pair.target, eval_episodes, parse_seed_list(eval_seeds));
            std::cout << "episodes " << res.episodes << "\nreturn_mean "
                      << dap::format_double(res.mean) << "\nreturn_std "
                      << dap::format_double(res.std) << "\n";
        } else if (*sweep) {
            std::map<std::string, std::string> base;
            if (!sweep_config.empty()) {
                // reuse the config parser, then echo back to a raw map
                base = dap::ExperimentConfig::load(sweep_config).resolved;
            }
            const dap::SweepResult res =
                dap::run_sweep(base, sweep_axis, dap::parse_double_list(sweep_values),
                               parse_seed_list(sweep_seeds), sweep_out, sweep_jobs);
            std::cout << res.summary_csv;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
