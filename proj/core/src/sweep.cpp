#include "dap/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <thread>

#include "dap/log.hpp"
#include "dap/metrics.hpp"
#include "dap/policy_io.hpp"

namespace dap {

namespace fs = std::filesystem;

void write_run_outputs(const std::string& out_dir, const ExperimentConfig& cfg,
                       const RunResult& result) {
    fs::create_directories(out_dir);
    write_text_file(out_dir + "/metrics.csv", metrics_to_csv(result.metrics));
    write_text_file(out_dir + "/config.txt", cfg.echo());
    if (result.policy) {
        PolicySnapshot snap{cfg.env_id, algo_to_string(cfg.algo), *result.policy};
        save_policy(snap, out_dir + "/policy.json");
    }
}

namespace {

std::string value_token(const std::string& axis, double v) {
    if (axis == "M") return std::to_string(static_cast<long>(v));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);  // compact form, for directory names only
    std::string s(buf);
    for (auto& c : s)
        if (c == '.') c = 'p';
    return s;
}

}  // namespace

SweepResult run_sweep(const std::map<std::string, std::string>& base_config,
                      const std::string& axis, const std::vector<double>& values,
                      const std::vector<std::uint64_t>& seeds, const std::string& out_dir,
                      int jobs) {
    if (values.empty()) throw ConfigError("sweep: values must be nonempty");
    if (seeds.empty()) throw ConfigError("sweep: seeds must be nonempty");
    std::string key;
    if (axis == "lambda") key = "lambda";
    else if (axis == "k") key = "k";
    else if (axis == "M") key = "dataset.max_records";
    else throw ConfigError("sweep: unknown axis '" + axis + "' (expected lambda|k|M)");

    SweepResult result;
    for (double v : values) {
        for (std::uint64_t seed : seeds) {
            SweepEntry e;
            e.axis = axis;
            e.value = v;
            e.seed = seed;
            e.run_dir = out_dir + "/" + axis + "_" + value_token(axis, v) + "_seed" +
                        std::to_string(seed);
            result.entries.push_back(std::move(e));
        }
    }

    const int n_workers =
        std::max(1, jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency()));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= result.entries.size()) return;
            SweepEntry& e = result.entries[i];
            try {
                auto cfg_map = base_config;
                cfg_map[key] = axis == "M" ? std::to_string(static_cast<long>(e.value))
                                           : format_double(e.value);
                cfg_map["seed"] = std::to_string(e.seed);
                const ExperimentConfig cfg = ExperimentConfig::from_map(cfg_map);
                const RunResult run = run_experiment(cfg);
                write_run_outputs(e.run_dir, cfg, run);
                e.ok = true;
                e.final_return_mean = run.final_eval_mean;
                e.final_return_std = run.final_eval_std;
            } catch (const std::exception& ex) {
                e.ok = false;
                e.error = ex.what();
                LOG_ERROR("sweep run " + e.run_dir + " failed: " + e.error);
            }
        }
    };

    std::vector<std::thread> threads;
    for (int w = 0; w < n_workers - 1; ++w) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();

    std::string csv = "axis,value,seed,status,final_return_mean,final_return_std,run_dir\n";
    for (const auto& e : result.entries) {
        csv += e.axis + "," + format_double(e.value) + "," + std::to_string(e.seed) + "," +
               (e.ok ? "ok" : "failed") + "," + format_double(e.final_return_mean) + "," +
               format_double(e.final_return_std) + "," + e.run_dir + "\n";
    }
    result.summary_csv = csv;
    fs::create_directories(out_dir);
    write_text_file(out_dir + "/summary.csv", csv);
    return result;
}

}  // namespace dap
