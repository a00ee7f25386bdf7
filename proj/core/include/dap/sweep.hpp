#pragma once

#include <map>
#include <string>
#include <vector>

#include "dap/config.hpp"
#include "dap/trainer.hpp"

namespace dap {

// Writes metrics.csv, config.txt and policy.json for a finished run.
void write_run_outputs(const std::string& out_dir, const ExperimentConfig& cfg,
                       const RunResult& result);

struct SweepEntry {
    std::string axis;
    double value = 0.0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    double final_return_mean = 0.0;
    double final_return_std = 0.0;
    std::string run_dir;
};

struct SweepResult {
    std::vector<SweepEntry> entries;
    std::string summary_csv;
};

// One run per (value, seed), identical otherwise; child-run failures are
// recorded and the sweep continues. axis is one of lambda | k | M.
SweepResult run_sweep(const std::map<std::string, std::string>& base_config,
                      const std::string& axis, const std::vector<double>& values,
                      const std::vector<std::uint64_t>& seeds, const std::string& out_dir,
                      int jobs = 0);

}  // namespace dap
