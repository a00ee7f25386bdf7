#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "dap/classifier.hpp"
#include "dap/config.hpp"
#include "dap/dataset.hpp"
#include "dap/env.hpp"
#include "dap/metrics.hpp"
#include "dap/robustify.hpp"
#include "dap/sac.hpp"

namespace dap {

// Regularized reward adjustment: clip(delta_r_hat mean) plus the lambda
// action-gap term. The gap term is a penalty (subtracted) by default;
// literal_sign recovers the raw "+" form.
double compute_delta_r_regularized(const DeltaREstimate& estimate, const Vec& a_src,
                                   const Vec& a_tgt, double lambda, double clip,
                                   bool literal_sign = false);

struct EvalResult {
    double mean = 0.0;
    double std = 0.0;
    std::size_t episodes = 0;
};

// Deterministic-action rollouts; for dual-width policies only the a_tgt half
// drives the environment. episodes_per_seed rollouts are run per seed.
EvalResult evaluate_policy(const GaussianPolicy& policy, const Env& env, int episodes_per_seed,
                           const std::vector<std::uint64_t>& seeds);

struct RunResult {
    std::vector<MetricsRow> metrics;
    std::shared_ptr<GaussianPolicy> policy;
    double final_eval_mean = 0.0;
    double final_eval_std = 0.0;
};

// Hook invoked per environment step, used by tests to instrument runs.
struct StepTrace {
    long step;
    const Vec& state;
    const Vec& executed_src;
    const Vec& a_tgt;
    double task_reward;
    double delta_r;
    double stored_reward;
    double sigma;
};
using StepHook = std::function<void(const StepTrace&)>;

// Runs the full training loop for any AlgoKind (the dual-action loop, the
// single-action classifier-adjusted baseline, or plain max-entropy RL on
// either side of the pair). Fully reproducible from config.seed.
RunResult run_experiment(const ExperimentConfig& config, const StepHook& hook = nullptr);

}  // namespace dap
