#pragma once

#include "dap/mlp.hpp"
#include "dap/rng.hpp"

namespace dap {

enum class ActionMode { Stochastic, Deterministic };

// Squashed-Gaussian policy. One trunk emits, per output action dimension, a
// mean and a log-std (clamped to [-20, 2]); samples are tanh-squashed and
// rescaled onto [action_low, action_high]. For a dual-action agent the output
// width is simply 2x the base action dimension.
class GaussianPolicy {
public:
    GaussianPolicy() = default;
    GaussianPolicy(int state_dim, Vec action_low, Vec action_high, const std::vector<int>& hidden,
                   Activation act, Rng& rng);

    static constexpr double kLogStdMin = -20.0;
    static constexpr double kLogStdMax = 2.0;

    int state_dim() const { return trunk_.input_dim(); }
    int action_dim() const { return static_cast<int>(action_low_.size()); }
    const Vec& action_low() const { return action_low_; }
    const Vec& action_high() const { return action_high_; }

    Mlp& trunk() { return trunk_; }
    const Mlp& trunk() const { return trunk_; }

    Vec select_action(const Vec& state, ActionMode mode, Rng& rng) const;

    // log pi(a|s), including the tanh change-of-variables correction and the
    // bound-rescaling Jacobian. Actions are clipped 1e-6 inside the bounds
    // before inversion.
    double log_prob(const Vec& state, const Vec& action) const;

    // Batched head evaluation: states is (state_dim x B); outputs are
    // (action_dim x B) mean and clamped log_std rows, plus the trunk cache.
    void head_batch(const Mat& states, Mat& mean, Mat& log_std, Mlp::Cache& cache) const;

    // midpoint and half-range of the bounds, used by the squash
    Vec bounds_center() const { return 0.5 * (action_low_ + action_high_); }
    Vec bounds_halfwidth() const { return 0.5 * (action_high_ - action_low_); }

private:
    Mlp trunk_;
    Vec action_low_, action_high_;
};

}  // namespace dap
