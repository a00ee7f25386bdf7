#pragma once

#include "dap/mlp.hpp"
#include "dap/rng.hpp"

namespace dap {

struct ResampleConfig {
    double k = 0.10;
    Vec action_low;
    Vec action_high;
};

// Uncertainty-scaled action resampling: a_src + N(0, (k*sigma)^2) i.i.d. per
// dimension, clamped to the action bounds. k*sigma == 0 returns the input
// bit-identically (no rng draw).
Vec resample_action(const Vec& a_src, double sigma, const ResampleConfig& cfg, Rng& rng);

}  // namespace dap
