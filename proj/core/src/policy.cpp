#include "dap/policy.hpp"

#include <cmath>

namespace dap {

namespace {
constexpr double kTanhEps = 1e-6;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))
}  // namespace

GaussianPolicy::GaussianPolicy(int state_dim, Vec action_low, Vec action_high,
                               const std::vector<int>& hidden, Activation act, Rng& rng)
    : action_low_(std::move(action_low)), action_high_(std::move(action_high)) {
    if (action_low_.size() != action_high_.size() || action_low_.size() == 0) {
        throw ConfigError("policy: invalid action bounds");
    }
    for (Eigen::Index i = 0; i < action_low_.size(); ++i) {
        if (!(action_low_[i] < action_high_[i])) throw ConfigError("policy: action_low >= action_high");
    }
    std::vector<int> sizes;
    sizes.push_back(state_dim);
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(2 * static_cast<int>(action_low_.size()));
    trunk_ = Mlp(sizes, act, rng);
}

void GaussianPolicy::head_batch(const Mat& states, Mat& mean, Mat& log_std,
                                Mlp::Cache& cache) const {
    const Mat out = trunk_.forward_batch(states, &cache);
    const int d = action_dim();
    mean = out.topRows(d);
    log_std = out.bottomRows(d).cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
}

Vec GaussianPolicy::select_action(const Vec& state, ActionMode mode, Rng& rng) const {
    const Vec out = trunk_.forward(state);
    const int d = action_dim();
    const Vec center = bounds_center();
    const Vec half = bounds_halfwidth();
    Vec a(d);
    for (int i = 0; i < d; ++i) {
        double u = out[i];
        if (mode == ActionMode::Stochastic) {
            const double ls = std::clamp(out[d + i], kLogStdMin, kLogStdMax);
            u += std::exp(ls) * rng.normal();
        }
        a[i] = center[i] + half[i] * std::tanh(u);
    }
    return a;
}

double GaussianPolicy::log_prob(const Vec& state, const Vec& action) const {
    if (action.size() != action_dim()) throw ConfigError("log_prob: action width mismatch");
    const Vec out = trunk_.forward(state);
    const int d = action_dim();
    const Vec center = bounds_center();
    const Vec half = bounds_halfwidth();
    double lp = 0.0;
    for (int i = 0; i < d; ++i) {
        const double a = std::clamp(action[i], action_low_[i] + kTanhEps, action_high_[i] - kTanhEps);
        const double t = std::clamp((a - center[i]) / half[i], -1.0 + kTanhEps, 1.0 - kTanhEps);
        const double u = std::atanh(t);
        const double mean = out[i];
        const double ls = std::clamp(out[d + i], kLogStdMin, kLogStdMax);
        const double sd = std::exp(ls);
        const double z = (u - mean) / sd;
        lp += -0.5 * z * z - ls - kLogSqrt2Pi;         // Gaussian density at u
        lp -= std::log(1.0 - t * t + kTanhEps);        // tanh Jacobian
        lp -= std::log(half[i]);                       // bound rescaling
    }
    return lp;
}

}  // namespace dap
