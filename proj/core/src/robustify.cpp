#include "dap/robustify.hpp"

namespace dap {

Vec resample_action(const Vec& a_src, double sigma, const ResampleConfig& cfg, Rng& rng) {
    if (cfg.k < 0.0 || sigma < 0.0) throw ConfigError("resample: k and sigma must be >= 0");
    const double scale = cfg.k * sigma;
    if (scale == 0.0) return a_src;
    Vec out(a_src.size());
    for (Eigen::Index i = 0; i < a_src.size(); ++i) {
        out[i] = std::clamp(a_src[i] + scale * rng.normal(), cfg.action_low[i], cfg.action_high[i]);
    }
    return out;
}

}  // namespace dap
