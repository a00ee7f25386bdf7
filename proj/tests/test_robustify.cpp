#include <doctest.h>

#include <cmath>

#include "dap/robustify.hpp"

using namespace dap;

namespace {

ResampleConfig wide_cfg(double k) {
    ResampleConfig cfg;
    cfg.k = k;
    cfg.action_low = Vec::Constant(2, -100.0);
    cfg.action_high = Vec::Constant(2, 100.0);
    return cfg;
}

}  // namespace

TEST_CASE("k = 0 returns the input bit-identically and draws nothing") {
    Rng rng(1);
    const Vec a = rng.normal_vec(2);
    Rng r1(42), r2(42);
    const Vec out = resample_action(a, /*sigma=*/3.7, wide_cfg(0.0), r1);
    CHECK(out == a);
    // the generator must be untouched
    CHECK(r1.normal() == r2.normal());
}

TEST_CASE("sigma = 0 returns the input bit-identically and draws nothing") {
    Rng rng(2);
    const Vec a = rng.normal_vec(2);
    Rng r1(43), r2(43);
    const Vec out = resample_action(a, 0.0, wide_cfg(0.25), r1);
    CHECK(out == a);
    CHECK(r1.normal() == r2.normal());
}

TEST_CASE("sample moments match the configured noise scale") {
    const Vec a = Vec::Constant(2, 0.5);
    const ResampleConfig cfg = wide_cfg(1.0);
    const double sigma = 0.10;
    Rng rng(3);
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec out = resample_action(a, sigma, cfg, rng);
        sum += out[0];
        sumsq += (out[0] - 0.5) * (out[0] - 0.5);
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.005));
    CHECK(std::sqrt(sumsq / n) == doctest::Approx(sigma).epsilon(0.01));
}

TEST_CASE("resampled actions respect the bounds") {
    ResampleConfig cfg;
    cfg.k = 5.0;
    cfg.action_low = Vec::Constant(1, -0.2);
    cfg.action_high = Vec::Constant(1, 0.2);
    Rng rng(4);
    for (int i = 0; i < 10000; ++i) {
        const Vec out = resample_action(Vec::Zero(1), 1.0, cfg, rng);
        REQUIRE(out[0] >= -0.2);
        REQUIRE(out[0] <= 0.2);
    }
}

TEST_CASE("resampling is deterministic under a fixed generator state") {
    const Vec a = Vec::Constant(2, -0.3);
    Rng r1(5), r2(5);
    const Vec o1 = resample_action(a, 0.8, wide_cfg(0.5), r1);
    const Vec o2 = resample_action(a, 0.8, wide_cfg(0.5), r2);
    CHECK(o1 == o2);
}

TEST_CASE("negative k or sigma is rejected") {
    Rng rng(6);
    CHECK_THROWS_AS(resample_action(Vec::Zero(1), 1.0, wide_cfg(-0.1), rng), ConfigError);
    CHECK_THROWS_AS(resample_action(Vec::Zero(1), -1.0, wide_cfg(0.1), rng), ConfigError);
}
