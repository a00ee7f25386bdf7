#include <benchmark/benchmark.h>

#include "dap/classifier.hpp"

namespace {

dap::Mat random_batch(int rows, int cols, dap::Rng& rng) {
    dap::Mat out(rows, cols);
    for (int j = 0; j < cols; ++j) out.col(j) = rng.normal_vec(rows);
    return out;
}

void BM_ClassifierTrainStep(benchmark::State& state) {
    const int hidden = static_cast<int>(state.range(0));
    const int half = static_cast<int>(state.range(1));
    dap::Rng rng(1);
    dap::ClassifierHyperParams hp;
    hp.hidden = {hidden, hidden};
    dap::ClassifierEnsemble ens(4, 2, hp, rng);
    const dap::Mat src = random_batch(10, half, rng);
    const dap::Mat tgt = random_batch(10, half, rng);
    dap::Rng train(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ens.train_step(src, tgt, train));
    }
}
BENCHMARK(BM_ClassifierTrainStep)->Args({32, 32})->Args({64, 64});

void BM_DeltaRHat(benchmark::State& state) {
    dap::Rng rng(3);
    dap::ClassifierHyperParams hp;
    hp.hidden = {static_cast<int>(state.range(0)), static_cast<int>(state.range(0))};
    dap::ClassifierEnsemble ens(4, 2, hp, rng);
    dap::Rng train(4);
    ens.train_step(random_batch(10, 8, rng), random_batch(10, 8, rng), train);
    const dap::Vec s = rng.normal_vec(4), a = rng.normal_vec(2), s2 = rng.normal_vec(4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ens.compute_delta_r_hat(s, a, s2));
    }
}
BENCHMARK(BM_DeltaRHat)->Arg(32)->Arg(64);

}  // namespace
