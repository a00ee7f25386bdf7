#include <benchmark/benchmark.h>

#include "dap/mlp.hpp"

namespace {

void BM_MlpForwardBatch(benchmark::State& state) {
    const int hidden = static_cast<int>(state.range(0));
    const int batch = static_cast<int>(state.range(1));
    dap::Rng rng(1);
    dap::Mlp net({6, hidden, hidden, 1}, dap::Activation::Relu, rng);
    dap::Mat x(6, batch);
    for (int j = 0; j < batch; ++j) x.col(j) = rng.normal_vec(6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(net.forward_batch(x));
    }
    state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_MlpForwardBatch)->Args({32, 64})->Args({64, 64})->Args({256, 256});

void BM_MlpBackward(benchmark::State& state) {
    const int hidden = static_cast<int>(state.range(0));
    const int batch = static_cast<int>(state.range(1));
    dap::Rng rng(2);
    dap::Mlp net({6, hidden, hidden, 1}, dap::Activation::Relu, rng);
    dap::Mat x(6, batch), g(1, batch);
    for (int j = 0; j < batch; ++j) {
        x.col(j) = rng.normal_vec(6);
        g(0, j) = rng.normal();
    }
    for (auto _ : state) {
        dap::Mlp::Cache cache;
        net.forward_batch(x, &cache);
        benchmark::DoNotOptimize(net.backward(cache, g));
    }
    state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_MlpBackward)->Args({32, 64})->Args({64, 64})->Args({256, 256});

}  // namespace

BENCHMARK_MAIN();
