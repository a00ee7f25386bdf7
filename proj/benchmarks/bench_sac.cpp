#include <benchmark/benchmark.h>

#include "dap/sac.hpp"

namespace {

void BM_SacUpdate(benchmark::State& state) {
    const int hidden = static_cast<int>(state.range(0));
    const int batch = static_cast<int>(state.range(1));
    dap::Rng rng(1);
    dap::SacHyperParams hp;
    hp.hidden = {hidden, hidden};
    hp.batch_size = batch;
    dap::Vec lo = dap::Vec::Constant(2, -1.0), hi = dap::Vec::Constant(2, 1.0);
    dap::SacAgent agent(4, lo, hi, hp, rng);

    std::vector<dap::Transition> pool;
    for (int i = 0; i < batch; ++i) {
        dap::Transition t;
        t.state = rng.normal_vec(4);
        t.action_src = rng.normal_vec(2).array().tanh().matrix();
        t.action_tgt = t.action_src;
        t.reward = rng.normal();
        t.next_state = rng.normal_vec(4);
        pool.push_back(std::move(t));
    }
    std::vector<const dap::Transition*> ptrs;
    for (const auto& t : pool) ptrs.push_back(&t);

    dap::Rng up(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(agent.update(ptrs, up));
    }
}
BENCHMARK(BM_SacUpdate)->Args({32, 64})->Args({64, 64})->Args({64, 128})->Args({256, 256});

}  // namespace
