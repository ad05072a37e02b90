#include <benchmark/benchmark.h>

#include "shockrefl/sim.hpp"
#include "shockrefl/transition_map.hpp"

using namespace shockrefl;

namespace {

SimField anchor_field(int n) {
    SimConfig c;
    c.reflection.M1 = 3.0;
    c.reflection.theta = rad(147.9);
    c.reflection.alpha = rad(-5.0);
    c.nx = c.ny = n;
    c.min_travel_cells = 0;
    return setup_initial(c);
}

void BM_SimStepParallel(benchmark::State& state) {
    const SimField f0 = anchor_field(static_cast<int>(state.range(0)));
    auto ws = make_workspace();
    for (auto _ : state) {
        state.PauseTiming();
        SimField f = f0;
        state.ResumeTiming();
        benchmark::DoNotOptimize(step(f, 0.8, true, 10.0, ws.get()));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_SimStepSerial(benchmark::State& state) {
    const SimField f0 = anchor_field(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        state.PauseTiming();
        SimField f = f0;
        state.ResumeTiming();
        benchmark::DoNotOptimize(step_reference(f, 0.8, true, 10.0));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

SweepOptions sweep_options(int n) {
    SweepOptions o;
    o.n_m1 = o.n_theta = n;
    o.extract_curves = false;
    return o;
}

void BM_SweepParallel(benchmark::State& state) {
    const auto o = sweep_options(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sweep(o));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_SweepSerial(benchmark::State& state) {
    const auto o = sweep_options(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sweep_reference(o));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

}  // namespace

BENCHMARK(BM_SimStepParallel)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimStepSerial)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
