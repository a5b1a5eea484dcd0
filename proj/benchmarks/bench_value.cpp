#include <benchmark/benchmark.h>

#include <ouhjb/experiments.hpp>
#include <ouhjb/hjb.hpp>
#include <ouhjb/strategy.hpp>

using namespace ouhjb;

static void BM_McValue(benchmark::State& state) {
    ModelParams p;
    static const auto sol = fixed_point_solve(p);
    const auto strategy = Strategy::optimal(sol);
    const auto paths = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto v = mc_value(strategy, p, 1.0, 0.0, paths, 3, 5e-3);
        benchmark::DoNotOptimize(v.mean);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McValue)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_OptimalControls(benchmark::State& state) {
    ModelParams p;
    static const auto sol = fixed_point_solve(p);
    double y = -2.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimal_controls(sol, p.t0() + 0.3, y));
        y = y > 2.0 ? -2.0 : y + 0.01;
    }
}
BENCHMARK(BM_OptimalControls);
