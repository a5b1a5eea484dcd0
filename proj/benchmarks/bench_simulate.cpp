#include <benchmark/benchmark.h>

#include <ouhjb/estimate.hpp>
#include <ouhjb/rng.hpp>
#include <ouhjb/simulate.hpp>

using namespace ouhjb;

static void BM_PhiloxNormals(benchmark::State& state) {
    RngStream rng(42, 3);
    std::uint64_t k = 0;
    for (auto _ : state) benchmark::DoNotOptimize(rng.normals(k++));
    state.SetItemsProcessed(state.iterations() * 2);
}
BENCHMARK(BM_PhiloxNormals);

static void BM_OuStep(benchmark::State& state) {
    double y = 0.3;
    for (auto _ : state) {
        y = ou_step(y, 1e-3, -5.0, 1.0, 0.1);
        benchmark::DoNotOptimize(y);
    }
}
BENCHMARK(BM_OuStep);

static void BM_SimulatePath(benchmark::State& state) {
    ModelParams p;
    const auto grid = TimeGrid::with_step(0.0, p.horizon(), 1.0 / static_cast<double>(state.range(0)));
    std::uint64_t id = 0;
    for (auto _ : state) {
        auto b = simulate_path(p, grid, p.y0(), 1.0, 11, id++);
        benchmark::DoNotOptimize(b.y_path.back());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.n_steps()));
}
BENCHMARK(BM_SimulatePath)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

static void BM_Estimate(benchmark::State& state) {
    ModelParams p;
    const auto grid = TimeGrid::with_step(0.0, p.t0(), 1e-3);
    auto b = simulate_path(p, grid, p.y0(), 1.0, 5, 0);
    for (auto _ : state) {
        auto r = estimate(b, p);
        benchmark::DoNotOptimize(r.alpha_hat);
    }
}
BENCHMARK(BM_Estimate)->Unit(benchmark::kMicrosecond);
