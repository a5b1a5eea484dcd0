#include <benchmark/benchmark.h>

#include <ouhjb/hjb.hpp>

using namespace ouhjb;

namespace {

SolverConfig grid_config(const ModelParams& p, std::size_t n_y, std::size_t n_t) {
    auto c = SolverConfig::for_params(p);
    c.n_y = n_y;
    c.n_t = n_t;
    return c;
}

void BM_OperatorPde(benchmark::State& state) {
    ModelParams p;
    const auto n_y = static_cast<std::size_t>(state.range(0));
    auto sol = fixed_point_solve(p, grid_config(p, n_y, n_y / 2 + 1));
    for (auto _ : state) {
        auto next = apply_operator_pde(sol.h, p);
        benchmark::DoNotOptimize(next.at(0, n_y / 2));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sol.h.n_t() * n_y));
}
BENCHMARK(BM_OperatorPde)->Arg(101)->Arg(201)->Arg(401)->Arg(801)->Unit(benchmark::kMillisecond);

void BM_FixedPointSolve(benchmark::State& state) {
    ModelParams p;
    const auto c = grid_config(p, static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) {
        auto sol = fixed_point_solve(p, c);
        benchmark::DoNotOptimize(sol.h.at(0, 0));
    }
}
BENCHMARK(BM_FixedPointSolve)->Args({201, 101})->Args({401, 201})->Unit(benchmark::kMillisecond);

void BM_OperatorMc(benchmark::State& state) {
    ModelParams p;
    auto sol = fixed_point_solve(p);
    auto f = [&](double t, double y) { return interpolate(sol, t, y); };
    const auto paths = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto est = apply_operator_mc(f, p.t0(), 0.0, p, paths, 7);
        benchmark::DoNotOptimize(est.mean);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OperatorMc)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_ZetaStar(benchmark::State& state) {
    int n = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimized_bound(n, 1.0, 0.0081));
        n = n % 60 + 1;
    }
}
BENCHMARK(BM_ZetaStar);

}  // namespace
