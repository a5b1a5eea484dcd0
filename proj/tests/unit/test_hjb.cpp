#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ouhjb/error.hpp"
#include "ouhjb/hjb.hpp"

using namespace ouhjb;

namespace {

ModelParams constant_sigma_params() {
    ModelInputs in;
    in.vol = VolatilitySpec::constant(0.5);
    return ModelParams(in);
}

Grid2D grid_for(const ModelParams& p, std::size_t n_t = 201, std::size_t n_y = 401, double fill = 1.0) {
    auto c = SolverConfig::for_params(p);
    return Grid2D(UniformAxis(p.t0(), p.horizon(), n_t), UniformAxis(c.y_min, c.y_max, n_y), fill);
}

const HjbSolution& fig2_solution() {
    static const HjbSolution sol = [] {
        ModelParams p;
        auto c = SolverConfig::for_params(p);
        c.keep_iterates = true;
        return fixed_point_solve(p, c);
    }();
    return sol;
}

double sup_abs_diff(const Grid2D& a, const Grid2D& b) {
    double m = 0;
    for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

}  // namespace

TEST(RhoStar, Examples) {
    ModelParams p;
    auto f = grid_for(p, 11, 21, 1.5);
    auto g = f;
    EXPECT_EQ(rho_star_distance(f, g, 2.0, p.horizon()), 0.0);
    for (double& v : g.data()) v -= 0.25;
    EXPECT_DOUBLE_EQ(rho_star_distance(f, g, 2.0, p.horizon()), 0.25);
    auto e = f;
    for (std::size_t i = 0; i < e.n_t(); ++i)
        for (std::size_t j = 0; j < e.n_y(); ++j)
            e.at(i, j) = f.at(i, j) + std::exp(2.0 * (p.horizon() - e.t_axis()[i]));
    EXPECT_NEAR(rho_star_distance(e, f, 2.0, p.horizon()), 1.0, 1e-14);
    EXPECT_THROW(rho_star_distance(f, grid_for(p, 12, 21), 2.0, p.horizon()), ValidationError);
}

TEST(SolverConfig, DefaultsAndValidation) {
    ModelParams p;
    auto c = SolverConfig::for_params(p);
    EXPECT_EQ(c.n_y, 401u);
    EXPECT_EQ(c.n_t, 201u);
    EXPECT_EQ(c.max_iter, 64);
    EXPECT_DOUBLE_EQ(c.stop_tol, 1e-8);
    EXPECT_LT(c.y_min, 0.0);
    EXPECT_GT(c.y_max, 0.0);
    const double half = 6.0 * 1.0 / std::sqrt(2.0 * 0.15);
    EXPECT_NEAR(c.y_max - c.y_min, 2 * half, 1e-12);
    auto bad = c;
    bad.n_y = 2;
    EXPECT_THROW(bad.validate(), ValidationError);
    bad = c;
    bad.n_t = 1;
    EXPECT_THROW(bad.validate(), ValidationError);
    bad = c;
    bad.y_min = bad.y_max;
    EXPECT_THROW(bad.validate(), ValidationError);
    bad = c;
    bad.zeta = -1.0;
    EXPECT_THROW(bad.validate(), ValidationError);
    bad = c;
    bad.stop_tol = 0.0;
    EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(ApplyOperatorPde, ConstantSigmaLinearClosedForm) {
    auto p = constant_sigma_params();
    auto f = grid_for(p);
    auto u = apply_operator_pde(f, p);
    const double Q = q_function(p, 0.0);
    double err = 0;
    for (std::size_t i = 0; i < u.n_t(); ++i)
        for (std::size_t j = 0; j < u.n_y(); ++j)
            err = std::max(err, std::abs(u.at(i, j) - oracle::linear_u(u.t_axis()[i], p.horizon(), p.q_star(), Q)));
    EXPECT_LT(err, 1e-6);
}

TEST(ApplyOperatorPde, HugeSourceArgumentGivesUnitSolution) {
    ModelInputs in;
    in.r = 0.0;
    in.mu = in.mu_lo = 0.015;
    in.vol = VolatilitySpec::constant(100.0);
    ModelParams p(in);
    auto u = apply_operator_pde(grid_for(p, 101, 101, 1e12), p);
    for (double v : u.data()) EXPECT_NEAR(v, 1.0, 1e-7);
}

TEST(ApplyOperatorPde, TerminalRowIsOne) {
    ModelParams p;
    auto u = apply_operator_pde(grid_for(p, 51, 101), p);
    for (double v : u.row(u.n_t() - 1)) EXPECT_EQ(v, 1.0);
    EXPECT_EQ(u.bilinear(p.horizon(), 0.0), 1.0);
}

TEST(ApplyOperatorPde, RejectsSubUnitInput) {
    ModelParams p;
    auto f = grid_for(p, 11, 21);
    f.at(3, 4) = 0.999;
    EXPECT_THROW(apply_operator_pde(f, p), ValidationError);
}

TEST(ApplyOperatorPde, NonpositivePivotReported) {
    ModelInputs in;
    in.r = 10.0;
    in.mu = 10.01;
    in.mu_lo = 10.0;
    in.mu_hi = 10.02;
    in.beta = 1e-3;
    in.horizon = 7.0;
    ModelParams p(in);
    Grid2D f(UniformAxis(5.0, 7.0, 2), UniformAxis(-0.01, 0.01, 3), 1.0);
    EXPECT_THROW(apply_operator_pde(f, p), NumericalError);
}

TEST(ApplyOperatorPde, UpwindingEngagesAtWideDomain) {
    ModelParams p;
    OperatorStats stats;
    Grid2D f(UniformAxis(p.t0(), p.horizon(), 11), UniformAxis(-40.0, 40.0, 81), 1.0);
    apply_operator_pde(f, p, &stats);
    EXPECT_GT(stats.upwind_nodes, 0u);
    OperatorStats none;
    apply_operator_pde(Grid2D(UniformAxis(p.t0(), p.horizon(), 11), UniformAxis(-1.0, 1.0, 81), 1.0), p, &none);
    EXPECT_EQ(none.upwind_nodes, 0u);
}

TEST(ApplyOperatorMc, TerminalTimeIsExact) {
    ModelParams p;
    auto est = apply_operator_mc([](double, double) { return 1.0; }, p.horizon(), 0.3, p, 100, 1);
    EXPECT_EQ(est.mean, 1.0);
    EXPECT_EQ(est.std_error, 0.0);
    EXPECT_THROW(apply_operator_mc([](double, double) { return 1.0; }, 5.5, 0.0, p, 99, 1), ValidationError);
    EXPECT_THROW(apply_operator_mc([](double, double) { return 1.0; }, 4.0, 0.0, p, 100, 1), ValidationError);
}

TEST(ApplyOperatorMc, ConstantPotentialClosedForm) {
    auto p = constant_sigma_params();
    const double q = q_function(p, 0.0);
    for (double t : {5.0, 5.5}) {
        auto est = apply_operator_mc([](double, double) { return 1.0; }, t, 0.2, p, 1000, 3);
        const double s = p.horizon() - t;
        const double exact = std::exp(q * s) + (std::exp(q * s) - 1.0) / (q * p.q_star());
        EXPECT_LE(std::abs(est.mean - exact), 3 * est.std_error + 1e-9);
    }
}

TEST(ApplyOperatorMc, AgreesWithFixedPoint) {
    const auto& sol = fig2_solution();
    auto f = [&](double t, double y) { return interpolate(sol, t, y); };
    for (auto [t, y] : {std::pair{5.0, 0.0}, {5.4, 1.2}, {5.8, -2.0}}) {
        auto est = apply_operator_mc(f, t, y, sol.params, 20000, 7);
        EXPECT_LE(std::abs(est.mean - interpolate(sol, t, y)), 3 * est.std_error + 5e-3) << t << "," << y;
    }
}

TEST(FixedPoint, ConstantSigmaMatchesClosedForm) {
    auto p = constant_sigma_params();
    auto sol = fixed_point_solve(p);
    ASSERT_TRUE(sol.converged);
    const double Q = 0.0081;
    EXPECT_NEAR(oracle::merton_h(5.0, 6.0, 4.0, Q), 1.1966, 2e-4);
    double err = 0;
    for (std::size_t i = 0; i < sol.h.n_t(); ++i) {
        const double exact = oracle::merton_h(sol.h.t_axis()[i], 6.0, 4.0, Q);
        for (double v : sol.h.row(i)) err = std::max(err, std::abs(v - exact));
    }
    EXPECT_LT(err, 1e-4);
    for (std::size_t i = 0; i < sol.h.n_t(); ++i)
        for (double v : sol.h.row(i)) EXPECT_NEAR(v, sol.h.at(i, 0), 1e-9);
}

TEST(FixedPoint, Fig2MonotoneInTime) {
    const auto& sol = fig2_solution();
    ASSERT_TRUE(sol.converged);
    const std::size_t j0 = sol.h.n_y() / 2;
    EXPECT_NEAR(sol.h.y_axis()[j0], 0.0, 1e-12);
    EXPECT_EQ(sol.h.at(sol.h.n_t() - 1, j0), 1.0);
    for (std::size_t i = 0; i + 1 < sol.h.n_t(); ++i) EXPECT_GT(sol.h.at(i, j0), sol.h.at(i + 1, j0));
}

TEST(FixedPoint, SandwichEveryIterate) {
    const auto& sol = fig2_solution();
    ASSERT_EQ(sol.iterates.size(), static_cast<std::size_t>(sol.iterations));
    EXPECT_NEAR(sol.r_star, 2.0 * std::exp(0.0081), 1e-12);
    for (std::size_t n = 0; n < sol.iterate_min.size(); ++n) {
        EXPECT_GE(sol.iterate_min[n], 1.0 - 1e-12);
        EXPECT_LE(sol.iterate_max[n], sol.r_star);
    }
    for (const auto& it : sol.iterates) {
        EXPECT_GE(it.min(), 1.0);
        EXPECT_LE(it.max(), sol.r_star);
    }
}

TEST(FixedPoint, EmpiricalContraction) {
    const auto& sol = fig2_solution();
    EXPECT_NEAR(sol.lambda, 1.0 / (sol.zeta + 1.0), 1e-15);
    EXPECT_NEAR(sol.kappa, sol.q_bounds.q_star_sup + sol.zeta + 1.0, 1e-15);
    for (std::size_t n = 1; n < sol.rho_history.size(); ++n)
        EXPECT_LE(sol.rho_history[n], (sol.lambda + 0.05) * sol.rho_history[n - 1]) << n;
}

TEST(FixedPoint, CertificateDominatesDeviation) {
    const auto& sol = fig2_solution();
    ASSERT_EQ(sol.certificate.size(), sol.iterates.size());
    for (std::size_t n = 0; n < sol.iterates.size(); ++n)
        EXPECT_LE(sup_abs_diff(sol.iterates[n], sol.h), sol.certificate[n] + 10 * sol.config.stop_tol) << n;
}

TEST(FixedPoint, ResidualAtConvergence) {
    const auto& sol = fig2_solution();
    auto next = apply_operator_pde(sol.h, sol.params);
    EXPECT_LE(rho_star_distance(next, sol.h, sol.kappa, sol.params.horizon()), 2 * sol.config.stop_tol);
}

TEST(FixedPoint, ExplicitZetaGivesSameIterates) {
    ModelParams p;
    auto c = SolverConfig::for_params(p);
    c.n_y = 101;
    c.n_t = 51;
    auto a = fixed_point_solve(p, c);
    c.zeta = 2.0;
    auto b = fixed_point_solve(p, c);
    EXPECT_DOUBLE_EQ(b.zeta, 2.0);
    ASSERT_TRUE(a.converged && b.converged);
    // The runs stop at different n, so they differ by about one update.
    EXPECT_LT(sup_abs_diff(a.h, b.h), 10 * std::max(a.sup_history.back(), b.sup_history.back()));
    const std::size_t n = std::min(a.sup_history.size(), b.sup_history.size());
    for (std::size_t k = 0; k < n; ++k) EXPECT_EQ(a.sup_history[k], b.sup_history[k]);
}

TEST(FixedPoint, NonConvergenceReportedWithDistance) {
    ModelParams p;
    auto c = SolverConfig::for_params(p);
    c.n_y = 51;
    c.n_t = 21;
    c.max_iter = 2;
    auto sol = fixed_point_solve(p, c);
    EXPECT_FALSE(sol.converged);
    EXPECT_EQ(sol.iterations, 2);
    try {
        sol.require_converged();
        FAIL();
    } catch (const ConvergenceError& e) {
        EXPECT_EQ(e.iterations(), 2);
        EXPECT_DOUBLE_EQ(e.final_distance(), sol.rho_history.back());
        EXPECT_GT(e.final_distance(), c.stop_tol);
    }
}

TEST(FixedPoint, GammaDomainGuard) {
    ModelInputs in;
    in.gamma = 1.0;
    EXPECT_THROW(ModelParams{in}, ValidationError);
    in.gamma = 0.0;
    EXPECT_THROW(ModelParams{in}, ValidationError);
}

TEST(ZetaStar, Examples) {
    EXPECT_EQ(zeta_star(1, 1.0), 1.0);
    for (int n : {1, 4, 9, 25}) EXPECT_NEAR(zeta_star(n, double(n)), 1.0 / std::sqrt(double(n)), 1e-14);
    EXPECT_NEAR(zeta_star(10, 1.0), (std::sqrt(85.0) + 9.0) / 2.0, 1e-14);
    EXPECT_NEAR(zeta_star(10, 1.0), 9.1098, 1e-4);
    EXPECT_THROW(zeta_star(0, 1.0), ValidationError);
}

TEST(ZetaStar, MatchesNumericalMinimizer) {
    for (int n : {1, 2, 5, 10, 30}) {
        for (double tt : {0.5, 1.0, 3.0}) {
            auto g = [&](double x) { return x * tt - std::log(x) - (n - 1) * std::log1p(x); };
            const double x = oracle::golden_section_min(g, 1e-6, 200.0, 1e-11);
            EXPECT_NEAR(zeta_star(n, tt), x, 1e-6) << n << " " << tt;
        }
    }
}

TEST(SupergeometricBound, GeometricRatioForFixedZeta) {
    for (int n = 1; n < 20; ++n)
        EXPECT_NEAR(supergeometric_bound(n + 1, 3.0, 1.0, 0.0081) / supergeometric_bound(n, 3.0, 1.0, 0.0081), 0.25,
                    1e-13);
}

TEST(SupergeometricBound, SingleStepRecomputed) {
    const double kappa = 0.0081 + 1.0 + 1.0;
    const double r_star = 2.0 * std::exp(0.0081);
    EXPECT_NEAR(r_star, 2.0163, 1e-4);
    const double b_star = std::exp(kappa) * (1.0 + r_star) / 0.5;
    EXPECT_NEAR(supergeometric_bound(1, 1.0, 1.0, 0.0081), b_star / 2.0, 1e-12 * b_star);
    EXPECT_NEAR(r_star_bound(1.0, 0.0081), r_star, 1e-15);
    ModelParams p;
    EXPECT_NEAR(supergeometric_bound(1, 1.0, p), b_star / 2.0, 1e-12 * b_star);
}

TEST(SupergeometricBound, OptimizedDecaysFasterThanGeometric) {
    double prev = std::log(optimized_bound(10, 1.0, 0.0081)) + 5.0 * std::log(10.0);
    for (int n = 11; n <= 60; ++n) {
        const double scaled = std::log(optimized_bound(n, 1.0, 0.0081)) + 0.5 * n * std::log(double(n));
        EXPECT_LT(scaled, prev) << n;
        prev = scaled;
    }
    EXPECT_LT(prev, std::log(1e-6));
    for (int n : {1, 3, 12})
        EXPECT_NEAR(optimized_bound(n, 1.0, 0.0081), supergeometric_bound(n, zeta_star(n, 1.0), 1.0, 0.0081),
                    1e-12 * optimized_bound(n, 1.0, 0.0081));
}

TEST(Interpolate, NodesMidpointsAndEdges) {
    const auto& sol = fig2_solution();
    const auto& h = sol.h;
    EXPECT_EQ(interpolate(sol, h.t_axis()[40], h.y_axis()[123]), h.at(40, 123));
    EXPECT_EQ(interpolate(sol, sol.params.horizon(), 0.7), 1.0);
    const double tm = 0.5 * (h.t_axis()[10] + h.t_axis()[11]);
    const double ym = 0.5 * (h.y_axis()[200] + h.y_axis()[201]);
    const double mean = 0.25 * (h.at(10, 200) + h.at(11, 200) + h.at(10, 201) + h.at(11, 201));
    EXPECT_NEAR(interpolate(sol, tm, ym), mean, 1e-14);
    EXPECT_THROW(interpolate(sol, 4.9, 0.0), ValidationError);
    EXPECT_THROW(interpolate(sol, 6.1, 0.0), ValidationError);
    const auto before = sol.extrapolations->load();
    EXPECT_EQ(interpolate(sol, 5.5, 1e3), interpolate(sol, 5.5, h.y_axis().hi()));
    EXPECT_GT(sol.extrapolations->load(), before);
}

TEST(Interpolate, BilinearPatchReproduced) {
    ModelParams p;
    Grid2D g(UniformAxis(5.0, 6.0, 3), UniformAxis(-1.0, 1.0, 3), 1.0);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) g.at(i, j) = 1.2 + 0.1 * g.t_axis()[i] * g.y_axis()[j] - 0.05 * g.t_axis()[i];
    const double t = 5.2, y = 0.3;
    EXPECT_NEAR(g.bilinear(t, y), 1.2 + 0.1 * t * y - 0.05 * t, 1e-14);
}

TEST(SolutionIo, RoundTripIsBitExact) {
    ModelParams p;
    auto c = SolverConfig::for_params(p);
    c.n_y = 61;
    c.n_t = 31;
    auto sol = fixed_point_solve(p, c);
    auto dir = oracle::temp_dir("sol");
    save_solution(sol, dir);
    EXPECT_TRUE(std::filesystem::exists(dir / "manifest.json"));
    EXPECT_TRUE(std::filesystem::exists(dir / "h.csv"));
    auto back = load_solution(dir);
    EXPECT_TRUE(back.params == sol.params);
    EXPECT_EQ(back.iterations, sol.iterations);
    EXPECT_EQ(back.rho_history, sol.rho_history);
    EXPECT_EQ(back.certificate, sol.certificate);
    EXPECT_EQ(back.kappa, sol.kappa);
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> ut(5.0, 6.0), uy(-12.0, 12.0);
    for (int k = 0; k < 200; ++k) {
        const double t = ut(gen), y = uy(gen);
        EXPECT_EQ(interpolate(back, t, y), interpolate(sol, t, y));
    }
    std::filesystem::remove_all(dir);
    EXPECT_THROW(load_solution(dir), std::exception);
}
