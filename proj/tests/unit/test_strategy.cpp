#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "ouhjb/error.hpp"
#include "ouhjb/experiments.hpp"
#include "ouhjb/strategy.hpp"

using namespace ouhjb;

namespace {

ModelParams constant_sigma_params() {
    ModelInputs in;
    in.vol = VolatilitySpec::constant(0.5);
    return ModelParams(in);
}

const HjbSolution& fig2() {
    static const HjbSolution s = fixed_point_solve(ModelParams{});
    return s;
}

const HjbSolution& merton() {
    static const HjbSolution s = fixed_point_solve(constant_sigma_params());
    return s;
}

}  // namespace

TEST(OptimalControls, Examples) {
    auto u = optimal_controls(fig2(), 5.3, 0.0);
    EXPECT_NEAR(u.pi, 0.08, 1e-15);
    EXPECT_GT(u.c, 0.0);
    EXPECT_LE(u.c, 1.0);
    EXPECT_EQ(optimal_controls(fig2(), 6.0, 0.4).c, 1.0);
    const double h0 = oracle::merton_h(5.0, 6.0, 4.0, 0.0081);
    EXPECT_NEAR(std::pow(h0, -4.0), 0.4879, 2e-4);
    EXPECT_NEAR(optimal_controls(merton(), 5.0, 0.0).c, std::pow(h0, -4.0), 2e-4);
}

TEST(WealthCoefficients, Examples) {
    auto w = wealth_coefficients(fig2(), 6.0, 0.0);
    EXPECT_NEAR(w.a_star, 0.0004 * 4 + 0.01 - 1.0, 1e-15);
    EXPECT_NEAR(w.a_star, -0.9884, 1e-15);
    EXPECT_NEAR(w.b_star, 0.08, 1e-15);
    ModelInputs in;
    in.mu = in.r = 0.02;
    auto sol = fixed_point_solve(ModelParams(in));
    auto z = wealth_coefficients(sol, 5.5, 0.3);
    EXPECT_EQ(z.b_star, 0.0);
    EXPECT_NEAR(z.a_star, 0.02 - std::pow(interpolate(sol, 5.5, 0.3), -4.0), 1e-15);
}

TEST(ValueFromH, Examples) {
    EXPECT_EQ(value_from_h(fig2(), 1.0, 0.3, 6.0), 1.0);
    const double v = value_from_h(fig2(), 1.0, 0.0, 5.0);
    EXPECT_NEAR(value_from_h(fig2(), 2.5, 0.0, 5.0), std::pow(2.5, 0.75) * v, 1e-14);
    EXPECT_NEAR(value_from_h(merton(), 1.0, 0.0, 5.0), oracle::merton_h(5.0, 6.0, 4.0, 0.0081), 1e-4);
    EXPECT_NEAR(value_from_h(merton(), 1.0, 0.0, 5.0), 1.1966, 2e-4);
    EXPECT_THROW(value_from_h(fig2(), 0.0, 0.0, 5.0), ValidationError);
}

TEST(Strategy, NamesAndKinds) {
    auto s = Strategy::optimal(fig2());
    EXPECT_EQ(s.kind(), StrategyKind::Optimal);
    EXPECT_EQ(s.name(), "optimal");
    EXPECT_EQ(s.scaled(1.2, 1.0).name(), "optimal[pi*1.2;c*1]");
    EXPECT_EQ(Strategy::zero_investment(ModelParams{}).name(), "zero_investment");
    auto e = Strategy::estimated(fig2());
    EXPECT_EQ(e.kind(), StrategyKind::Estimated);
    EXPECT_TRUE(e.strategy_params() == fig2().params);
    auto p = perturbed_strategies(s);
    ASSERT_EQ(p.size(), 5u);
    EXPECT_DOUBLE_EQ(p[0].pi_scale(), 1.2);
    EXPECT_DOUBLE_EQ(p[4].c_scale(), 0.5);
    EXPECT_THROW(s.scaled(1.0, -1.0), ValidationError);
}

TEST(EvolveWealth, ZeroInvestmentKeepsWealthConstant) {
    ModelParams p;
    TimeGrid g(0.0, 5.0, 5000);
    auto b = simulate_path(p, g, 0.0, 1.0, 3, 0);
    auto out = evolve_wealth(Strategy::zero_investment(p), b, p, 2.0);
    for (double x : out.x_path) EXPECT_EQ(x, 2.0);
}

TEST(EvolveWealth, DeterministicWithoutControls) {
    ModelParams p;
    auto s = Strategy::optimal(fig2()).scaled(0.0, 0.0);
    auto b = simulate_path(p, TimeGrid(5.0, 6.0, 500), 0.0, 1.0, 5, 0);
    auto out = evolve_wealth(s, b, p, 1.5);
    EXPECT_NEAR(out.x_path.back(), 1.5 * std::exp(0.01), 1e-12);
    EXPECT_EQ(out.utility_integral, 0.0);
    EXPECT_NEAR(out.objective, std::pow(1.5 * std::exp(0.01), 0.75), 1e-12);
}

TEST(EvolveWealth, OutcomeInvariants) {
    ModelParams p;
    auto s = Strategy::optimal(fig2());
    for (std::uint64_t id = 0; id < 50; ++id) {
        auto b = simulate_path(p, TimeGrid(5.0, 6.0, 500), 0.0, 1.0, 8, id);
        auto out = evolve_wealth(s, b, p, 1.0);
        ASSERT_EQ(out.x_path.size(), 501u);
        for (double x : out.x_path) EXPECT_GT(x, 0.0);
        EXPECT_GT(out.objective, 0.0);
        EXPECT_NEAR(out.objective, out.utility_integral + out.terminal_utility, 1e-15);
        EXPECT_NEAR(out.terminal_utility, std::pow(out.x_path.back(), 0.75), 1e-14);
        EXPECT_TRUE(std::isfinite(out.pi_sq_integral));
        EXPECT_TRUE(std::isfinite(out.c_integral));
        EXPECT_EQ(path_objective(s, b, p, 1.0), out.objective);
        EXPECT_NEAR(out.consumption_path[0], out.x_path[0] * s.controls(5.0, 0.0).c, 1e-15);
    }
}

TEST(EvolveWealth, RejectsBadGridsAndEndowments) {
    ModelParams p;
    auto s = Strategy::optimal(fig2());
    auto early = simulate_path(p, TimeGrid(4.0, 6.0, 100), 0.0, 1.0, 1, 0);
    EXPECT_THROW(evolve_wealth(s, early, p, 1.0), ValidationError);
    auto short_ = simulate_path(p, TimeGrid(5.0, 5.5, 100), 0.0, 1.0, 1, 0);
    EXPECT_THROW(evolve_wealth(s, short_, p, 1.0), ValidationError);
    auto ok = simulate_path(p, TimeGrid(5.0, 6.0, 100), 0.0, 1.0, 1, 0);
    EXPECT_THROW(evolve_wealth(s, ok, p, 0.0), ValidationError);
    EXPECT_NO_THROW(evolve_wealth(s, ok, p, 1.0));
}

TEST(EvolveWealth, ConstantSigmaObjectiveMatchesClosedForm) {
    auto p = constant_sigma_params();
    auto est = mc_value(Strategy::optimal(merton()), p, 1.0, 0.0, 100000, 21, 1e-3);
    const double exact = oracle::merton_h(5.0, 6.0, 4.0, 0.0081);
    EXPECT_LE(std::abs(est.mean - exact), 3 * est.std_error) << est.mean << " se " << est.std_error;
}

TEST(EvolveWealth, ConsumptionPerturbationsAreDominated) {
    ModelParams p;
    auto opt = Strategy::optimal(fig2());
    std::vector<Strategy> s{opt, opt.scaled(1, 1.2), opt.scaled(1, 0.8), opt.scaled(1, 0.5)};
    auto cmp = compare_strategies(s, p, 1.0, 0.0, 5000, 4, 4e-3);
    for (std::size_t k = 1; k < s.size(); ++k) EXPECT_GT(cmp.diff_mean[k], 2 * cmp.diff_se[k]) << cmp.names[k];
}
