#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ouhjb/error.hpp"
#include "ouhjb/model.hpp"

using namespace ouhjb;

namespace {

ModelParams with_vol(VolatilitySpec v) {
    ModelInputs in;
    in.vol = std::move(v);
    return ModelParams(in);
}

std::string validation_message(const ModelInputs& in) {
    try {
        ModelParams p(in);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(RiskPremium, Examples) {
    ModelParams p;
    EXPECT_DOUBLE_EQ(risk_premium(p, 0.0), 0.02);
    EXPECT_NEAR(risk_premium(p, std::numbers::pi / 2), 0.01 / 1.5, 1e-15);
    ModelInputs in;
    in.mu = in.r = 0.02;
    ModelParams z(in);
    for (double y : {-3.0, 0.0, 1.7}) EXPECT_EQ(risk_premium(z, y), 0.0);
}

TEST(RiskPremium, AntitoneInSigma) {
    ModelParams p;
    double prev_sigma = 0, prev_theta = 1e9;
    for (double y = 0.0; y <= std::numbers::pi / 2; y += 0.01) {
        const double s = p.vol()(y), th = risk_premium(p, y);
        if (s > prev_sigma) EXPECT_LE(th, prev_theta);
        prev_sigma = s;
        prev_theta = th;
    }
}

TEST(QFunction, Examples) {
    ModelParams p;
    EXPECT_NEAR(q_function(p, 0.0), 0.0081, 1e-15);
    ModelInputs in;
    in.mu = in.r = 0.02;
    EXPECT_NEAR(q_function(ModelParams(in), 0.4), 0.75 * 0.02, 1e-16);
    ModelInputs g;
    g.gamma = 1e-9;
    EXPECT_LT(q_function(ModelParams(g), 0.0), 1e-10);
}

TEST(QFunction, BoundsAndSymmetry) {
    ModelParams p;
    const double qs = q_star_analytic(p);
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-20, 20);
    for (int i = 0; i < 1000; ++i) {
        const double y = u(gen);
        EXPECT_LE(q_function(p, y), qs + 1e-18);
        EXPECT_GE(q_function(p, y), p.gamma() * p.r());
        EXPECT_DOUBLE_EQ(q_function(p, y), q_function(p, -y));
    }
}

TEST(QBounds, QStarAnalytic) {
    ModelParams p;
    std::vector<double> grid;
    for (int i = 0; i <= 400; ++i) grid.push_back(-6.0 + 0.03 * i);
    auto qb = q_bounds(p, grid);
    // Q decreases in sigma, so the sup sits at sigma_min = 0.5.
    const double expected = 0.75 * (0.01 + 0.01 * 0.01 / (2 * 0.25 * 0.25));
    EXPECT_NEAR(expected, 0.0081, 1e-15);
    EXPECT_NEAR(qb.q_star_sup, expected, 1e-15);
}

TEST(QBounds, ConstantSigmaHasZeroDerivativeBound) {
    auto p = with_vol(VolatilitySpec::constant(0.5));
    std::vector<double> grid{-1, 0, 1};
    EXPECT_EQ(q_bounds(p, grid).q_deriv_sup, 0.0);
}

TEST(QBounds, DerivativeMatchesDenseScan) {
    ModelParams p;
    std::vector<double> grid;
    for (int i = 0; i <= 400; ++i) grid.push_back(-6.0 + 0.03 * i);
    auto qb = q_bounds(p, grid);
    double scan = 0;
    const double e = 1e-4;
    for (double y = -6.0; y <= 6.0; y += 1e-4)
        scan = std::max(scan, std::abs(q_function(p, y + e) - q_function(p, y - e)) / (2 * e));
    EXPECT_GE(qb.q_deriv_sup, scan);
    EXPECT_LE(qb.q_deriv_sup, 1.05 * scan * 1.001);
}

TEST(QBounds, RejectsEmptyGrid) {
    ModelParams p;
    std::vector<double> empty;
    EXPECT_THROW(q_bounds(p, empty), ValidationError);
}

TEST(VolatilitySpec, BoundsAndDerivativeConsistency) {
    std::vector<VolatilitySpec> specs{VolatilitySpec::constant(0.3), VolatilitySpec::sin2(0.5, 1.0),
                                      VolatilitySpec::logistic(0.2, 0.9, 1.5)};
    for (const auto& v : specs) {
        for (double y = -8.0; y <= 8.0; y += 0.173) {
            EXPECT_GE(v(y), v.sigma_min());
            EXPECT_LE(v(y), v.sigma_max());
            const double fd = (v(y + 1e-6) - v(y - 1e-6)) / 2e-6;
            EXPECT_NEAR(fd, v.derivative(y), 1e-5) << v.kind_name() << " y=" << y;
        }
    }
    EXPECT_DOUBLE_EQ(VolatilitySpec::sin2().sigma_min(), 0.5);
    EXPECT_DOUBLE_EQ(VolatilitySpec::sin2().sigma_max(), 1.5);
}

TEST(VolatilitySpec, RejectsBadShapes) {
    EXPECT_THROW(VolatilitySpec::constant(0.0), ValidationError);
    EXPECT_THROW(VolatilitySpec::sin2(-0.1, 1.0), ValidationError);
    EXPECT_THROW(VolatilitySpec::logistic(0.9, 0.2, 1.0), ValidationError);
    EXPECT_THROW(VolatilitySpec::from_name("constant", {}), ValidationError);
    auto c = VolatilitySpec::custom([](double y) { return 1.0 + 0.5 * std::tanh(y); },
                                    [](double y) { return 0.5 / std::cosh(y) / std::cosh(y); }, 0.5, 1.5);
    EXPECT_NEAR(c(0.0), 1.0, 1e-15);
    EXPECT_FALSE(c.is_even());
}

TEST(ModelParams, DerivedQuantities) {
    ModelParams p;
    EXPECT_DOUBLE_EQ(p.q_star(), 4.0);
    EXPECT_GT(p.q_star(), 1.0);
    EXPECT_DOUBLE_EQ(p.t_tilde(), 1.0);
    auto q = p.with_alpha(-1.0);
    EXPECT_DOUBLE_EQ(q.alpha(), -1.0);
    EXPECT_FALSE(q == p);
    EXPECT_TRUE(p.with_alpha(-5.0) == p);
    EXPECT_THROW(p.with_alpha(-20.0), ValidationError);
    EXPECT_THROW(p.with_mu(0.5), ValidationError);
}

TEST(ModelParams, ValidationNamesField) {
    auto check = [](auto mutate, const char* field) {
        ModelInputs in;
        mutate(in);
        const std::string msg = validation_message(in);
        EXPECT_NE(msg.find(field), std::string::npos) << field << ": " << msg;
    };
    check([](ModelInputs& in) { in.gamma = 1.5; }, "gamma");
    check([](ModelInputs& in) { in.gamma = 0.0; }, "gamma");
    check([](ModelInputs& in) { in.alpha = 0.1; }, "alpha");
    check([](ModelInputs& in) { in.alpha_hi = 0.0; }, "alpha_hi");
    check([](ModelInputs& in) { in.alpha_lo = -0.1; }, "alpha");
    check([](ModelInputs& in) { in.mu = 0.5; }, "mu");
    check([](ModelInputs& in) { in.mu_lo = 0.0; }, "mu_lo");
    check([](ModelInputs& in) { in.beta = -1.0; }, "beta");
    check([](ModelInputs& in) { in.t0 = 0.0; }, "t0");
    check([](ModelInputs& in) { in.horizon = 5.0; }, "horizon");
    check([](ModelInputs& in) { in.r = std::nan(""); }, "r");
    ModelInputs in;
    in.gamma = 1.5;
    EXPECT_NE(validation_message(in).find("(0,1)"), std::string::npos);
}
