#include "ouhjb/strategy.hpp"

#include <cmath>

#include "ouhjb/error.hpp"

namespace ouhjb {

Controls optimal_controls(const HjbSolution& solution, double t, double y) {
    const ModelParams& p = solution.params;
    const double h = interpolate(solution, t, y);
    return {risk_premium(p, y) / (1.0 - p.gamma()), std::pow(h, -p.q_star())};
}

WealthCoefficients wealth_coefficients(const HjbSolution& solution, double t, double y) {
    const ModelParams& p = solution.params;
    const double theta = risk_premium(p, y);
    const double c = std::pow(interpolate(solution, t, y), -p.q_star());
    return {theta * theta / (1.0 - p.gamma()) + p.r() - c, theta / (1.0 - p.gamma())};
}

double value_from_h(const HjbSolution& solution, double x0, double y, double t) {
    if (!(x0 > 0.0)) throw ValidationError("value_from_h: x0 must be positive");
    return std::pow(x0, solution.params.gamma()) * interpolate(solution, t, y);
}

Strategy Strategy::optimal(const HjbSolution& solution) {
    return Strategy(StrategyKind::Optimal, &solution, solution.params);
}

Strategy Strategy::estimated(const HjbSolution& estimated_solution) {
    return Strategy(StrategyKind::Estimated, &estimated_solution, estimated_solution.params);
}

Strategy Strategy::zero_investment(const ModelParams& params) {
    return Strategy(StrategyKind::ZeroInvestment, nullptr, params);
}

Strategy Strategy::scaled(double pi_scale, double c_scale) const {
    if (!(c_scale >= 0.0) || !std::isfinite(pi_scale)) throw ValidationError("strategy scales must be finite, c_scale >= 0");
    Strategy s = *this;
    s.pi_scale_ *= pi_scale;
    s.c_scale_ *= c_scale;
    return s;
}

Controls Strategy::controls(double t, double y) const {
    Controls u;
    if (kind_ == StrategyKind::ZeroInvestment) {
        u = {0.0, params_.r()};
    } else {
        u = optimal_controls(*solution_, t, y);
    }
    return {u.pi * pi_scale_, u.c * c_scale_};
}

std::string Strategy::name() const {
    std::string base = kind_ == StrategyKind::Optimal     ? "optimal"
                       : kind_ == StrategyKind::Estimated ? "estimated"
                                                          : "zero_investment";
    if (pi_scale_ != 1.0 || c_scale_ != 1.0) {
        const auto fmt = [](double v) {
            std::string s = std::to_string(v);
            while (s.size() > 1 && s.back() == '0') s.pop_back();
            if (s.back() == '.') s.pop_back();
            return s;
        };
        base += "[pi*" + fmt(pi_scale_) + ";c*" + fmt(c_scale_) + "]";
    }
    return base;
}

namespace {

template <bool Record>
StrategyOutcome run(const Strategy& strategy, const PathBundle& b, const ModelParams& market, double x0) {
    if (!(x0 > 0.0)) throw ValidationError("evolve_wealth: x0 must be positive");
    const TimeGrid& g = b.grid;
    if (strategy.kind() != StrategyKind::ZeroInvestment) {
        const double tol = 1e-9 * std::max(1.0, market.horizon());
        const ModelParams& sp = strategy.strategy_params();
        if (g.start() < sp.t0() - tol || std::abs(g.end() - sp.horizon()) > tol) {
            throw ValidationError("evolve_wealth: path grid must lie in [t0, horizon] and end at the horizon");
        }
    }
    const std::size_t n = g.n_steps();
    if (b.y_path.size() != n + 1 || b.w_increments.size() != n) {
        throw ValidationError("evolve_wealth: bundle arrays do not match its grid");
    }
    const double gamma = market.gamma();
    const double dt = g.dt();

    StrategyOutcome out;
    if constexpr (Record) {
        out.x_path.resize(n + 1);
        out.consumption_path.resize(n + 1);
    }
    double x = x0;
    Controls u = strategy.controls(g.time(0), b.y_path[0]);
    double util_prev = std::pow(u.c * x, gamma);
    for (std::size_t k = 0; k < n; ++k) {
        if constexpr (Record) {
            out.x_path[k] = x;
            out.consumption_path[k] = u.c * x;
        }
        const double theta = risk_premium(market, b.y_path[k]);
        const double a = market.r() + u.pi * theta - u.c;
        x *= std::exp((a - 0.5 * u.pi * u.pi) * dt + u.pi * b.w_increments[k]);
        if (!(x > 0.0) || !std::isfinite(x)) throw NumericalError("evolve_wealth: wealth left (0, inf)");
        const Controls next = strategy.controls(g.time(k + 1), b.y_path[k + 1]);
        const double util_next = std::pow(next.c * x, gamma);
        out.utility_integral += 0.5 * dt * (util_prev + util_next);
        out.pi_sq_integral += 0.5 * dt * (u.pi * u.pi + next.pi * next.pi);
        out.c_integral += 0.5 * dt * (u.c + next.c);
        util_prev = util_next;
        u = next;
    }
    if constexpr (Record) {
        out.x_path[n] = x;
        out.consumption_path[n] = u.c * x;
    }
    if (!std::isfinite(out.pi_sq_integral) || !std::isfinite(out.c_integral)) {
        throw NumericalError("evolve_wealth: strategy not admissible on this path");
    }
    out.terminal_utility = std::pow(x, gamma);
    out.objective = out.utility_integral + out.terminal_utility;
    return out;
}

}  // namespace

StrategyOutcome evolve_wealth(const Strategy& strategy, const PathBundle& bundle, const ModelParams& params,
                              double x0) {
    return run<true>(strategy, bundle, params, x0);
}

double path_objective(const Strategy& strategy, const PathBundle& bundle, const ModelParams& params, double x0) {
    return run<false>(strategy, bundle, params, x0).objective;
}

}  // namespace ouhjb
