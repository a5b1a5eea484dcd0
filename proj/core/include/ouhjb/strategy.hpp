#pragma once

#include <string>
#include <vector>

#include "ouhjb/hjb.hpp"
#include "ouhjb/model.hpp"
#include "ouhjb/simulate.hpp"

namespace ouhjb {

struct Controls {
    double pi = 0.0;  ///< investment control; wealth volatility is pi
    double c = 0.0;   ///< consumption rate per unit wealth
};

struct WealthCoefficients {
    double a_star = 0.0;  ///< drift theta^2/(1-gamma) + r - c*
    double b_star = 0.0;  ///< volatility theta/(1-gamma)
};

/// pi* = theta(y)/(1-gamma), c* = h(t,y)^{-q*}, both under solution.params.
Controls optimal_controls(const HjbSolution& solution, double t, double y);
WealthCoefficients wealth_coefficients(const HjbSolution& solution, double t, double y);

/// x0^gamma h(t, y).
double value_from_h(const HjbSolution& solution, double x0, double y, double t);

enum class StrategyKind { Optimal, Estimated, ZeroInvestment };

/// A feedback rule (t, y) -> (pi, c). Optimal and Estimated strategies read h
/// from a solution they do not own; it must outlive the strategy. An Estimated
/// strategy is one whose solution was computed under estimated parameters.
class Strategy {
  public:
    static Strategy optimal(const HjbSolution& solution);
    static Strategy estimated(const HjbSolution& estimated_solution);
    /// pi = 0 and c = r, which keeps wealth constant.
    static Strategy zero_investment(const ModelParams& params);

    /// Same rule with pi and c multiplied by the given factors.
    Strategy scaled(double pi_scale, double c_scale) const;

    Controls controls(double t, double y) const;

    StrategyKind kind() const noexcept { return kind_; }
    std::string name() const;
    const HjbSolution* solution() const noexcept { return solution_; }
    /// Parameters the rule was built under.
    const ModelParams& strategy_params() const noexcept { return params_; }
    double pi_scale() const noexcept { return pi_scale_; }
    double c_scale() const noexcept { return c_scale_; }

  private:
    Strategy(StrategyKind kind, const HjbSolution* solution, ModelParams params)
        : kind_(kind), solution_(solution), params_(std::move(params)) {}

    StrategyKind kind_;
    const HjbSolution* solution_;
    ModelParams params_;
    double pi_scale_ = 1.0;
    double c_scale_ = 1.0;
};

struct StrategyOutcome {
    std::vector<double> x_path;            ///< wealth per grid point
    std::vector<double> consumption_path;  ///< c_t X_t per grid point
    double utility_integral = 0.0;         ///< trapezoid of (c X)^gamma
    double terminal_utility = 0.0;         ///< X_T^gamma
    double objective = 0.0;
    double pi_sq_integral = 0.0;           ///< int pi^2 dt
    double c_integral = 0.0;               ///< int c dt
};

/// Evolves wealth along the bundle under the market `params`:
/// X_{k+1} = X_k exp((a - b^2/2) dt + b dW_k), a = r + pi theta - c, b = pi,
/// with coefficients frozen at (t_k, Y_k). The grid must cover
/// [t, horizon] with t >= strategy t0 (any grid for ZeroInvestment).
StrategyOutcome evolve_wealth(const Strategy& strategy, const PathBundle& bundle, const ModelParams& params,
                              double x0);
/// Objective of evolve_wealth without recording paths.
double path_objective(const Strategy& strategy, const PathBundle& bundle, const ModelParams& params, double x0);

}  // namespace ouhjb
