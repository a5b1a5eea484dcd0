#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ouhjb/model.hpp"
#include "ouhjb/simulate.hpp"

namespace ouhjb {

/// H = beta2 (t0 - t0^{5/6}), beta2 = beta^2 / (2 |alpha_lo|).
double stopping_threshold(const ModelParams& params);

/// First time (from grid.start()) at which the trapezoid integral of Y^2
/// reaches H, interpolated linearly inside the crossing step. Empty when the
/// integral over the whole grid stays below H.
std::optional<double> stopping_time(const std::vector<double>& y_path, const TimeGrid& grid, double H);

struct EstimationReport {
    double alpha_hat = 0.0;       ///< alpha_raw projected onto [alpha_lo, alpha_hi]
    double alpha_raw = 0.0;       ///< 0 when the threshold was not reached
    std::optional<double> tau_H;  ///< empty when not reached within t0
    double H = 0.0;
    double mu_hat = 0.0;
    double epsilon_t0 = 0.0;
    double epsilon1_t0 = 0.0;
    double t0 = 0.0;
};

/// Truncated sequential estimate of alpha from the factor path on [0, t0].
/// `H_override` replaces the default threshold. epsilon fields are left at 0
/// when the bounds are undefined (t0 <= 1 or beta = 0).
EstimationReport sequential_alpha(const std::vector<double>& y_path, const TimeGrid& grid,
                                  const ModelParams& params, std::optional<double> H_override = std::nullopt);

/// mu_hat = (sum_k (S_{k+1} - S_k) / S_k) / t0, unprojected.
double mu_estimate(const std::vector<double>& s_path, const TimeGrid& grid, double t0);

/// Both estimates from one observation bundle on [0, t0].
EstimationReport estimate(const PathBundle& bundle, const ModelParams& params);

/// Intermediate constants of the alpha error bound (m = 3).
struct EpsilonTerms {
    double beta1 = 0.0;   ///< beta^2 / (2 |alpha_hi|)
    double beta2 = 0.0;   ///< beta^2 / (2 |alpha_lo|)
    double H = 0.0;
    double kappa1 = 0.0;  ///< 2^5 (y0^6 + 15 beta1^3)
    double kappa2 = 0.0;  ///< 15^3 kappa1
    double kappa = 0.0;   ///< 3^5 (y0^6 + (1 + 15^3 (2 beta)^6) kappa1)
    double epsilon = 0.0; ///< sqrt(beta^2/H + alpha_lo^2 / beta^12 kappa / t0^2)
};

/// Requires t0 > 1 and beta > 0.
EpsilonTerms epsilon_terms(const ModelParams& params);
double epsilon_bound(const ModelParams& params);
/// sigma_max / sqrt(t0).
double epsilon1_bound(const ModelParams& params);

struct EstimationSummary {
    std::size_t n_reps = 0;
    double mean_abs_alpha_error = 0.0;
    double se_abs_alpha_error = 0.0;
    double mean_abs_mu_error = 0.0;
    double se_abs_mu_error = 0.0;
    double mean_alpha_hat = 0.0;
    double hit_rate = 0.0;  ///< fraction with tau_H <= t0
    double alpha_hat_q05 = 0.0, alpha_hat_q50 = 0.0, alpha_hat_q95 = 0.0;
    double mu_hat_q05 = 0.0, mu_hat_q50 = 0.0, mu_hat_q95 = 0.0;
    double epsilon_t0 = 0.0;
    double epsilon1_t0 = 0.0;
    std::vector<EstimationReport> reports;  ///< in replication order
};

/// Independent replications on [0, t0] with step about dt; replication i uses
/// stream i of `seed`.
EstimationSummary replicate_estimation(const ModelParams& params, std::size_t n_reps, std::uint64_t seed,
                                       double dt = 1e-3);

}  // namespace ouhjb
