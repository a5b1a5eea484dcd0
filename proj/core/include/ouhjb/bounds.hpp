#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ouhjb/grid.hpp"
#include "ouhjb/hjb.hpp"
#include "ouhjb/model.hpp"

namespace ouhjb {

struct BoundsOptions {
    double zeta0 = 1.0;  ///< free parameter in kappa = Q* + zeta0 + 2 gamma + 1
    int m = 3;           ///< moment order in wc_m
};

struct LedgerEntry {
    std::string name;
    double value = 0.0;
    std::string formula;
    std::string branch;  ///< "formula", "grid" or "analytic"
};

/// Explicit constants of the delta-optimality bounds. Sup-type quantities
/// (A+, B+, c0) take the larger of the grid supremum over the solution and an
/// analytic bound. The plain variants use the true mu; the _mu2 variants use
/// the upper bound mu_hi and feed the unknown-mu constants.
struct ConstantsLedger {
    ConstantsLedger(ModelParams p, BoundsOptions o) : params(std::move(p)), options(o) {}

    ModelParams params;
    BoundsOptions options;

    double iota0 = 0.0;
    double q_star = 0.0;
    double q1_star = 0.0;
    double r_star = 0.0;
    double kappa = 0.0;
    double h1_star = 0.0;
    double a_plus = 0.0, b_plus = 0.0, wd = 0.0, c0 = 0.0, wc = 0.0;
    double a_plus_mu2 = 0.0, b_plus_mu2 = 0.0, wd_mu2 = 0.0, c0_mu2 = 0.0, wc_mu2 = 0.0;
    double hbar1 = 0.0;
    double hbar2 = 0.0;
    double gamma_const = 0.0;  ///< Gamma
    double k1 = 0.0, k2 = 0.0;
    double gamma_discrepancy = 0.0;  ///< Gamma - (k1 + k2)
    double kp1 = 0.0, kp2 = 0.0;
    double k3 = 0.0, k4 = 0.0, k5 = 0.0, k6 = 0.0, k7 = 0.0;
    double gamma1 = 0.0, gamma2 = 0.0;
    double wcm = 0.0;
    double w_gamma1 = 0.0, w_gamma2 = 0.0;
    double epsilon = 0.0;   ///< epsilon(t0)
    double epsilon1 = 0.0;  ///< epsilon1(t0)

    std::vector<LedgerEntry> entries;

    /// nu(s, t) = beta sqrt((1 - e^{2 alpha (s - t)}) / (2 |alpha|)).
    double nu(double s, double t) const;
    /// iota0 + |y|.
    double m_tilde(double y) const { return iota0 + (y < 0 ? -y : y); }

    std::string to_json() const;
};

/// (T~ Q1* + Q1* T~^2 / q*) e^{Q* T~} + (3/q*) sqrt(2|alpha_lo| / (beta^2 (1 - e^{2 alpha_lo}))) e^{Q* T~} T~.
double h1_star(const ModelParams& params, const QBounds& q_bounds);

/// Builds the ledger from the true-parameter solution.
ConstantsLedger build_ledger(const ModelParams& params, const HjbSolution& solution, const BoundsOptions& options = {});

/// delta = Gamma hbar1^gamma x^gamma ((2 iota0)^gamma + wc_m) epsilon^gamma.
double delta_known_mu(const ConstantsLedger& ledger, double x);
/// delta2 = x^gamma (wGamma1 epsilon1^gamma + wGamma2 epsilon^gamma).
double delta_unknown_mu(const ConstantsLedger& ledger, double x);

enum class DeltaMode { KnownMu, UnknownMu };
DeltaMode parse_delta_mode(const std::string& text);
std::string delta_mode_name(DeltaMode mode);

/// x with delta(mode, x) = delta_target.
double max_endowment(const ConstantsLedger& ledger, double delta_target, DeltaMode mode);

/// sup over the grid of e^{-kappa (T - t)} |f - g| / (iota0 + |y|), with the
/// ledger's kappa and iota0.
double rho_tilde_distance(const Grid2D& f, const Grid2D& g, const ConstantsLedger& ledger);

/// hbar2 mu_err + hbar1 alpha_err.
double deviation_bound_h(const ConstantsLedger& ledger, double alpha_err, double mu_err = 0.0);

}  // namespace ouhjb
