#include "ouhjb/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "json_util.hpp"
#include "ouhjb/error.hpp"
#include "ouhjb/estimate.hpp"

namespace ouhjb {

double ConstantsLedger::nu(double s, double t) const {
    const double a = params.alpha();
    const double b = params.beta();
    return b * std::sqrt(-std::expm1(2.0 * a * (s - t)) / (2.0 * std::abs(a)));
}

double h1_star(const ModelParams& p, const QBounds& qb) {
    if (!(p.beta() > 0.0)) throw ValidationError("h1_star needs beta > 0");
    const double tt = p.t_tilde();
    const double qs = p.q_star();
    const double growth = std::exp(qb.q_star_sup * tt);
    const double a2 = p.alpha_lo();
    const double root = std::sqrt(2.0 * std::abs(a2) / (p.beta() * p.beta() * -std::expm1(2.0 * a2)));
    return (tt * qb.q_deriv_sup + qb.q_deriv_sup * tt * tt / qs) * growth + 3.0 / qs * root * growth * tt;
}

namespace {

struct SupTerms {
    double a_plus, b_plus, c0;
    bool a_grid, b_grid, c_grid;
};

// Larger of grid suprema of a*, b*, 2(|a*|^2 + |b*|^2) and the analytic bounds,
// with appreciation rate `mu`.
SupTerms sup_terms(const ModelParams& p, const HjbSolution& sol, double mu) {
    const double g = p.gamma();
    const double theta_max = (mu - p.r()) / p.vol().sigma_min();
    const double a_an = theta_max * theta_max / (1.0 - g) + p.r();
    const double b_an = std::abs(theta_max) / (1.0 - g);
    const double abs_a_an = a_an + 1.0;
    const double c_an = 2.0 * (abs_a_an * abs_a_an + b_an * b_an);

    double a_grid = -HUGE_VAL, b_grid = -HUGE_VAL, c_grid = 0.0;
    const auto& ya = sol.h.y_axis();
    for (std::size_t j = 0; j < ya.size(); ++j) {
        const double theta = (mu - p.r()) / p.vol().evaluate(ya[j]);
        const double b = theta / (1.0 - g);
        for (std::size_t i = 0; i < sol.h.n_t(); ++i) {
            const double c = std::pow(sol.h.at(i, j), -p.q_star());
            const double a = theta * theta / (1.0 - g) + p.r() - c;
            a_grid = std::max(a_grid, a);
            b_grid = std::max(b_grid, b);
            c_grid = std::max(c_grid, 2.0 * (a * a + b * b));
        }
    }
    return {std::max(a_grid, a_an), std::max(b_grid, b_an), std::max(c_grid, c_an),
            a_grid > a_an, b_grid > b_an, c_grid > c_an};
}

double double_factorial_odd(int m) {
    double v = 1.0;
    for (int k = 2 * m - 1; k > 1; k -= 2) v *= k;
    return v;
}

}  // namespace

ConstantsLedger build_ledger(const ModelParams& p, const HjbSolution& sol, const BoundsOptions& opt) {
    if (!(p == sol.params)) throw ValidationError("build_ledger: solution was solved under different parameters");
    if (!(opt.zeta0 > 0.0)) throw ValidationError("bounds.zeta0 must be positive");
    if (opt.m < 1) throw ValidationError("bounds.m must be at least 1");
    if (!(p.beta() > 0.0)) throw ValidationError("build_ledger needs beta > 0");

    ConstantsLedger L(p, opt);
    const double g = p.gamma();
    const double tt = p.t_tilde();
    const double qs = p.q_star();
    auto add = [&](const std::string& name, double v, const std::string& formula, const std::string& branch = "formula") {
        L.entries.push_back({name, v, formula, branch});
    };

    L.iota0 = p.beta() / std::sqrt(2.0 * std::abs(p.alpha_hi()));
    add("iota0", L.iota0, "beta / sqrt(2 |alpha_hi|)");
    L.q_star = sol.q_bounds.q_star_sup;
    add("Q_star", L.q_star, "sup_y gamma (r + theta(y)^2 / (2 (1 - gamma)))", "analytic");
    L.q1_star = sol.q_bounds.q_deriv_sup;
    add("Q1_star", L.q1_star, "1.05 * max |dQ/dy| by central differences on the refined grid", "grid");
    L.r_star = r_star_bound(tt, L.q_star);
    add("r_star", L.r_star, "(T~ + 1) e^{Q* T~}");
    L.kappa = L.q_star + opt.zeta0 + 2.0 * g + 1.0;
    add("kappa", L.kappa, "Q* + zeta0 + 2 gamma + 1");
    add("zeta0", opt.zeta0, "configured", "config");
    L.h1_star = h1_star(p, sol.q_bounds);
    add("h1_star", L.h1_star,
        "(T~ Q1* + Q1* T~^2 / q*) e^{Q* T~} + (3/q*) sqrt(2|alpha_lo| / (beta^2 (1 - e^{2 alpha_lo}))) e^{Q* T~} T~");

    const auto branch = [](bool grid) { return std::string(grid ? "grid" : "analytic"); };
    const SupTerms s1 = sup_terms(p, sol, p.mu());
    L.a_plus = s1.a_plus;
    L.b_plus = s1.b_plus;
    L.c0 = s1.c0;
    L.wd = 2.0 * std::exp(tt * (L.a_plus + L.b_plus * L.b_plus));
    L.wc = 4.0 * tt * std::exp(L.c0 * tt) * L.wd * L.wd;
    add("A_plus", L.a_plus, "max(grid sup a*, theta_max^2/(1-gamma) + r)", branch(s1.a_grid));
    add("B_plus", L.b_plus, "max(grid sup b*, theta_max/(1-gamma))", branch(s1.b_grid));
    add("c0", L.c0, "2 max(grid sup (|a*|^2 + |b*|^2), (theta_max^2/(1-gamma) + r + 1)^2 + B+^2)", branch(s1.c_grid));
    add("wd", L.wd, "sqrt(4 e^{2 T~ (A+ + B+^2)})");
    add("wc", L.wc, "4 T~ e^{c0 T~} wd^2");

    const SupTerms s2 = sup_terms(p, sol, p.mu_hi());
    L.a_plus_mu2 = s2.a_plus;
    L.b_plus_mu2 = s2.b_plus;
    L.c0_mu2 = s2.c0;
    L.wd_mu2 = 2.0 * std::exp(tt * (L.a_plus_mu2 + L.b_plus_mu2 * L.b_plus_mu2));
    L.wc_mu2 = 4.0 * tt * std::exp(L.c0_mu2 * tt) * L.wd_mu2 * L.wd_mu2;
    add("A_plus_mu2", L.a_plus_mu2, "A+ with mu replaced by mu_hi", branch(s2.a_grid));
    add("B_plus_mu2", L.b_plus_mu2, "B+ with mu replaced by mu_hi", branch(s2.b_grid));
    add("c0_mu2", L.c0_mu2, "c0 with mu replaced by mu_hi", branch(s2.c_grid));
    add("wd_mu2", L.wd_mu2, "wd from A+_mu2, B+_mu2");
    add("wc_mu2", L.wc_mu2, "4 T~ e^{c0_mu2 T~} wd_mu2^2");

    L.hbar1 = (1.0 + 2.0 * g + opt.zeta0) / (1.0 + opt.zeta0) * tt / std::abs(p.alpha_hi()) *
              (2.0 * L.q1_star * tt + g * L.h1_star);
    add("hbar1", L.hbar1, "(1 + 2 gamma + zeta0)/(1 + zeta0) T~/|alpha_hi| (2 Q1* T~ + gamma h1*)");
    const double s1min = p.vol().sigma_min();
    L.hbar2 = g * (p.mu_hi() + p.r()) / ((1.0 - g) * s1min * s1min) * 2.0 * tt * tt / L.iota0;
    add("hbar2", L.hbar2, "gamma (mu_hi + r) / ((1 - gamma) sigma_min^2) 2 T~^2 / iota0");

    const double scale = std::exp(g * L.kappa * tt) / std::pow(L.kappa, g);
    const double root_wc = std::pow(std::sqrt(L.wc * qs), g);
    const double wd_g = std::pow(L.wd, g);
    L.gamma_const = (qs * tt * wd_g + (tt + 1.0) * root_wc) * scale;
    add("Gamma", L.gamma_const, "(q* T~ wd^gamma + (T~ + 1) sqrt(wc q*)^gamma) e^{gamma kappa T~} / kappa^gamma");
    L.k1 = root_wc * scale;
    L.k2 = (tt * root_wc + wd_g * qs * tt) * scale;
    L.gamma_discrepancy = L.gamma_const - (L.k1 + L.k2);
    add("k1", L.k1, "sqrt(wc q*)^gamma e^{gamma kappa T~} / kappa^gamma");
    add("k2", L.k2, "(T~ sqrt(wc q*)^gamma + wd^gamma q* T~) e^{gamma kappa T~} / kappa^gamma");
    add("Gamma_minus_k1_k2", L.gamma_discrepancy, "Gamma - (k1 + k2)");

    L.wcm = std::pow(double_factorial_odd(opt.m) * std::pow(p.beta(), 2 * opt.m) /
                         std::pow(2.0 * std::abs(p.alpha_hi()), opt.m),
                     g / (2.0 * opt.m));
    add("wc_m", L.wcm, "((2m-1)!! beta^{2m} / (2|alpha_hi|)^m)^{gamma/(2m)}");

    L.kp1 = 2.0 * std::sqrt(L.wc_mu2 * tt) * (2.0 * p.mu_hi() + p.r() + s1min) / (s1min * s1min * (1.0 - g));
    L.kp2 = std::exp(L.kappa * tt) / L.kappa;
    add("kp1", L.kp1, "2 sqrt(wc_mu2 T~) (2 mu_hi + r + sigma_min) / (sigma_min^2 (1 - gamma))");
    add("kp2", L.kp2, "e^{kappa T~} / kappa");
    const double root2 = std::sqrt(2.0 * L.wc_mu2 * qs);
    L.k7 = root2 + qs * std::pow(L.wd_mu2, g);
    L.k3 = std::pow(L.kp1, g) + std::pow(root2 * L.kp2 * L.hbar2, g);
    L.k4 = std::pow(root2 * L.kp2 * L.hbar1, g);
    L.k5 = tt * std::pow(L.kp1, g) + L.k7 * std::pow(L.kp2 * L.hbar2, g);
    L.k6 = L.k7 * std::pow(L.kp2 * L.hbar1, g);
    add("k3", L.k3, "kp1^gamma + (sqrt(2 wc_mu2 q*) kp2 hbar2)^gamma");
    add("k4", L.k4, "(sqrt(2 wc_mu2 q*) kp2 hbar1)^gamma");
    add("k5", L.k5, "T~ kp1^gamma + k7 (kp2 hbar2)^gamma");
    add("k6", L.k6, "k7 (kp2 hbar1)^gamma");
    add("k7", L.k7, "sqrt(2 wc_mu2 q*) + q* wd_mu2^gamma");
    L.gamma1 = L.k3 + L.k5;
    L.gamma2 = L.k4 + L.k6;
    add("Gamma1", L.gamma1, "k3 + k5");
    add("Gamma2", L.gamma2, "k4 + k6");
    L.w_gamma1 = L.gamma1 * (3.0 * std::pow(L.iota0, g) + std::pow(std::abs(p.y0()), g));
    L.w_gamma2 = L.gamma2 * (std::pow(2.0 * L.iota0, g) + L.wcm);
    add("wGamma1", L.w_gamma1, "Gamma1 (3 iota0^gamma + |y0|^gamma)");
    add("wGamma2", L.w_gamma2, "Gamma2 ((2 iota0)^gamma + wc_m)");

    L.epsilon = epsilon_bound(p);
    L.epsilon1 = epsilon1_bound(p);
    add("epsilon", L.epsilon, "sqrt(beta^2/H + alpha_lo^2/beta^12 kappa(3)/t0^2)");
    add("epsilon1", L.epsilon1, "sigma_max / sqrt(t0)");
    return L;
}

std::string ConstantsLedger::to_json() const {
    detail::json j;
    j["params"] = detail::params_to_json(params);
    j["zeta0"] = options.zeta0;
    j["m"] = options.m;
    auto& arr = j["entries"] = detail::json::array();
    for (const auto& e : entries) {
        arr.push_back({{"name", e.name}, {"value", e.value}, {"formula_ref", e.formula}, {"branch", e.branch}});
    }
    return j.dump(2);
}

double delta_known_mu(const ConstantsLedger& L, double x) {
    if (!(x > 0.0)) throw ValidationError("delta_known_mu: x must be positive");
    const double g = L.params.gamma();
    return L.gamma_const * std::pow(L.hbar1, g) * std::pow(x, g) * (std::pow(2.0 * L.iota0, g) + L.wcm) *
           std::pow(L.epsilon, g);
}

double delta_unknown_mu(const ConstantsLedger& L, double x) {
    if (!(x > 0.0)) throw ValidationError("delta_unknown_mu: x must be positive");
    const double g = L.params.gamma();
    return std::pow(x, g) * (L.w_gamma1 * std::pow(L.epsilon1, g) + L.w_gamma2 * std::pow(L.epsilon, g));
}

DeltaMode parse_delta_mode(const std::string& text) {
    if (text == "known-mu" || text == "known_mu" || text == "known") return DeltaMode::KnownMu;
    if (text == "unknown-mu" || text == "unknown_mu" || text == "unknown") return DeltaMode::UnknownMu;
    throw ValidationError("unknown delta mode '" + text + "' (expected known-mu or unknown-mu)");
}

std::string delta_mode_name(DeltaMode mode) { return mode == DeltaMode::KnownMu ? "known-mu" : "unknown-mu"; }

double max_endowment(const ConstantsLedger& L, double delta_target, DeltaMode mode) {
    if (!(delta_target > 0.0)) throw ValidationError("max_endowment: delta_target must be positive");
    const double k = mode == DeltaMode::KnownMu ? delta_known_mu(L, 1.0) : delta_unknown_mu(L, 1.0);
    return std::pow(delta_target / k, 1.0 / L.params.gamma());
}

double rho_tilde_distance(const Grid2D& f, const Grid2D& g, const ConstantsLedger& L) {
    if (!f.same_shape(g)) throw ValidationError("rho_tilde_distance: grid shapes differ");
    const double horizon = L.params.horizon();
    double best = 0.0;
    for (std::size_t i = 0; i < f.n_t(); ++i) {
        const double w = std::exp(-L.kappa * (horizon - f.t_axis()[i]));
        for (std::size_t j = 0; j < f.n_y(); ++j) {
            const double d = std::abs(f.at(i, j) - g.at(i, j)) / L.m_tilde(f.y_axis()[j]);
            best = std::max(best, w * d);
        }
    }
    return best;
}

double deviation_bound_h(const ConstantsLedger& L, double alpha_err, double mu_err) {
    if (alpha_err < 0.0 || mu_err < 0.0) throw ValidationError("deviation_bound_h: errors must be nonnegative");
    const double mu_term = mu_err == 0.0 ? 0.0 : L.hbar2 * mu_err;
    return mu_term + L.hbar1 * alpha_err;
}

}  // namespace ouhjb
