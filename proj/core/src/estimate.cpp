#include "ouhjb/estimate.hpp"

#include <algorithm>
#include <cmath>

#include "ouhjb/error.hpp"
#include "ouhjb/parallel.hpp"

namespace ouhjb {

double stopping_threshold(const ModelParams& params) {
    const double beta2 = params.beta() * params.beta() / (2.0 * std::abs(params.alpha_lo()));
    const double t0 = params.t0();
    return beta2 * (t0 - std::pow(t0, 5.0 / 6.0));
}

std::optional<double> stopping_time(const std::vector<double>& y_path, const TimeGrid& grid, double H) {
    if (!(H > 0.0)) throw ValidationError("stopping_time: H must be positive");
    if (y_path.size() != grid.n_steps() + 1) throw ValidationError("path length does not match the grid");
    const double dt = grid.dt();
    double acc = 0.0;
    for (std::size_t k = 0; k < grid.n_steps(); ++k) {
        const double inc = 0.5 * dt * (y_path[k] * y_path[k] + y_path[k + 1] * y_path[k + 1]);
        if (acc + inc >= H) {
            const double frac = inc > 0.0 ? std::clamp((H - acc) / inc, 0.0, 1.0) : 1.0;
            return grid.time(k) - grid.start() + frac * dt;
        }
        acc += inc;
    }
    return std::nullopt;
}

EstimationReport sequential_alpha(const std::vector<double>& y_path, const TimeGrid& grid,
                                  const ModelParams& params, std::optional<double> H_override) {
    EstimationReport rep;
    rep.t0 = params.t0();
    rep.H = H_override ? *H_override : stopping_threshold(params);
    if (!(rep.H > 0.0)) throw ValidationError("sequential_alpha: threshold H must be positive (needs t0 > 1)");
    rep.tau_H = stopping_time(y_path, grid, rep.H);
    if (rep.tau_H && *rep.tau_H <= params.t0()) {
        rep.alpha_raw = ito_integral_y_dy(y_path, grid, params.beta(), *rep.tau_H) / rep.H;
    } else {
        rep.tau_H.reset();
        rep.alpha_raw = 0.0;
    }
    rep.alpha_hat = std::clamp(rep.alpha_raw, params.alpha_lo(), params.alpha_hi());
    if (params.t0() > 1.0 && params.beta() > 0.0) rep.epsilon_t0 = epsilon_bound(params);
    rep.epsilon1_t0 = epsilon1_bound(params);
    return rep;
}

double mu_estimate(const std::vector<double>& s_path, const TimeGrid& grid, double t0) {
    if (!(t0 > 0.0)) throw ValidationError("mu_estimate: t0 must be positive");
    if (s_path.size() != grid.n_steps() + 1) throw ValidationError("path length does not match the grid");
    double z = 0.0;
    for (std::size_t k = 0; k < grid.n_steps(); ++k) z += (s_path[k + 1] - s_path[k]) / s_path[k];
    return z / t0;
}

EstimationReport estimate(const PathBundle& bundle, const ModelParams& params) {
    EstimationReport rep = sequential_alpha(bundle.y_path, bundle.grid, params);
    rep.mu_hat = mu_estimate(bundle.s_path, bundle.grid, params.t0());
    return rep;
}

EpsilonTerms epsilon_terms(const ModelParams& params) {
    if (!(params.t0() > 1.0)) throw ValidationError("epsilon bound needs t0 > 1, got " + std::to_string(params.t0()));
    if (!(params.beta() > 0.0)) throw ValidationError("epsilon bound needs beta > 0");
    const double beta = params.beta();
    const double b2 = beta * beta;
    EpsilonTerms e;
    e.beta1 = b2 / (2.0 * std::abs(params.alpha_hi()));
    e.beta2 = b2 / (2.0 * std::abs(params.alpha_lo()));
    e.H = stopping_threshold(params);
    const double y6 = std::pow(params.y0(), 6);
    e.kappa1 = 32.0 * (y6 + 15.0 * e.beta1 * e.beta1 * e.beta1);
    e.kappa2 = 3375.0 * e.kappa1;
    e.kappa = 243.0 * (y6 + (1.0 + 3375.0 * std::pow(2.0 * beta, 6)) * e.kappa1);
    const double a2 = params.alpha_lo() * params.alpha_lo();
    const double t0 = params.t0();
    e.epsilon = std::sqrt(b2 / e.H + a2 / std::pow(beta, 12) * e.kappa / (t0 * t0));
    return e;
}

double epsilon_bound(const ModelParams& params) { return epsilon_terms(params).epsilon; }

double epsilon1_bound(const ModelParams& params) { return params.vol().sigma_max() / std::sqrt(params.t0()); }

namespace {

double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= v.size()) return v.back();
    return v[i] + (pos - static_cast<double>(i)) * (v[i + 1] - v[i]);
}

void mean_se(const std::vector<double>& v, double& mean, double& se) {
    double s = 0.0;
    for (double x : v) s += x;
    mean = s / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

EstimationSummary replicate_estimation(const ModelParams& params, std::size_t n_reps, std::uint64_t seed,
                                       double dt) {
    if (n_reps < 2) throw ValidationError("replicate_estimation: n_reps must be at least 2");
    const TimeGrid grid = TimeGrid::with_step(0.0, params.t0(), dt);
    EstimationSummary out;
    out.n_reps = n_reps;
    out.reports.resize(n_reps);
    parallel_for(n_reps, [&](std::size_t i) {
        const PathBundle b = simulate_path(params, grid, params.y0(), 1.0, seed, i);
        out.reports[i] = estimate(b, params);
    });

    std::vector<double> a_err(n_reps), m_err(n_reps), a_hat(n_reps), m_hat(n_reps);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n_reps; ++i) {
        const auto& r = out.reports[i];
        a_err[i] = std::abs(r.alpha_hat - params.alpha());
        m_err[i] = std::abs(r.mu_hat - params.mu());
        a_hat[i] = r.alpha_hat;
        m_hat[i] = r.mu_hat;
        if (r.tau_H) ++hits;
    }
    mean_se(a_err, out.mean_abs_alpha_error, out.se_abs_alpha_error);
    mean_se(m_err, out.mean_abs_mu_error, out.se_abs_mu_error);
    double unused = 0.0;
    mean_se(a_hat, out.mean_alpha_hat, unused);
    out.hit_rate = static_cast<double>(hits) / static_cast<double>(n_reps);
    out.alpha_hat_q05 = quantile(a_hat, 0.05);
    out.alpha_hat_q50 = quantile(a_hat, 0.5);
    out.alpha_hat_q95 = quantile(a_hat, 0.95);
    out.mu_hat_q05 = quantile(m_hat, 0.05);
    out.mu_hat_q50 = quantile(m_hat, 0.5);
    out.mu_hat_q95 = quantile(m_hat, 0.95);
    out.epsilon_t0 = out.reports.front().epsilon_t0;
    out.epsilon1_t0 = out.reports.front().epsilon1_t0;
    return out;
}

}  // namespace ouhjb
