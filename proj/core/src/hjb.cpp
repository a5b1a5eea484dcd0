#include "ouhjb/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ouhjb/error.hpp"
#include "ouhjb/io.hpp"
#include "ouhjb/log.hpp"
#include "ouhjb/parallel.hpp"
#include "ouhjb/rng.hpp"
#include "ouhjb/simulate.hpp"

namespace ouhjb {

SolverConfig SolverConfig::for_params(const ModelParams& params) {
    if (!(params.beta() > 0.0)) throw ValidationError("solver domain needs beta > 0");
    SolverConfig c;
    const double iota = params.beta() / std::sqrt(2.0 * std::abs(params.alpha_hi()));
    const double c_lo = params.y0() * std::exp(params.alpha_lo() * params.t0());
    const double c_hi = params.y0() * std::exp(params.alpha_hi() * params.t0());
    c.y_min = std::min(c_lo, c_hi) - 6.0 * iota;
    c.y_max = std::max(c_lo, c_hi) + 6.0 * iota;
    return c;
}

void SolverConfig::validate() const {
    if (!(y_min < y_max)) throw ValidationError("solver.y_min must be below solver.y_max");
    if (n_y < 3) throw ValidationError("solver.n_y must be at least 3, got " + std::to_string(n_y));
    if (n_t < 2) throw ValidationError("solver.n_t must be at least 2, got " + std::to_string(n_t));
    if (zeta < 0.0 || !std::isfinite(zeta)) throw ValidationError("solver.zeta must be positive (or 0 for automatic)");
    if (max_iter < 1) throw ValidationError("solver.max_iter must be at least 1");
    if (!(stop_tol > 0.0)) throw ValidationError("solver.stop_tol must be positive");
}

void HjbSolution::require_converged() const {
    if (converged) return;
    const double last = rho_history.empty() ? 0.0 : rho_history.back();
    throw ConvergenceError("fixed-point iteration stopped after " + std::to_string(iterations) +
                               " iterations at rho* distance " + io::format_double(last) + " (tolerance " +
                               io::format_double(config.stop_tol) + ")",
                           last, iterations);
}

double rho_star_distance(const Grid2D& f, const Grid2D& g, double kappa, double horizon) {
    if (!f.same_shape(g)) throw ValidationError("rho_star_distance: grid shapes differ");
    double best = 0.0;
    for (std::size_t i = 0; i < f.n_t(); ++i) {
        const double w = std::exp(-kappa * (horizon - f.t_axis()[i]));
        const auto a = f.row(i);
        const auto b = g.row(i);
        double m = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
        best = std::max(best, w * m);
    }
    return best;
}

Grid2D apply_operator_pde(const Grid2D& f, const ModelParams& params, OperatorStats* stats) {
    const std::size_t nt = f.n_t();
    const std::size_t ny = f.n_y();
    if (ny < 3) throw ValidationError("apply_operator_pde: need at least 3 y points");
    if (!(params.beta() > 0.0)) throw ValidationError("apply_operator_pde: beta must be positive");
    for (double v : f.data()) {
        if (!(v >= 1.0)) throw ValidationError("apply_operator_pde: f must be >= 1 everywhere");
    }

    const auto& ys = f.y_axis();
    const double dy = ys.step();
    const double k = f.t_axis().step();
    const double d = 0.5 * params.beta() * params.beta();
    const double alpha = params.alpha();
    const double expo = 1.0 - params.q_star();
    const double inv_q = 1.0 / params.q_star();

    // (A u)_j = lo_j u_{j-1} + di_j u_j + up_j u_{j+1}
    std::vector<double> lo(ny, 0.0), di(ny, 0.0), up(ny, 0.0);
    std::size_t upwind = 0;
    const double diff = d / (dy * dy);
    for (std::size_t j = 0; j < ny; ++j) {
        const double y = ys[j];
        const double b = alpha * y;
        const double q = q_function(params, y);
        if (j == 0) {
            di[j] = q - b / dy;
            up[j] = b / dy;
        } else if (j + 1 == ny) {
            lo[j] = -b / dy;
            di[j] = q + b / dy;
        } else if (std::abs(b) * dy / d > 2.0) {
            ++upwind;
            if (b > 0.0) {
                lo[j] = diff;
                di[j] = q - 2.0 * diff - b / dy;
                up[j] = diff + b / dy;
            } else {
                lo[j] = diff - b / dy;
                di[j] = q - 2.0 * diff + b / dy;
                up[j] = diff;
            }
        } else {
            lo[j] = diff - b / (2.0 * dy);
            di[j] = q - 2.0 * diff;
            up[j] = diff + b / (2.0 * dy);
        }
    }
    if (stats) stats->upwind_nodes = upwind;

    // Factor (I - k/2 A) once; it does not change between time levels.
    std::vector<double> sub(ny), piv(ny), sup(ny), cp(ny);
    for (std::size_t j = 0; j < ny; ++j) {
        sub[j] = -0.5 * k * lo[j];
        sup[j] = -0.5 * k * up[j];
        const double diag = 1.0 - 0.5 * k * di[j];
        piv[j] = j == 0 ? diag : diag - sub[j] * cp[j - 1];
        if (!(piv[j] > 0.0)) {
            throw NumericalError("apply_operator_pde: nonpositive pivot at y index " + std::to_string(j));
        }
        cp[j] = sup[j] / piv[j];
    }

    Grid2D u(f.t_axis(), f.y_axis(), 1.0);
    std::vector<double> src_old(ny), src_new(ny), rhs(ny);
    auto source = [&](std::size_t i, std::vector<double>& out) {
        const auto row = f.row(i);
        for (std::size_t j = 0; j < ny; ++j) out[j] = inv_q * std::pow(row[j], expo);
    };
    source(nt - 1, src_old);
    for (std::size_t step = nt - 1; step-- > 0;) {
        source(step, src_new);
        const auto old = u.row(step + 1);
        for (std::size_t j = 0; j < ny; ++j) {
            double au = di[j] * old[j];
            if (j > 0) au += lo[j] * old[j - 1];
            if (j + 1 < ny) au += up[j] * old[j + 1];
            rhs[j] = old[j] + 0.5 * k * au + 0.5 * k * (src_new[j] + src_old[j]);
        }
        auto out = u.row(step);
        out[0] = rhs[0] / piv[0];
        for (std::size_t j = 1; j < ny; ++j) out[j] = (rhs[j] - sub[j] * out[j - 1]) / piv[j];
        for (std::size_t j = ny - 1; j-- > 0;) out[j] -= cp[j] * out[j + 1];
        std::swap(src_old, src_new);
    }
    return u;
}

McEstimate apply_operator_mc(const std::function<double(double, double)>& f, double t, double y,
                             const ModelParams& params, std::size_t n_paths, std::uint64_t seed, double dt) {
    if (n_paths < 100) throw ValidationError("apply_operator_mc: n_paths must be at least 100");
    const double horizon = params.horizon();
    const double tol = 1e-12 * std::max(1.0, horizon);
    if (t < params.t0() - tol || t > horizon + tol) {
        throw ValidationError("apply_operator_mc: t must lie in [t0, horizon]");
    }
    if (horizon - t <= tol) return {1.0, 0.0};
    if (!(dt > 0.0)) throw ValidationError("apply_operator_mc: dt must be positive");

    const TimeGrid grid = TimeGrid::with_step(t, horizon, dt);
    const std::size_t n = grid.n_steps();
    const double h = grid.dt();
    const double decay = std::exp(params.alpha() * h);
    const double nu = ou_step_sd(h, params.alpha(), params.beta());
    const double expo = 1.0 - params.q_star();
    const double inv_q = 1.0 / params.q_star();

    std::vector<double> values(n_paths);
    parallel_for(n_paths, [&](std::size_t p) {
        const RngStream rng(seed, p);
        double eta = y;
        double q_prev = q_function(params, eta);
        double log_g = 0.0;
        double g_prev = std::pow(f(t, eta), expo);
        double integral = 0.0;
        std::array<double, 2> z{};
        for (std::size_t s = 0; s < n; ++s) {
            if (s % 2 == 0) z = rng.normals(s / 2);
            eta = eta * decay + nu * z[s % 2];
            const double q_next = q_function(params, eta);
            log_g += 0.5 * h * (q_prev + q_next);
            const double g_next = std::exp(log_g) * std::pow(f(grid.time(s + 1), eta), expo);
            integral += 0.5 * h * (g_prev + g_next);
            q_prev = q_next;
            g_prev = g_next;
        }
        values[p] = std::exp(log_g) + inv_q * integral;
    });

    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(n_paths);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double var = ss / static_cast<double>(n_paths - 1);
    return {mean, std::sqrt(var / static_cast<double>(n_paths))};
}

double r_star_bound(double t_tilde, double q_star) { return (t_tilde + 1.0) * std::exp(q_star * t_tilde); }

double zeta_star(int n, double t_tilde) {
    if (n < 1) throw ValidationError("zeta_star: n must be at least 1");
    if (!(t_tilde > 0.0)) throw ValidationError("zeta_star: horizon length must be positive");
    const double a = t_tilde - static_cast<double>(n);
    return (std::sqrt(a * a + 4.0 * t_tilde) - a) / (2.0 * t_tilde);
}

double supergeometric_bound(int n, double zeta, double t_tilde, double q_star) {
    if (n < 1) throw ValidationError("supergeometric_bound: n must be at least 1");
    if (!(zeta > 0.0)) throw ValidationError("supergeometric_bound: zeta must be positive");
    const double lambda = 1.0 / (zeta + 1.0);
    const double kappa = q_star + zeta + 1.0;
    const double conv_b = std::exp(kappa * t_tilde) * (1.0 + r_star_bound(t_tilde, q_star)) / (1.0 - lambda);
    return conv_b * std::pow(lambda, n);
}

double supergeometric_bound(int n, double zeta, const ModelParams& params) {
    return supergeometric_bound(n, zeta, params.t_tilde(), q_star_analytic(params));
}

double optimized_bound(int n, double t_tilde, double q_star) {
    const double x = zeta_star(n, t_tilde);
    const double c_star = (1.0 + r_star_bound(t_tilde, q_star)) * std::exp((q_star + 1.0) * t_tilde);
    const double g = x * t_tilde - std::log(x) - static_cast<double>(n - 1) * std::log1p(x);
    return c_star * std::exp(g);
}

namespace {

double sup_diff(const Grid2D& a, const Grid2D& b) {
    double m = 0.0;
    const auto x = a.data();
    const auto y = b.data();
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

int expected_iterations(const std::vector<double>& sup, double tol, int max_iter) {
    const std::size_t n = sup.size();
    if (n < 5) return std::max(1, static_cast<int>(n));
    const double d4 = sup[3], d5 = sup[4];
    if (d5 <= tol) return 5;
    if (!(d4 > 0.0) || !(d5 < d4)) return max_iter;
    const double extra = std::ceil(std::log(tol / d5) / std::log(d5 / d4));
    return std::clamp(5 + static_cast<int>(extra), 1, max_iter);
}

}  // namespace

HjbSolution fixed_point_solve(const ModelParams& params, const SolverConfig& config) {
    config.validate();
    if (!(params.beta() > 0.0)) throw ValidationError("fixed_point_solve: beta must be positive");
    const UniformAxis t_axis(params.t0(), params.horizon(), config.n_t);
    const UniformAxis y_axis(config.y_min, config.y_max, config.n_y);
    const double t_tilde = params.t_tilde();

    HjbSolution sol(params, config, Grid2D(t_axis, y_axis, 1.0));
    sol.q_bounds = q_bounds(params, y_axis.values());
    const double q_star = sol.q_bounds.q_star_sup;
    sol.r_star = r_star_bound(t_tilde, q_star);

    // Iterates do not depend on zeta, so the automatic choice reuses the
    // pre-pass iterates.
    std::vector<Grid2D> pending;
    pending.push_back(sol.h);
    bool zeta_known = config.zeta > 0.0;
    auto set_zeta = [&](double z) {
        sol.zeta = z;
        sol.kappa = q_star + z + 1.0;
        sol.lambda = 1.0 / (z + 1.0);
    };
    if (zeta_known) set_zeta(config.zeta);

    std::size_t clamps = 0;
    Grid2D current = sol.h;
    int n = 0;
    int stop_at = 0;
    while (n < config.max_iter && stop_at == 0) {
        Grid2D next = apply_operator_pde(current, params);
        ++n;
        sol.iterate_min.push_back(next.min());
        sol.iterate_max.push_back(next.max());
        for (double& v : next.data()) {
            if (v < 1.0) {
                v = 1.0;
                ++clamps;
            }
        }
        sol.sup_history.push_back(sup_diff(next, current));
        sol.certificate.push_back(optimized_bound(n, t_tilde, q_star));

        if (zeta_known) {
            sol.rho_history.push_back(rho_star_distance(next, current, sol.kappa, params.horizon()));
            if (sol.rho_history.back() <= config.stop_tol) stop_at = n;
            if (config.keep_iterates) sol.iterates.push_back(next);
        } else {
            pending.push_back(next);
            if (n == 5 || sol.sup_history.back() == 0.0 || n == config.max_iter) {
                set_zeta(zeta_star(expected_iterations(sol.sup_history, config.stop_tol, config.max_iter), t_tilde));
                zeta_known = true;
                for (std::size_t m = 1; m < pending.size() && stop_at == 0; ++m) {
                    sol.rho_history.push_back(rho_star_distance(pending[m], pending[m - 1], sol.kappa, params.horizon()));
                    if (config.keep_iterates) sol.iterates.push_back(pending[m]);
                    if (sol.rho_history.back() <= config.stop_tol) stop_at = static_cast<int>(m);
                }
                if (stop_at != 0 && stop_at < n) {
                    next = pending[static_cast<std::size_t>(stop_at)];
                    n = stop_at;
                    sol.iterate_min.resize(static_cast<std::size_t>(n));
                    sol.iterate_max.resize(static_cast<std::size_t>(n));
                    sol.sup_history.resize(static_cast<std::size_t>(n));
                    sol.certificate.resize(static_cast<std::size_t>(n));
                }
                pending.clear();
            }
        }
        current = std::move(next);
    }

    sol.h = std::move(current);
    sol.iterations = n;
    sol.converged = stop_at != 0;
    sol.clamp_count = clamps;
    log::info("fixed_point_solve: " + std::to_string(n) + " iterations, zeta " + std::to_string(sol.zeta) +
              ", " + std::to_string(clamps) + " undershoot clamps");
    if (!sol.converged) {
        log::warn("fixed_point_solve: no convergence within " + std::to_string(config.max_iter) +
                  " iterations, last rho* " + io::format_double(sol.rho_history.back()));
    }
    return sol;
}

HjbSolution fixed_point_solve(const ModelParams& params) {
    return fixed_point_solve(params, SolverConfig::for_params(params));
}

double interpolate(const HjbSolution& solution, double t, double y) {
    const double t0 = solution.params.t0();
    const double horizon = solution.params.horizon();
    const double tol = 1e-12 * std::max(1.0, horizon);
    if (t < t0 - tol || t > horizon + tol) {
        throw ValidationError("interpolate: t = " + std::to_string(t) + " outside [t0, horizon]");
    }
    const auto& ya = solution.h.y_axis();
    if (y < ya.lo() || y > ya.hi()) {
        if (solution.extrapolations->fetch_add(1) == 0) {
            log::warn("interpolate: y = " + std::to_string(y) + " outside the solver grid, holding edge value");
        }
    }
    return std::clamp(solution.h.bilinear(t, y), 1.0, solution.r_star);
}

}  // namespace ouhjb
