#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "ouhjb/grid.hpp"
#include "ouhjb/model.hpp"

namespace ouhjb {

/// Discretization and stopping rules for the fixed-point solve.
struct SolverConfig {
    double y_min = -1.0;
    double y_max = 1.0;
    std::size_t n_y = 401;
    std::size_t n_t = 201;      ///< time points on [t0, horizon]
    double zeta = 0.0;          ///< contraction parameter; 0 picks it from a 5-iteration pre-pass
    int max_iter = 64;
    double stop_tol = 1e-8;     ///< in the weighted distance rho*
    bool keep_iterates = false;

    /// Default grid for `params`: centre y0 e^{alpha t0} over both drift
    /// bounds, half-width six stationary deviations beta / sqrt(2 |alpha_hi|).
    static SolverConfig for_params(const ModelParams& params);
    void validate() const;
};

/// h(t, y) on the solver grid with the iteration history.
struct HjbSolution {
    HjbSolution(ModelParams p, SolverConfig c, Grid2D grid)
        : params(std::move(p)), config(c), h(std::move(grid)) {}

    ModelParams params;
    SolverConfig config;
    Grid2D h;
    std::vector<Grid2D> iterates;        ///< h_1 .. h_n when keep_iterates is set
    std::vector<double> rho_history;     ///< rho*(h_n, h_{n-1}), n = 1 ..
    std::vector<double> sup_history;     ///< sup |h_n - h_{n-1}|
    std::vector<double> iterate_min;     ///< min of h_n over the grid, before clamping
    std::vector<double> iterate_max;
    std::vector<double> certificate;     ///< U*_n, n = 1 ..
    double zeta = 0.0;
    double kappa = 0.0;                  ///< Q* + zeta + 1
    double lambda = 0.0;                 ///< 1 / (zeta + 1)
    double r_star = 0.0;                 ///< (T~ + 1) e^{Q* T~}
    QBounds q_bounds;
    int iterations = 0;
    bool converged = false;
    std::size_t clamp_count = 0;
    std::shared_ptr<std::atomic<std::size_t>> extrapolations = std::make_shared<std::atomic<std::size_t>>(0);

    /// Throws ConvergenceError unless the stopping tolerance was reached.
    void require_converged() const;
};

/// sup over the grid of e^{-kappa (T - t)} |f - g|.
double rho_star_distance(const Grid2D& f, const Grid2D& g, double kappa, double horizon);

struct OperatorStats {
    std::size_t upwind_nodes = 0;
};

/// Solves u_t + Q u + alpha y u_y + (beta^2/2) u_yy + f^{1-q*} / q* = 0,
/// u(T) = 1 backward in time on f's grid (Crank-Nicolson, central differences
/// switching to upwinding where the cell Peclet number exceeds 2, u_yy = 0 at
/// both lateral boundaries).
Grid2D apply_operator_pde(const Grid2D& f, const ModelParams& params, OperatorStats* stats = nullptr);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Feynman-Kac evaluation of the same operator at one point by simulating the
/// factor from (t, y) with exact OU steps of size about `dt`.
McEstimate apply_operator_mc(const std::function<double(double, double)>& f, double t, double y,
                             const ModelParams& params, std::size_t n_paths, std::uint64_t seed,
                             double dt = 5e-3);

/// Iterates h_n = L(h_{n-1}) from h_0 = 1. Non-convergence is reported through
/// `converged`; see HjbSolution::require_converged.
HjbSolution fixed_point_solve(const ModelParams& params, const SolverConfig& config);
HjbSolution fixed_point_solve(const ModelParams& params);

/// Minimizer of g_n(x) = x T~ - ln x - (n-1) ln(1+x).
double zeta_star(int n, double t_tilde);

/// B* lambda^n with lambda = 1/(zeta+1), kappa = Q* + zeta + 1,
/// r* = (T~+1) e^{Q* T~} and B* = e^{kappa T~} (1 + r*) / (1 - lambda).
double supergeometric_bound(int n, double zeta, double t_tilde, double q_star);
double supergeometric_bound(int n, double zeta, const ModelParams& params);
/// The bound at zeta = zeta_star(n), computed as C* exp(g_n(x*_n)) with
/// C* = (1 + r*) e^{(Q*+1) T~}.
double optimized_bound(int n, double t_tilde, double q_star);

double r_star_bound(double t_tilde, double q_star);

/// Bilinear interpolation of h. y outside the grid is held constant (counted in
/// solution.extrapolations, warned once); the result is clamped to [1, r*].
/// Throws ValidationError for t outside [t0, horizon].
double interpolate(const HjbSolution& solution, double t, double y);

/// Writes dir/manifest.json and dir/h.csv (columns t,y,h).
void save_solution(const HjbSolution& solution, const std::filesystem::path& dir);
HjbSolution load_solution(const std::filesystem::path& dir);

}  // namespace ouhjb
