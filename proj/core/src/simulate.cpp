#include "ouhjb/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ouhjb/error.hpp"
#include "ouhjb/io.hpp"
#include "ouhjb/parallel.hpp"
#include "ouhjb/rng.hpp"

namespace ouhjb {

TimeGrid::TimeGrid(double start, double end, std::size_t n_steps) : start_(start), end_(end), n_(n_steps) {
    if (!(start < end)) throw ValidationError("time grid needs start < end");
    if (n_steps == 0) throw ValidationError("time grid needs at least one step");
    dt_ = (end - start) / static_cast<double>(n_steps);
}

TimeGrid TimeGrid::with_step(double start, double end, double dt) {
    if (!(dt > 0.0)) throw ValidationError("time step must be positive");
    const double n = std::max(1.0, std::round((end - start) / dt));
    return TimeGrid(start, end, static_cast<std::size_t>(n));
}

double ou_step_sd(double dt, double alpha, double beta) {
    if (!(dt > 0.0)) throw ValidationError("ou_step: dt must be positive");
    if (!(alpha < 0.0)) throw ValidationError("ou_step: alpha must be negative");
    return beta * std::sqrt(-std::expm1(2.0 * alpha * dt) / (2.0 * -alpha));
}

double ou_step(double y, double dt, double alpha, double beta, double z) {
    const double nu = ou_step_sd(dt, alpha, beta);
    return y * std::exp(alpha * dt) + nu * z;
}

PathBundle simulate_path(const ModelParams& params, const TimeGrid& grid, double y_start, double s0,
                         std::uint64_t seed, std::uint64_t stream_id) {
    if (!(s0 > 0.0)) throw ValidationError("initial stock price s0 must be positive");
    const std::size_t n = grid.n_steps();
    const double dt = grid.dt();
    const double decay = std::exp(params.alpha() * dt);
    const double nu = ou_step_sd(dt, params.alpha(), params.beta());
    const double sqrt_dt = std::sqrt(dt);
    const RngStream rng(seed, stream_id);

    PathBundle b{grid, {}, {}, {}, {}, seed, stream_id};
    b.y_path.resize(n + 1);
    b.s_path.resize(n + 1);
    b.w_increments.resize(n);
    b.u_increments.resize(n);
    b.y_path[0] = y_start;
    b.s_path[0] = s0;
    double log_s = std::log(s0);
    for (std::size_t k = 0; k < n; ++k) {
        const auto z = rng.normals(k);
        const double dw = sqrt_dt * z[0];
        b.w_increments[k] = dw;
        b.u_increments[k] = sqrt_dt * z[1];
        const double y = b.y_path[k];
        const double sigma = params.vol().evaluate(y);
        log_s += (params.mu() - 0.5 * sigma * sigma) * dt + sigma * dw;
        b.s_path[k + 1] = std::exp(log_s);
        b.y_path[k + 1] = y * decay + nu * z[1];
    }
    return b;
}

std::vector<PathBundle> simulate_paths(const ModelParams& params, const TimeGrid& grid, double s0,
                                       std::size_t n_paths, std::uint64_t seed) {
    if (n_paths == 0) throw ValidationError("simulate_paths: n_paths must be at least 1");
    if (!(s0 > 0.0)) throw ValidationError("initial stock price s0 must be positive");
    std::vector<PathBundle> out(n_paths, PathBundle{grid, {}, {}, {}, {}, seed, 0});
    parallel_for(n_paths, [&](std::size_t i) { out[i] = simulate_path(params, grid, params.y0(), s0, seed, i); });
    return out;
}

double ito_integral_y_dy(const std::vector<double>& y_path, const TimeGrid& grid, double beta, double tau) {
    if (y_path.size() != grid.n_steps() + 1) throw ValidationError("path length does not match the grid");
    const double span = grid.end() - grid.start();
    tau = std::clamp(tau, 0.0, span);
    const double pos = tau / grid.dt();
    const std::size_t k = std::min(static_cast<std::size_t>(pos), grid.n_steps() - 1);
    const double w = std::clamp(pos - static_cast<double>(k), 0.0, 1.0);
    const double y_tau = w == 0.0 ? y_path[k] : (1.0 - w) * y_path[k] + w * y_path[k + 1];
    return 0.5 * (y_tau * y_tau - y_path[0] * y_path[0] - beta * beta * tau);
}

double ito_integral_y_dy(const std::vector<double>& y_path, const TimeGrid& grid, double beta) {
    return ito_integral_y_dy(y_path, grid, beta, grid.end() - grid.start());
}

std::filesystem::path write_path_csv(const PathBundle& bundle, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto path = dir / ("path_" + std::to_string(bundle.stream_id) + ".csv");
    io::CsvWriter out(path, {"t", "y", "s"});
    for (std::size_t k = 0; k < bundle.y_path.size(); ++k) {
        out.row({io::format_double(bundle.grid.time(k)), io::format_double(bundle.y_path[k]),
                 io::format_double(bundle.s_path[k])});
    }
    out.close();
    return path;
}

}  // namespace ouhjb
