#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ouhjb/model.hpp"

namespace ouhjb {

/// n_steps equal steps on [start, end].
class TimeGrid {
  public:
    TimeGrid(double start, double end, std::size_t n_steps);
    /// Grid on [start, end] with step as close to `dt` as possible.
    static TimeGrid with_step(double start, double end, double dt);

    double start() const noexcept { return start_; }
    double end() const noexcept { return end_; }
    std::size_t n_steps() const noexcept { return n_; }
    double dt() const noexcept { return dt_; }
    double time(std::size_t k) const noexcept {
        return k == n_ ? end_ : start_ + static_cast<double>(k) * dt_;
    }

  private:
    double start_, end_;
    std::size_t n_;
    double dt_;
};

/// One simulated trajectory of the factor and the stock together with the
/// Gaussian increments that drove it.
struct PathBundle {
    TimeGrid grid;
    std::vector<double> y_path;        ///< n_steps + 1 factor values
    std::vector<double> s_path;        ///< n_steps + 1 stock prices
    std::vector<double> w_increments;  ///< n_steps market-driver increments
    std::vector<double> u_increments;  ///< n_steps factor-driver increments
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

/// Exact OU transition over dt: y e^{alpha dt} + nu z with
/// nu^2 = beta^2 (1 - e^{2 alpha dt}) / (2 |alpha|).
double ou_step(double y, double dt, double alpha, double beta, double z);
/// Standard deviation nu of the transition above.
double ou_step_sd(double dt, double alpha, double beta);

/// Simulates one bundle on `grid` started at (y_start, s0). The normals for
/// step k come from block k of RngStream(seed, stream_id).
PathBundle simulate_path(const ModelParams& params, const TimeGrid& grid, double y_start, double s0,
                         std::uint64_t seed, std::uint64_t stream_id);

/// Bundles for stream ids 0 .. n_paths-1, each started at (params.y0(), s0).
std::vector<PathBundle> simulate_paths(const ModelParams& params, const TimeGrid& grid, double s0,
                                       std::size_t n_paths, std::uint64_t seed);

/// int_0^tau Y dY through (Y_tau^2 - Y_0^2 - beta^2 tau) / 2, with tau measured
/// from grid.start(). Y_tau is linearly interpolated when tau is off-grid.
double ito_integral_y_dy(const std::vector<double>& y_path, const TimeGrid& grid, double beta,
                         double tau);
/// Same over the full grid.
double ito_integral_y_dy(const std::vector<double>& y_path, const TimeGrid& grid, double beta);

/// Writes `t,y,s` for the bundle to dir/path_<stream_id>.csv and returns the
/// file path.
std::filesystem::path write_path_csv(const PathBundle& bundle, const std::filesystem::path& dir);

}  // namespace ouhjb
