#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ouhjb {

/// n equally spaced points lo = x_0 < ... < x_{n-1} = hi.
class UniformAxis {
  public:
    UniformAxis() = default;
    UniformAxis(double lo, double hi, std::size_t n);

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    std::size_t size() const noexcept { return n_; }
    double step() const noexcept { return step_; }
    double operator[](std::size_t i) const noexcept {
        return i + 1 == n_ ? hi_ : lo_ + static_cast<double>(i) * step_;
    }
    std::vector<double> values() const;

    /// Cell index i and weight w with x = (1-w) x_i + w x_{i+1}, x clamped to
    /// [lo, hi].
    void locate(double x, std::size_t& i, double& w) const noexcept;

    bool operator==(const UniformAxis&) const = default;

  private:
    double lo_ = 0.0, hi_ = 1.0;
    std::size_t n_ = 0;
    double step_ = 0.0;
};

/// Values on a (t, y) tensor grid, stored row-major by time: at(i, j) is the
/// value at (t_i, y_j).
class Grid2D {
  public:
    Grid2D() = default;
    Grid2D(UniformAxis t, UniformAxis y, double fill = 0.0);

    const UniformAxis& t_axis() const noexcept { return t_; }
    const UniformAxis& y_axis() const noexcept { return y_; }
    std::size_t n_t() const noexcept { return t_.size(); }
    std::size_t n_y() const noexcept { return y_.size(); }

    double& at(std::size_t i, std::size_t j) noexcept { return data_[i * y_.size() + j]; }
    double at(std::size_t i, std::size_t j) const noexcept { return data_[i * y_.size() + j]; }
    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * y_.size(), y_.size()}; }
    std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * y_.size(), y_.size()};
    }
    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    bool same_shape(const Grid2D& other) const noexcept { return t_ == other.t_ && y_ == other.y_; }

    /// Bilinear interpolation; (t, y) are clamped to the grid.
    double bilinear(double t, double y) const noexcept;

    double min() const;
    double max() const;

  private:
    UniformAxis t_, y_;
    std::vector<double> data_;
};

}  // namespace ouhjb
