#include "ouhjb/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ouhjb/error.hpp"

namespace ouhjb {

UniformAxis::UniformAxis(double lo, double hi, std::size_t n) : lo_(lo), hi_(hi), n_(n) {
    if (n < 2) throw ValidationError("axis needs at least 2 points, got " + std::to_string(n));
    if (!(lo < hi)) throw ValidationError("axis bounds must satisfy lo < hi");
    step_ = (hi - lo) / static_cast<double>(n - 1);
}

std::vector<double> UniformAxis::values() const {
    std::vector<double> v(n_);
    for (std::size_t i = 0; i < n_; ++i) v[i] = (*this)[i];
    return v;
}

void UniformAxis::locate(double x, std::size_t& i, double& w) const noexcept {
    if (!(x > lo_)) {
        i = 0;
        w = 0.0;
        return;
    }
    if (!(x < hi_)) {
        i = n_ - 2;
        w = 1.0;
        return;
    }
    const double s = (x - lo_) / step_;
    i = std::min(static_cast<std::size_t>(s), n_ - 2);
    w = std::clamp(s - static_cast<double>(i), 0.0, 1.0);
}

Grid2D::Grid2D(UniformAxis t, UniformAxis y, double fill)
    : t_(t), y_(y), data_(t.size() * y.size(), fill) {}

double Grid2D::bilinear(double t, double y) const noexcept {
    std::size_t i = 0, j = 0;
    double wt = 0.0, wy = 0.0;
    t_.locate(t, i, wt);
    y_.locate(y, j, wy);
    const double lo = (1.0 - wy) * at(i, j) + wy * at(i, j + 1);
    const double hi = (1.0 - wy) * at(i + 1, j) + wy * at(i + 1, j + 1);
    if (wt == 0.0) return lo;
    if (wt == 1.0) return hi;
    return (1.0 - wt) * lo + wt * hi;
}

double Grid2D::min() const { return *std::min_element(data_.begin(), data_.end()); }
double Grid2D::max() const { return *std::max_element(data_.begin(), data_.end()); }

}  // namespace ouhjb
