#include "ouhjb/model.hpp"

#include <algorithm>
#include <sstream>

#include "ouhjb/error.hpp"
#include "ouhjb/io.hpp"

namespace ouhjb {
namespace {

[[noreturn]] void reject(const std::string& field, const std::string& rule, double value) {
    throw ValidationError(field + " must " + rule + ", got " + io::format_double(value));
}

void require_finite(const std::string& field, double value) {
    if (!std::isfinite(value)) reject(field, "be finite", value);
}

}  // namespace

VolatilitySpec VolatilitySpec::constant(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) reject("vol.params[0]", "be a positive constant volatility", c);
    VolatilitySpec v;
    v.kind_ = Kind::Constant;
    v.params_ = {c};
    v.p0_ = c;
    v.sigma_min_ = c;
    v.sigma_max_ = c;
    return v;
}

VolatilitySpec VolatilitySpec::sin2(double a, double b) {
    if (!(a > 0.0) || !std::isfinite(a)) reject("vol.params[0]", "be positive for sin2 volatility", a);
    if (!(b >= 0.0) || !std::isfinite(b)) reject("vol.params[1]", "be non-negative for sin2 volatility", b);
    VolatilitySpec v;
    v.kind_ = Kind::Sin2;
    v.params_ = {a, b};
    v.p0_ = a;
    v.p1_ = b;
    v.sigma_min_ = a;
    v.sigma_max_ = a + b;
    return v;
}

VolatilitySpec VolatilitySpec::logistic(double lo, double hi, double k) {
    if (!(lo > 0.0) || !std::isfinite(lo)) reject("vol.params[0]", "be positive for logistic volatility", lo);
    if (!(hi >= lo) || !std::isfinite(hi)) reject("vol.params[1]", "be at least vol.params[0]", hi);
    if (!std::isfinite(k)) reject("vol.params[2]", "be finite", k);
    VolatilitySpec v;
    v.kind_ = Kind::Logistic;
    v.params_ = {lo, hi, k};
    v.p0_ = lo;
    v.p1_ = hi;
    v.p2_ = k;
    v.sigma_min_ = lo;
    v.sigma_max_ = hi;
    return v;
}

VolatilitySpec VolatilitySpec::custom(std::function<double(double)> sigma,
                                      std::function<double(double)> derivative, double sigma_min,
                                      double sigma_max) {
    if (!sigma || !derivative) throw ValidationError("custom volatility needs sigma and sigma'");
    if (!(sigma_min > 0.0)) reject("sigma_min", "be positive", sigma_min);
    if (!(sigma_max >= sigma_min) || !std::isfinite(sigma_max)) {
        reject("sigma_max", "be finite and at least sigma_min", sigma_max);
    }
    VolatilitySpec v;
    v.kind_ = Kind::Custom;
    v.sigma_fn_ = std::move(sigma);
    v.derivative_fn_ = std::move(derivative);
    v.sigma_min_ = sigma_min;
    v.sigma_max_ = sigma_max;
    return v;
}

VolatilitySpec VolatilitySpec::from_name(const std::string& kind, const std::vector<double>& params) {
    auto need = [&](std::size_t n) {
        if (params.size() != n) {
            throw ValidationError("vol.params: '" + kind + "' volatility takes " + std::to_string(n) +
                                  " parameters, got " + std::to_string(params.size()));
        }
    };
    if (kind == "constant") {
        need(1);
        return constant(params[0]);
    }
    if (kind == "sin2") {
        need(2);
        return sin2(params[0], params[1]);
    }
    if (kind == "logistic") {
        need(3);
        return logistic(params[0], params[1], params[2]);
    }
    throw ValidationError("vol.kind: unknown volatility kind '" + kind +
                          "' (expected constant, sin2 or logistic)");
}

double VolatilitySpec::derivative(double y) const {
    switch (kind_) {
        case Kind::Constant:
            return 0.0;
        case Kind::Sin2:
            return p1_ * std::sin(2.0 * y);
        case Kind::Logistic: {
            const double e = std::exp(-p2_ * y);
            if (!std::isfinite(e)) return 0.0;
            return (p1_ - p0_) * p2_ * e / ((1.0 + e) * (1.0 + e));
        }
        case Kind::Custom:
            break;
    }
    return derivative_fn_(y);
}

std::string VolatilitySpec::kind_name() const {
    switch (kind_) {
        case Kind::Constant: return "constant";
        case Kind::Sin2: return "sin2";
        case Kind::Logistic: return "logistic";
        case Kind::Custom: return "custom";
    }
    return "custom";
}

bool VolatilitySpec::operator==(const VolatilitySpec& other) const {
    if (kind_ != other.kind_) return false;
    if (kind_ == Kind::Custom) return this == &other;
    return params_ == other.params_;
}

ModelParams::ModelParams(ModelInputs in) : in_(std::move(in)) {
    const auto& p = in_;
    require_finite("r", p.r);
    require_finite("mu", p.mu);
    require_finite("y0", p.y0);
    require_finite("beta", p.beta);
    if (p.r < 0.0) reject("r", "be non-negative", p.r);
    if (!(p.mu_lo > 0.0)) reject("mu_lo", "be positive", p.mu_lo);
    if (!(p.mu_hi > p.mu_lo)) reject("mu_hi", "exceed mu_lo", p.mu_hi);
    if (!(p.mu >= p.mu_lo && p.mu <= p.mu_hi)) {
        reject("mu", "lie in [mu_lo, mu_hi] = [" + io::format_double(p.mu_lo) + ", " +
                         io::format_double(p.mu_hi) + "]",
               p.mu);
    }
    if (!(p.alpha_hi < 0.0)) reject("alpha_hi", "be negative", p.alpha_hi);
    if (!(p.alpha_lo < p.alpha_hi)) reject("alpha_lo", "be below alpha_hi", p.alpha_lo);
    if (!(p.alpha >= p.alpha_lo && p.alpha <= p.alpha_hi)) {
        reject("alpha", "lie in [alpha_lo, alpha_hi] = [" + io::format_double(p.alpha_lo) + ", " +
                            io::format_double(p.alpha_hi) + "]",
               p.alpha);
    }
    if (p.beta < 0.0) reject("beta", "be non-negative", p.beta);
    if (!(p.gamma > 0.0 && p.gamma < 1.0)) reject("gamma", "lie in the open interval (0,1)", p.gamma);
    if (!(p.t0 > 0.0)) reject("t0", "be positive", p.t0);
    if (!(p.horizon > p.t0) || !std::isfinite(p.horizon)) reject("horizon", "exceed t0", p.horizon);
    if (!(p.vol.sigma_min() > 0.0)) reject("vol", "have a positive lower bound", p.vol.sigma_min());
}

ModelParams ModelParams::with_alpha(double alpha) const {
    ModelInputs next = in_;
    next.alpha = alpha;
    return ModelParams(std::move(next));
}

ModelParams ModelParams::with_mu(double mu) const {
    ModelInputs next = in_;
    next.mu = mu;
    return ModelParams(std::move(next));
}

bool ModelParams::operator==(const ModelParams& o) const {
    const auto& a = in_;
    const auto& b = o.in_;
    return a.r == b.r && a.mu == b.mu && a.mu_lo == b.mu_lo && a.mu_hi == b.mu_hi &&
           a.alpha == b.alpha && a.alpha_lo == b.alpha_lo && a.alpha_hi == b.alpha_hi &&
           a.beta == b.beta && a.y0 == b.y0 && a.gamma == b.gamma && a.t0 == b.t0 &&
           a.horizon == b.horizon && a.vol == b.vol;
}

double q_star_analytic(const ModelParams& p) {
    const double theta_max = std::abs(p.mu() - p.r()) / p.vol().sigma_min();
    return p.gamma() * (p.r() + theta_max * theta_max / (2.0 * (1.0 - p.gamma())));
}

QBounds q_bounds(const ModelParams& p, std::span<const double> grid) {
    if (grid.empty()) throw ValidationError("q_bounds: evaluation grid is empty");
    constexpr int kRefine = 8;
    constexpr double kStep = 1e-6;
    constexpr double kInflation = 1.05;

    double deriv_max = 0.0;
    double q_grid_max = 0.0;
    auto visit = [&](double y) {
        const double d = (q_function(p, y + kStep) - q_function(p, y - kStep)) / (2.0 * kStep);
        deriv_max = std::max(deriv_max, std::abs(d));
        q_grid_max = std::max(q_grid_max, q_function(p, y));
    };
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        for (int k = 0; k < kRefine; ++k) {
            visit(grid[i] + (grid[i + 1] - grid[i]) * k / kRefine);
        }
    }
    visit(grid.back());

    QBounds out;
    out.q_star_sup = std::max(q_star_analytic(p), q_grid_max);
    out.q_deriv_sup = kInflation * deriv_max;
    return out;
}

}  // namespace ouhjb
