#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace ouhjb {

/// Stock volatility as a function of the economic factor, sigma(y), together
/// with its derivative and the bounds sigma_min <= sigma(y) <= sigma_max.
///
/// Three built-in shapes are provided:
///   constant   sigma(y) = c                                   params {c}
///   sin2       sigma(y) = a + b sin^2(y)                      params {a, b}
///   logistic   sigma(y) = lo + (hi - lo) / (1 + exp(-k y))    params {lo, hi, k}
/// Custom shapes supply sigma, sigma' and both bounds explicitly.
class VolatilitySpec {
  public:
    enum class Kind { Constant, Sin2, Logistic, Custom };

    static VolatilitySpec constant(double c);
    static VolatilitySpec sin2(double a = 0.5, double b = 1.0);
    static VolatilitySpec logistic(double lo, double hi, double k);
    static VolatilitySpec custom(std::function<double(double)> sigma,
                                 std::function<double(double)> derivative, double sigma_min,
                                 double sigma_max);
    /// Builds a built-in shape from its config name ("constant", "sin2", "logistic").
    static VolatilitySpec from_name(const std::string& kind, const std::vector<double>& params);

    double evaluate(double y) const {
        switch (kind_) {
            case Kind::Constant:
                return p0_;
            case Kind::Sin2: {
                const double s = std::sin(y);
                return p0_ + p1_ * s * s;
            }
            case Kind::Logistic:
                return p0_ + (p1_ - p0_) / (1.0 + std::exp(-p2_ * y));
            case Kind::Custom:
                break;
        }
        return sigma_fn_(y);
    }
    double operator()(double y) const { return evaluate(y); }
    double derivative(double y) const;

    double sigma_min() const noexcept { return sigma_min_; }
    double sigma_max() const noexcept { return sigma_max_; }
    Kind kind() const noexcept { return kind_; }
    std::string kind_name() const;
    const std::vector<double>& params() const noexcept { return params_; }
    /// True when sigma(-y) == sigma(y) for every y.
    bool is_even() const noexcept { return kind_ == Kind::Constant || kind_ == Kind::Sin2; }

    bool operator==(const VolatilitySpec& other) const;

  private:
    VolatilitySpec() = default;

    Kind kind_ = Kind::Constant;
    std::vector<double> params_;
    double p0_ = 0.0, p1_ = 0.0, p2_ = 0.0;
    double sigma_min_ = 0.0, sigma_max_ = 0.0;
    std::function<double(double)> sigma_fn_;
    std::function<double(double)> derivative_fn_;
};

/// Raw market, factor and utility parameters before validation. Defaults are
/// the two-figure simulation setting (T0 = 5, horizon 6, sigma = 0.5 + sin^2 y).
struct ModelInputs {
    double r = 0.01;          ///< riskless rate
    double mu = 0.02;         ///< stock appreciation rate
    double mu_lo = 0.015;     ///< lower bound for mu
    double mu_hi = 0.03;      ///< upper bound for mu
    double alpha = -5.0;      ///< factor mean-reversion drift
    double alpha_lo = -10.0;  ///< most negative admissible drift
    double alpha_hi = -0.15;  ///< least negative admissible drift
    double beta = 1.0;        ///< factor diffusion
    double y0 = 0.0;          ///< initial factor value
    double gamma = 0.75;      ///< utility exponent, in (0, 1)
    double t0 = 5.0;          ///< end of the observation window
    double horizon = 6.0;     ///< terminal time
    VolatilitySpec vol = VolatilitySpec::sin2(0.5, 1.0);
};

/// Validated, immutable model parameters. Construction throws ValidationError
/// naming the offending field.
class ModelParams {
  public:
    explicit ModelParams(ModelInputs inputs);
    ModelParams() : ModelParams(ModelInputs{}) {}

    const ModelInputs& inputs() const noexcept { return in_; }

    double r() const noexcept { return in_.r; }
    double mu() const noexcept { return in_.mu; }
    double mu_lo() const noexcept { return in_.mu_lo; }
    double mu_hi() const noexcept { return in_.mu_hi; }
    double alpha() const noexcept { return in_.alpha; }
    double alpha_lo() const noexcept { return in_.alpha_lo; }
    double alpha_hi() const noexcept { return in_.alpha_hi; }
    double beta() const noexcept { return in_.beta; }
    double y0() const noexcept { return in_.y0; }
    double gamma() const noexcept { return in_.gamma; }
    double t0() const noexcept { return in_.t0; }
    double horizon() const noexcept { return in_.horizon; }
    const VolatilitySpec& vol() const noexcept { return in_.vol; }

    /// Conjugate exponent 1 / (1 - gamma).
    double q_star() const noexcept { return 1.0 / (1.0 - in_.gamma); }
    /// Length of the control interval, horizon - t0.
    double t_tilde() const noexcept { return in_.horizon - in_.t0; }

    ModelParams with_alpha(double alpha) const;
    ModelParams with_mu(double mu) const;

    bool operator==(const ModelParams& other) const;

  private:
    ModelInputs in_;
};

/// theta(y) = (mu - r) / sigma(y).
inline double risk_premium(const ModelParams& p, double y) {
    return (p.mu() - p.r()) / p.vol().evaluate(y);
}

/// Q(y) = gamma (r + theta(y)^2 / (2 (1 - gamma))).
inline double q_function(const ModelParams& p, double y) {
    const double theta = risk_premium(p, y);
    return p.gamma() * (p.r() + theta * theta / (2.0 * (1.0 - p.gamma())));
}

/// sup_y Q(y), attained (or approached) where sigma = sigma_min.
double q_star_analytic(const ModelParams& p);

struct QBounds {
    double q_star_sup = 0.0;   ///< Q*, upper bound for Q
    double q_deriv_sup = 0.0;  ///< Q1*, upper bound for |Q'|
};

/// Q* from the analytic supremum; Q1* from central differences on a refined
/// copy of `grid` (8 sub-points per cell) inflated by 5%.
QBounds q_bounds(const ModelParams& p, std::span<const double> grid);

}  // namespace ouhjb
