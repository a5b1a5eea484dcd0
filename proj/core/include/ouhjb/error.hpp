#pragma once

#include <stdexcept>
#include <string>

namespace ouhjb {

/// Invalid parameters, configuration keys, or argument shapes.
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// The fixed-point iteration did not reach its stopping tolerance.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, double final_distance, int iterations)
        : std::runtime_error(what), final_distance_(final_distance), iterations_(iterations) {}

    double final_distance() const noexcept { return final_distance_; }
    int iterations() const noexcept { return iterations_; }

  private:
    double final_distance_;
    int iterations_;
};

/// A numerical kernel hit a state it cannot continue from (nonpositive pivot,
/// non-finite wealth, ...).
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace ouhjb
