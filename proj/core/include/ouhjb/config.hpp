#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ouhjb/bounds.hpp"
#include "ouhjb/hjb.hpp"
#include "ouhjb/model.hpp"

namespace ouhjb {

/// Flat key-value configuration.
///
/// File syntax: one `key = value` per line, `#` starts a comment, blank lines
/// are ignored. Numbers use dot decimals and are parsed without locale.
///
/// Model keys: r, mu, mu_lo, mu_hi, alpha, alpha_lo, alpha_hi, beta, y0, gamma,
/// t0, horizon, vol.kind, vol.params (comma separated).
/// Solver keys: solver.y_min, solver.y_max, solver.n_y, solver.n_t,
/// solver.zeta, solver.max_iter, solver.stop_tol. Bound keys: bounds.zeta0,
/// bounds.m. Experiment keys (run.*): see `Config::known_keys()`.
class Config {
  public:
    Config() = default;

    static Config parse(std::string_view text);
    static Config load(const std::filesystem::path& path);
    static const std::vector<std::string>& known_keys();

    /// Applies `key=value`; unknown keys are rejected with the key named.
    void set(std::string_view key, std::string_view value);
    void apply_override(std::string_view assignment);

    bool has(std::string_view key) const;
    std::optional<std::string> get(std::string_view key) const;
    double get_double(std::string_view key, double fallback) const;
    long long get_int(std::string_view key, long long fallback) const;
    std::string get_string(std::string_view key, const std::string& fallback) const;

    const std::map<std::string, std::string, std::less<>>& values() const noexcept { return values_; }

    /// Missing model keys take the ModelInputs defaults.
    ModelParams model_params() const;
    /// SolverConfig::for_params(params) with any solver.* keys applied.
    SolverConfig solver_config(const ModelParams& params) const;
    BoundsOptions bounds_options() const;

  private:
    std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace ouhjb
