#include "ouhjb/config.hpp"

#include <algorithm>

#include "ouhjb/error.hpp"
#include "ouhjb/io.hpp"

namespace ouhjb {

const std::vector<std::string>& Config::known_keys() {
    static const std::vector<std::string> keys = {
        // model
        "r", "mu", "mu_lo", "mu_hi", "alpha", "alpha_lo", "alpha_hi", "beta", "y0", "gamma", "t0",
        "horizon", "vol.kind", "vol.params",
        // solver
        "solver.y_min", "solver.y_max", "solver.n_y", "solver.n_t", "solver.zeta", "solver.max_iter",
        "solver.stop_tol",
        // bounds ledger
        "bounds.zeta0", "bounds.m",
        // experiment drivers
        "run.x0", "run.y0", "run.paths", "run.reps", "run.dt", "run.inner_paths", "run.inner_dt",
        "run.delta_target", "run.mode", "run.alpha_hat", "run.t0_list", "run.estimate_mu",
    };
    return keys;
}

Config Config::parse(std::string_view text) {
    Config cfg;
    int line_no = 0;
    for (auto raw : io::split(text, '\n')) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = io::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        cfg.set(io::trim(line.substr(0, eq)), io::trim(line.substr(eq + 1)));
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path) { return parse(io::read_text(path)); }

void Config::set(std::string_view key, std::string_view value) {
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        throw ValidationError("unknown config key '" + std::string(key) + "'");
    }
    values_[std::string(key)] = std::string(io::trim(value));
}

void Config::apply_override(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ValidationError("override '" + std::string(assignment) + "' is not of the form key=value");
    }
    set(io::trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

bool Config::has(std::string_view key) const { return values_.find(key) != values_.end(); }

std::optional<std::string> Config::get(std::string_view key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

double Config::get_double(std::string_view key, double fallback) const {
    const auto v = get(key);
    return v ? io::parse_double(*v, key) : fallback;
}

long long Config::get_int(std::string_view key, long long fallback) const {
    const auto v = get(key);
    return v ? io::parse_int(*v, key) : fallback;
}

std::string Config::get_string(std::string_view key, const std::string& fallback) const {
    const auto v = get(key);
    return v ? *v : fallback;
}

ModelParams Config::model_params() const {
    ModelInputs in;
    in.r = get_double("r", in.r);
    in.mu = get_double("mu", in.mu);
    in.mu_lo = get_double("mu_lo", in.mu_lo);
    in.mu_hi = get_double("mu_hi", in.mu_hi);
    in.alpha = get_double("alpha", in.alpha);
    in.alpha_lo = get_double("alpha_lo", in.alpha_lo);
    in.alpha_hi = get_double("alpha_hi", in.alpha_hi);
    in.beta = get_double("beta", in.beta);
    in.y0 = get_double("y0", in.y0);
    in.gamma = get_double("gamma", in.gamma);
    in.t0 = get_double("t0", in.t0);
    in.horizon = get_double("horizon", in.horizon);

    if (has("vol.kind") || has("vol.params")) {
        const std::string kind = get_string("vol.kind", "sin2");
        std::vector<double> params;
        if (const auto text = get("vol.params"); text && !io::trim(*text).empty()) {
            for (auto item : io::split(*text, ',')) params.push_back(io::parse_double(item, "vol.params"));
        } else if (kind == "sin2") {
            params = {0.5, 1.0};
        }
        in.vol = VolatilitySpec::from_name(kind, params);
    }
    return ModelParams(std::move(in));
}

SolverConfig Config::solver_config(const ModelParams& params) const {
    SolverConfig c = SolverConfig::for_params(params);
    c.y_min = get_double("solver.y_min", c.y_min);
    c.y_max = get_double("solver.y_max", c.y_max);
    const auto count = [&](std::string_view key, std::size_t fallback) {
        const long long v = get_int(key, static_cast<long long>(fallback));
        if (v < 0) throw ValidationError(std::string(key) + " must be nonnegative");
        return static_cast<std::size_t>(v);
    };
    c.n_y = count("solver.n_y", c.n_y);
    c.n_t = count("solver.n_t", c.n_t);
    c.zeta = get_double("solver.zeta", c.zeta);
    c.max_iter = static_cast<int>(get_int("solver.max_iter", c.max_iter));
    c.stop_tol = get_double("solver.stop_tol", c.stop_tol);
    c.validate();
    return c;
}

BoundsOptions Config::bounds_options() const {
    BoundsOptions b;
    b.zeta0 = get_double("bounds.zeta0", b.zeta0);
    b.m = static_cast<int>(get_int("bounds.m", b.m));
    if (!(b.zeta0 > 0.0)) throw ValidationError("bounds.zeta0 must be positive");
    if (b.m < 1) throw ValidationError("bounds.m must be at least 1");
    return b;
}

}  // namespace ouhjb
