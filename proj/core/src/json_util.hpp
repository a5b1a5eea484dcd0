#pragma once

#include <json.hpp>

#include "ouhjb/error.hpp"
#include "ouhjb/hjb.hpp"
#include "ouhjb/model.hpp"

namespace ouhjb::detail {

using json = nlohmann::json;

inline json params_to_json(const ModelParams& p) {
    if (p.vol().kind() == VolatilitySpec::Kind::Custom) {
        throw ValidationError("custom volatility specs cannot be serialized");
    }
    return json{{"r", p.r()},
                {"mu", p.mu()},
                {"mu_lo", p.mu_lo()},
                {"mu_hi", p.mu_hi()},
                {"alpha", p.alpha()},
                {"alpha_lo", p.alpha_lo()},
                {"alpha_hi", p.alpha_hi()},
                {"beta", p.beta()},
                {"y0", p.y0()},
                {"gamma", p.gamma()},
                {"t0", p.t0()},
                {"horizon", p.horizon()},
                {"vol", {{"kind", p.vol().kind_name()}, {"params", p.vol().params()}}}};
}

inline ModelParams params_from_json(const json& j) {
    ModelInputs in;
    in.r = j.at("r").get<double>();
    in.mu = j.at("mu").get<double>();
    in.mu_lo = j.at("mu_lo").get<double>();
    in.mu_hi = j.at("mu_hi").get<double>();
    in.alpha = j.at("alpha").get<double>();
    in.alpha_lo = j.at("alpha_lo").get<double>();
    in.alpha_hi = j.at("alpha_hi").get<double>();
    in.beta = j.at("beta").get<double>();
    in.y0 = j.at("y0").get<double>();
    in.gamma = j.at("gamma").get<double>();
    in.t0 = j.at("t0").get<double>();
    in.horizon = j.at("horizon").get<double>();
    in.vol = VolatilitySpec::from_name(j.at("vol").at("kind").get<std::string>(),
                                       j.at("vol").at("params").get<std::vector<double>>());
    return ModelParams(std::move(in));
}

inline json config_to_json(const SolverConfig& c) {
    return json{{"y_min", c.y_min},   {"y_max", c.y_max},       {"n_y", c.n_y},
                {"n_t", c.n_t},       {"zeta", c.zeta},         {"max_iter", c.max_iter},
                {"stop_tol", c.stop_tol}, {"keep_iterates", c.keep_iterates}};
}

inline SolverConfig config_from_json(const json& j) {
    SolverConfig c;
    c.y_min = j.at("y_min").get<double>();
    c.y_max = j.at("y_max").get<double>();
    c.n_y = j.at("n_y").get<std::size_t>();
    c.n_t = j.at("n_t").get<std::size_t>();
    c.zeta = j.at("zeta").get<double>();
    c.max_iter = j.at("max_iter").get<int>();
    c.stop_tol = j.at("stop_tol").get<double>();
    c.keep_iterates = j.at("keep_iterates").get<bool>();
    return c;
}

}  // namespace ouhjb::detail
