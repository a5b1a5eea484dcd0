#include <filesystem>

#include "json_util.hpp"
#include "ouhjb/error.hpp"
#include "ouhjb/hjb.hpp"
#include "ouhjb/io.hpp"

namespace ouhjb {

using detail::json;

void save_solution(const HjbSolution& s, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto& ta = s.h.t_axis();
    const auto& ya = s.h.y_axis();
    json m{{"kind", "hjb_solution"},
           {"params", detail::params_to_json(s.params)},
           {"config", detail::config_to_json(s.config)},
           {"grid", {{"t_lo", ta.lo()}, {"t_hi", ta.hi()}, {"n_t", ta.size()},
                     {"y_lo", ya.lo()}, {"y_hi", ya.hi()}, {"n_y", ya.size()}, {"file", "h.csv"}}},
           {"zeta", s.zeta},
           {"kappa", s.kappa},
           {"lambda", s.lambda},
           {"r_star", s.r_star},
           {"q_star_sup", s.q_bounds.q_star_sup},
           {"q_deriv_sup", s.q_bounds.q_deriv_sup},
           {"iterations", s.iterations},
           {"converged", s.converged},
           {"clamp_count", s.clamp_count},
           {"rho_history", s.rho_history},
           {"sup_history", s.sup_history},
           {"iterate_min", s.iterate_min},
           {"iterate_max", s.iterate_max},
           {"certificate", s.certificate},
           {"metric_note", "distances and certificates are suprema over the truncated solver grid"}};
    io::write_text(dir / "manifest.json", m.dump(2) + "\n");

    io::CsvWriter out(dir / "h.csv", {"t", "y", "h"});
    for (std::size_t i = 0; i < s.h.n_t(); ++i) {
        const std::string t = io::format_double(ta[i]);
        for (std::size_t j = 0; j < s.h.n_y(); ++j) {
            out.row({t, io::format_double(ya[j]), io::format_double(s.h.at(i, j))});
        }
    }
    out.close();
}

HjbSolution load_solution(const std::filesystem::path& dir) {
    json m;
    try {
        m = json::parse(io::read_text(dir / "manifest.json"));
    } catch (const json::exception& e) {
        throw ValidationError(std::string("cannot parse solution manifest: ") + e.what());
    }
    try {
        const auto& g = m.at("grid");
        const UniformAxis ta(g.at("t_lo").get<double>(), g.at("t_hi").get<double>(), g.at("n_t").get<std::size_t>());
        const UniformAxis ya(g.at("y_lo").get<double>(), g.at("y_hi").get<double>(), g.at("n_y").get<std::size_t>());
        HjbSolution s(detail::params_from_json(m.at("params")), detail::config_from_json(m.at("config")),
                      Grid2D(ta, ya, 1.0));
        s.zeta = m.at("zeta").get<double>();
        s.kappa = m.at("kappa").get<double>();
        s.lambda = m.at("lambda").get<double>();
        s.r_star = m.at("r_star").get<double>();
        s.q_bounds.q_star_sup = m.at("q_star_sup").get<double>();
        s.q_bounds.q_deriv_sup = m.at("q_deriv_sup").get<double>();
        s.iterations = m.at("iterations").get<int>();
        s.converged = m.at("converged").get<bool>();
        s.clamp_count = m.at("clamp_count").get<std::size_t>();
        s.rho_history = m.at("rho_history").get<std::vector<double>>();
        s.sup_history = m.at("sup_history").get<std::vector<double>>();
        s.iterate_min = m.at("iterate_min").get<std::vector<double>>();
        s.iterate_max = m.at("iterate_max").get<std::vector<double>>();
        s.certificate = m.at("certificate").get<std::vector<double>>();

        const auto table = io::read_csv(dir / g.at("file").get<std::string>());
        const std::size_t ch = table.column("h");
        if (table.rows.size() != ta.size() * ya.size()) {
            throw ValidationError("h.csv has " + std::to_string(table.rows.size()) + " rows, expected " +
                                  std::to_string(ta.size() * ya.size()));
        }
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            s.h.data()[r] = io::parse_double(table.rows[r][ch], "h");
        }
        return s;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed solution manifest: ") + e.what());
    }
}

}  // namespace ouhjb
