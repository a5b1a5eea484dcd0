#include "ouhjb/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "json_util.hpp"
#include "ouhjb/error.hpp"
#include "ouhjb/io.hpp"
#include "ouhjb/log.hpp"
#include "ouhjb/parallel.hpp"
#include "ouhjb/rng.hpp"
#include "ouhjb/simulate.hpp"

namespace ouhjb {

namespace {

void check_pairing(const Strategy& s, const ModelParams& params) {
    if (s.kind() == StrategyKind::Optimal && !(s.solution()->params == params)) {
        throw ValidationError("optimal strategy was solved under different parameters than the market");
    }
    const ModelParams& sp = s.strategy_params();
    if (sp.t0() != params.t0() || sp.horizon() != params.horizon() || sp.gamma() != params.gamma()) {
        throw ValidationError("strategy and market disagree on t0, horizon or gamma");
    }
}

McEstimate mean_and_se(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    const double n = static_cast<double>(v.size());
    const double mean = s / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0};
}

}  // namespace

McEstimate mc_value(const Strategy& strategy, const ModelParams& params, double x0, double y0, std::size_t n_paths,
                    std::uint64_t seed, double dt, std::optional<double> t_start) {
    if (n_paths < 100) throw ValidationError("mc_value: n_paths must be at least 100");
    if (!(x0 > 0.0)) throw ValidationError("mc_value: x0 must be positive");
    check_pairing(strategy, params);
    const double start = t_start.value_or(params.t0());
    const double horizon = params.horizon();
    if (start < params.t0() - 1e-12 || start > horizon + 1e-12) throw ValidationError("mc_value: t_start outside [t0, horizon]");
    if (horizon - start <= 1e-12 * std::max(1.0, horizon)) return {std::pow(x0, params.gamma()), 0.0};

    const TimeGrid grid = TimeGrid::with_step(start, horizon, dt);
    std::vector<double> values(n_paths);
    parallel_for(n_paths, [&](std::size_t i) {
        const PathBundle b = simulate_path(params, grid, y0, 1.0, seed, i);
        values[i] = path_objective(strategy, b, params, x0);
    });
    return mean_and_se(values);
}

StrategyComparison compare_strategies(const std::vector<Strategy>& strategies, const ModelParams& params, double x0,
                                      double y0, std::size_t n_paths, std::uint64_t seed, double dt) {
    if (strategies.empty()) throw ValidationError("compare_strategies: no strategies given");
    if (n_paths < 100) throw ValidationError("compare_strategies: n_paths must be at least 100");
    if (!(x0 > 0.0)) throw ValidationError("compare_strategies: x0 must be positive");
    for (const auto& s : strategies) check_pairing(s, params);
    const std::size_t ns = strategies.size();
    const TimeGrid grid = TimeGrid::with_step(params.t0(), params.horizon(), dt);
    std::vector<double> obj(n_paths * ns);
    parallel_for(n_paths, [&](std::size_t i) {
        const PathBundle b = simulate_path(params, grid, y0, 1.0, seed, i);
        for (std::size_t k = 0; k < ns; ++k) obj[i * ns + k] = path_objective(strategies[k], b, params, x0);
    });

    StrategyComparison out;
    std::vector<double> col(n_paths), diff(n_paths);
    for (std::size_t k = 0; k < ns; ++k) {
        for (std::size_t i = 0; i < n_paths; ++i) {
            col[i] = obj[i * ns + k];
            diff[i] = obj[i * ns] - col[i];
        }
        out.names.push_back(strategies[k].name());
        out.values.push_back(mean_and_se(col));
        const McEstimate d = mean_and_se(diff);
        out.diff_mean.push_back(d.mean);
        out.diff_se.push_back(d.std_error);
    }
    return out;
}

std::vector<Strategy> perturbed_strategies(const Strategy& optimal) {
    return {optimal.scaled(1.2, 1.0), optimal.scaled(0.8, 1.0), optimal.scaled(1.0, 1.2), optimal.scaled(1.0, 0.8),
            optimal.scaled(1.0, 0.5)};
}

DeltaReport delta_pipeline(const ModelParams& params, const HjbSolution& truth, double x0, std::size_t n_reps,
                           std::uint64_t seed, const DeltaOptions& opt) {
    if (n_reps < 1) throw ValidationError("delta_pipeline: n_reps must be at least 1");
    if (!(x0 > 0.0)) throw ValidationError("delta_pipeline: x0 must be positive");
    if (!(truth.params == params)) throw ValidationError("delta_pipeline: reference solution uses different parameters");

    const ConstantsLedger ledger = build_ledger(params, truth, opt.bounds);
    DeltaReport rep;
    rep.x0 = x0;
    rep.delta = delta_known_mu(ledger, x0);
    rep.delta2 = delta_unknown_mu(ledger, x0);
    rep.epsilon = ledger.epsilon;
    rep.epsilon1 = ledger.epsilon1;

    const TimeGrid obs_grid = TimeGrid::with_step(0.0, params.t0(), opt.obs_dt);
    const std::uint64_t obs_seed = RngStream::derive_seed(seed, 1);
    const double gamma = params.gamma();
    // Zero investment with c = r on [0, t0] leaves wealth at x0.
    const double x_t0 = x0;

    for (std::size_t r = 0; r < n_reps; ++r) {
        const PathBundle obs = simulate_path(params, obs_grid, params.y0(), 1.0, obs_seed, r);
        const EstimationReport est = estimate(obs, params);
        DeltaReplication row;
        row.replication = r;
        row.alpha_hat = opt.force_alpha.value_or(est.alpha_hat);
        row.mu_hat = opt.estimate_mu ? std::clamp(est.mu_hat, params.mu_lo(), params.mu_hi()) : params.mu();
        row.y_t0 = obs.y_path.back();
        row.j_star = std::pow(x_t0, gamma) * interpolate(truth, params.t0(), row.y_t0);

        const ModelParams est_params = params.with_alpha(row.alpha_hat).with_mu(row.mu_hat);
        SolverConfig cfg = truth.config;
        const HjbSolution h_hat = fixed_point_solve(est_params, cfg);
        if (!h_hat.converged) {
            row.converged = false;
            ++rep.excluded;
            rep.rows.push_back(row);
            log::warn("delta_pipeline: replication " + std::to_string(r) + " excluded, estimated solve did not converge");
            continue;
        }
        const McEstimate j_hat = mc_value(Strategy::estimated(h_hat), params, x_t0, row.y_t0, opt.inner_paths,
                                          RngStream::derive_seed(seed, 1000 + r), opt.inner_dt);
        row.j_hat = j_hat.mean;
        row.j_hat_se = j_hat.std_error;
        row.abs_deviation = std::abs(row.j_hat - row.j_star);
        rep.rows.push_back(row);
    }

    std::vector<double> dev, se;
    for (const auto& row : rep.rows) {
        if (!row.converged) continue;
        dev.push_back(row.abs_deviation);
        se.push_back(row.j_hat_se);
    }
    if (!dev.empty()) {
        const McEstimate d = mean_and_se(dev);
        rep.mean_abs_deviation = d.mean;
        rep.se_abs_deviation = d.std_error;
        rep.mean_inner_se = mean_and_se(se).mean;
    }
    return rep;
}

ModelParams fig1_params(double t0) {
    ModelInputs in;
    in.alpha = -5.0;
    in.beta = 1.0;
    in.alpha_lo = -10.0;
    in.alpha_hi = -0.15;
    in.t0 = t0;
    in.horizon = t0 + 1.0;
    return ModelParams(in);
}

Fig1Result reproduce_fig1(std::uint64_t seed, const std::filesystem::path& out_dir, std::size_t n_reps,
                          const std::vector<double>& t0_values, double dt) {
    std::filesystem::create_directories(out_dir);
    Fig1Result res;
    res.csv = out_dir / "fig1.csv";
    res.plot = out_dir / "fig1.gp";
    res.t0_values = t0_values;
    io::CsvWriter out(res.csv, {"t0", "replication", "alpha_hat", "tau_h", "hit"});
    for (std::size_t k = 0; k < t0_values.size(); ++k) {
        const ModelParams p = fig1_params(t0_values[k]);
        const EstimationSummary s = replicate_estimation(p, n_reps, RngStream::derive_seed(seed, k), dt);
        for (std::size_t i = 0; i < s.reports.size(); ++i) {
            const auto& r = s.reports[i];
            out.row({io::format_double(t0_values[k]), std::to_string(i), io::format_double(r.alpha_hat),
                     r.tau_H ? io::format_double(*r.tau_H) : "nan", r.tau_H ? "1" : "0"});
        }
        res.reports.push_back(s.reports);
    }
    out.close();

    std::string gp =
        "set datafile separator ','\n"
        "set terminal pngcairo size 900,500\n"
        "set output 'fig1.png'\n"
        "set xlabel 'replication'\n"
        "set ylabel 'alpha estimate'\n"
        "set yrange [-10.5:0]\n"
        "set arrow from graph 0, first -5 to graph 1, first -5 nohead dashtype 2\n"
        "plot ";
    for (std::size_t k = 0; k < t0_values.size(); ++k) {
        const std::string t = io::format_double(t0_values[k]);
        if (k) gp += ", \\\n     ";
        gp += "'fig1.csv' using ($1==" + t + " ? $2 : 1/0):3 skip 1 with points pt " + std::to_string(7 + 2 * k) +
              " title 'T0 = " + t + "'";
    }
    gp += "\n";
    io::write_text(res.plot, gp);
    return res;
}

Fig2Result reproduce_fig2(std::uint64_t seed, const std::filesystem::path& out_dir, double alpha_hat) {
    (void)seed;  // deterministic; the seed is kept for the manifest
    std::filesystem::create_directories(out_dir);
    const ModelParams p;  // the defaults are the figure setting
    const SolverConfig cfg = SolverConfig::for_params(p);
    const HjbSolution h = fixed_point_solve(p, cfg);
    h.require_converged();
    const HjbSolution hh = fixed_point_solve(p.with_alpha(alpha_hat), cfg);
    hh.require_converged();

    Fig2Result res;
    res.csv = out_dir / "fig2.csv";
    res.plot = out_dir / "fig2.gp";
    res.r_star = std::max(h.r_star, hh.r_star);
    io::CsvWriter out(res.csv, {"t", "h", "h_hat"});
    const auto& ta = h.h.t_axis();
    for (std::size_t i = 0; i < ta.size(); ++i) {
        const double t = ta[i];
        const double a = interpolate(h, t, 0.0);
        const double b = interpolate(hh, t, 0.0);
        res.t.push_back(t);
        res.h.push_back(a);
        res.h_hat.push_back(b);
        res.max_gap = std::max(res.max_gap, std::abs(a - b));
        out.row({io::format_double(t), io::format_double(a), io::format_double(b)});
    }
    out.close();
    io::write_text(res.plot,
                   "set datafile separator ','\n"
                   "set terminal pngcairo size 900,500\n"
                   "set output 'fig2.png'\n"
                   "set xlabel 't'\n"
                   "set ylabel 'h(t,0)'\n"
                   "plot 'fig2.csv' using 1:2 skip 1 with lines lw 2 title 'h', \\\n"
                   "     'fig2.csv' using 1:3 skip 1 with lines lw 2 dashtype 2 title 'h estimated'\n");
    return res;
}

namespace {

detail::json manifest_inputs(const ExperimentManifest& m) {
    detail::json j{{"kind", m.kind}, {"params", detail::params_to_json(m.params)}};
    j["seeds"] = detail::json::object();
    for (const auto& [k, v] : m.seeds) j["seeds"][k] = v;
    if (m.solver) j["solver"] = detail::config_to_json(*m.solver);
    j["settings"] = detail::json::object();
    for (const auto& [k, v] : m.settings) j["settings"][k] = v;
    return j;
}

}  // namespace

std::string ExperimentManifest::input_hash() const { return io::content_hash(manifest_inputs(*this).dump()); }

std::string ExperimentManifest::to_json() const {
    detail::json j = manifest_inputs(*this);
    j["outputs"] = outputs;
    j["wall_clock_seconds"] = wall_clock_seconds;
    j["input_hash"] = input_hash();
    return j.dump(2);
}

void ExperimentManifest::write(const std::filesystem::path& path) const { io::write_text(path, to_json() + "\n"); }

void write_strategy_summary(const std::filesystem::path& path, const std::vector<StrategySummaryRow>& rows) {
    io::CsvWriter out(path, {"strategy", "x0", "y0", "paths", "objective_mean", "objective_se"});
    for (const auto& r : rows) {
        out.row({r.strategy, io::format_double(r.x0), io::format_double(r.y0), std::to_string(r.paths),
                 io::format_double(r.objective.mean), io::format_double(r.objective.std_error)});
    }
    out.close();
}

void write_delta_report(const std::filesystem::path& path, const DeltaReport& report, double t0) {
    io::CsvWriter out(path, {"x", "t0", "mode", "epsilon", "epsilon1", "delta", "mc_deviation_mean", "mc_deviation_se"});
    const auto row = [&](const std::string& mode, double delta) {
        out.row({io::format_double(report.x0), io::format_double(t0), mode, io::format_double(report.epsilon),
                 io::format_double(report.epsilon1), io::format_double(delta),
                 io::format_double(report.mean_abs_deviation), io::format_double(report.se_abs_deviation)});
    };
    row("known-mu", report.delta);
    row("unknown-mu", report.delta2);
    out.close();
}

void write_delta_replications(const std::filesystem::path& path, const DeltaReport& report) {
    io::CsvWriter out(path, {"replication", "alpha_hat", "mu_hat", "y_t0", "j_hat", "j_hat_se", "j_star",
                             "abs_deviation", "converged"});
    for (const auto& r : report.rows) {
        out.row({std::to_string(r.replication), io::format_double(r.alpha_hat), io::format_double(r.mu_hat),
                 io::format_double(r.y_t0), io::format_double(r.j_hat), io::format_double(r.j_hat_se),
                 io::format_double(r.j_star), io::format_double(r.abs_deviation), r.converged ? "1" : "0"});
    }
    out.close();
}

}  // namespace ouhjb
