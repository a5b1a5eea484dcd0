#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <iostream>
#include <json.hpp>

#include "ouhjb/bounds.hpp"
#include "ouhjb/config.hpp"
#include "ouhjb/error.hpp"
#include "ouhjb/estimate.hpp"
#include "ouhjb/experiments.hpp"
#include "ouhjb/hjb.hpp"
#include "ouhjb/io.hpp"
#include "ouhjb/parallel.hpp"

namespace ouhjb::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const std::vector<std::pair<std::string, CommandKind>>& command_table() {
    static const std::vector<std::pair<std::string, CommandKind>> table = {
        {"solve", CommandKind::Solve},         {"estimate", CommandKind::Estimate}, {"value", CommandKind::Value},
        {"delta", CommandKind::Delta},         {"fig1", CommandKind::Fig1},         {"fig2", CommandKind::Fig2},
        {"endowment", CommandKind::Endowment},
    };
    return table;
}

const char* describe(CommandKind kind) {
    switch (kind) {
        case CommandKind::Solve: return "solve the HJB fixed point and write h with its diagnostics";
        case CommandKind::Estimate: return "estimate alpha and mu from one simulated path";
        case CommandKind::Value: return "Monte Carlo objective of the optimal and perturbed strategies";
        case CommandKind::Delta: return "replicated plug-in deviation against the error bound";
        case CommandKind::Fig1: return "alpha estimates for T0 = 5 and T0 = 10";
        case CommandKind::Fig2: return "true and estimated h(t, 0) over the horizon";
        case CommandKind::Endowment: return "largest endowment meeting the deviation target";
    }
    return "";
}

struct Context {
    const Command& cmd;
    Config cfg;
    ModelParams params;
    std::ostream& out;
    ExperimentManifest manifest;
};

std::size_t get_count(const Config& cfg, std::string_view key, long long fallback, long long min_value) {
    const long long v = cfg.get_int(key, fallback);
    if (v < min_value) {
        throw ValidationError(std::string(key) + " must be at least " + std::to_string(min_value) + ", got " +
                              std::to_string(v));
    }
    return static_cast<std::size_t>(v);
}

bool get_bool(const Config& cfg, std::string_view key, bool fallback) {
    const auto v = cfg.get(key);
    if (!v) return fallback;
    if (*v == "1" || *v == "true" || *v == "yes") return true;
    if (*v == "0" || *v == "false" || *v == "no") return false;
    throw ValidationError(std::string(key) + ": expected true or false, got '" + *v + "'");
}

std::string rel(const fs::path& p, const fs::path& base) { return p.lexically_relative(base).generic_string(); }

int cmd_solve(Context& c) {
    const SolverConfig sc = c.cfg.solver_config(c.params);
    c.manifest.solver = sc;
    const HjbSolution sol = fixed_point_solve(c.params, sc);
    const fs::path dir = c.cmd.out_dir / "solution";
    save_solution(sol, dir);
    c.manifest.outputs = {rel(dir / "manifest.json", c.cmd.out_dir), rel(dir / "h.csv", c.cmd.out_dir)};
    c.out << "iterations " << sol.iterations << ", rho* " << io::format_double(sol.rho_history.back()) << ", h(t0,"
          << io::format_double(c.params.y0()) << ") = "
          << io::format_double(interpolate(sol, c.params.t0(), c.params.y0())) << "\n";
    sol.require_converged();
    return Success;
}

int cmd_estimate(Context& c) {
    const std::size_t reps = get_count(c.cfg, "run.reps", 1000, 2);
    const double dt = c.cfg.get_double("run.dt", 1e-3);
    const EstimationSummary s = replicate_estimation(c.params, reps, c.cmd.seed, dt);
    const fs::path csv = c.cmd.out_dir / "estimates.csv";
    io::CsvWriter w(csv, {"replication", "alpha_hat", "alpha_raw", "tau_h", "hit", "mu_hat"});
    for (std::size_t i = 0; i < s.reports.size(); ++i) {
        const auto& r = s.reports[i];
        w.row({std::to_string(i), io::format_double(r.alpha_hat), io::format_double(r.alpha_raw),
               r.tau_H ? io::format_double(*r.tau_H) : "nan", r.tau_H ? "1" : "0", io::format_double(r.mu_hat)});
    }
    w.close();
    json j{{"n_reps", s.n_reps},
           {"mean_abs_alpha_error", s.mean_abs_alpha_error},
           {"se_abs_alpha_error", s.se_abs_alpha_error},
           {"mean_abs_mu_error", s.mean_abs_mu_error},
           {"se_abs_mu_error", s.se_abs_mu_error},
           {"mean_alpha_hat", s.mean_alpha_hat},
           {"hit_rate", s.hit_rate},
           {"alpha_hat_quantiles", {s.alpha_hat_q05, s.alpha_hat_q50, s.alpha_hat_q95}},
           {"mu_hat_quantiles", {s.mu_hat_q05, s.mu_hat_q50, s.mu_hat_q95}},
           {"epsilon", s.epsilon_t0},
           {"epsilon1", s.epsilon1_t0},
           {"threshold_H", s.reports.front().H},
           {"y0_note", "epsilon depends on y0 through kappa1; y0 is taken from the config (default 0)"}};
    const fs::path summary = c.cmd.out_dir / "estimate_summary.json";
    io::write_text(summary, j.dump(2) + "\n");
    c.manifest.outputs = {rel(csv, c.cmd.out_dir), rel(summary, c.cmd.out_dir)};
    c.out << "mean |alpha_hat - alpha| " << io::format_double(s.mean_abs_alpha_error) << ", mean |mu_hat - mu| "
          << io::format_double(s.mean_abs_mu_error) << ", hit rate " << io::format_double(s.hit_rate) << "\n";
    return Success;
}

int cmd_value(Context& c) {
    const SolverConfig sc = c.cfg.solver_config(c.params);
    c.manifest.solver = sc;
    const HjbSolution sol = fixed_point_solve(c.params, sc);
    sol.require_converged();
    const double x0 = c.cfg.get_double("run.x0", 1.0);
    const double y0 = c.cfg.get_double("run.y0", c.params.y0());
    const std::size_t paths = get_count(c.cfg, "run.paths", 10000, 100);
    const double dt = c.cfg.get_double("run.dt", 2e-3);
    const Strategy opt = Strategy::optimal(sol);
    std::vector<Strategy> all{opt};
    for (const auto& s : perturbed_strategies(opt)) all.push_back(s);
    const StrategyComparison cmp = compare_strategies(all, c.params, x0, y0, paths, c.cmd.seed, dt);

    std::vector<StrategySummaryRow> rows;
    for (std::size_t k = 0; k < all.size(); ++k) rows.push_back({cmp.names[k], x0, y0, paths, cmp.values[k]});
    const fs::path csv = c.cmd.out_dir / "strategy_summary.csv";
    write_strategy_summary(csv, rows);
    const double closed = value_from_h(sol, x0, y0, c.params.t0());
    json j{{"value_from_h", closed}, {"optimal_mean", cmp.values[0].mean}, {"optimal_se", cmp.values[0].std_error}};
    j["paired"] = json::array();
    for (std::size_t k = 1; k < all.size(); ++k) {
        j["paired"].push_back({{"strategy", cmp.names[k]}, {"diff_mean", cmp.diff_mean[k]}, {"diff_se", cmp.diff_se[k]}});
    }
    const fs::path summary = c.cmd.out_dir / "value_summary.json";
    io::write_text(summary, j.dump(2) + "\n");
    c.manifest.outputs = {rel(csv, c.cmd.out_dir), rel(summary, c.cmd.out_dir)};
    c.out << "x^gamma h = " << io::format_double(closed) << ", MC " << io::format_double(cmp.values[0].mean)
          << " +- " << io::format_double(cmp.values[0].std_error) << "\n";
    return Success;
}

int cmd_delta(Context& c) {
    const SolverConfig sc = c.cfg.solver_config(c.params);
    c.manifest.solver = sc;
    const HjbSolution truth = fixed_point_solve(c.params, sc);
    truth.require_converged();
    DeltaOptions opt;
    opt.inner_paths = get_count(c.cfg, "run.inner_paths", 10000, 100);
    opt.inner_dt = c.cfg.get_double("run.inner_dt", opt.inner_dt);
    opt.obs_dt = c.cfg.get_double("run.dt", opt.obs_dt);
    opt.estimate_mu = get_bool(c.cfg, "run.estimate_mu", false);
    opt.bounds = c.cfg.bounds_options();
    const double x0 = c.cfg.get_double("run.x0", 1.0);
    const std::size_t reps = get_count(c.cfg, "run.reps", 20, 1);
    const DeltaReport rep = delta_pipeline(c.params, truth, x0, reps, c.cmd.seed, opt);

    const fs::path report = c.cmd.out_dir / "delta_report.csv";
    const fs::path table = c.cmd.out_dir / "delta_replications.csv";
    const fs::path ledger = c.cmd.out_dir / "ledger.json";
    write_delta_report(report, rep, c.params.t0());
    write_delta_replications(table, rep);
    io::write_text(ledger, build_ledger(c.params, truth, opt.bounds).to_json() + "\n");
    c.manifest.outputs = {rel(report, c.cmd.out_dir), rel(table, c.cmd.out_dir), rel(ledger, c.cmd.out_dir)};
    c.out << "mean |J_hat - J*| " << io::format_double(rep.mean_abs_deviation) << " (se "
          << io::format_double(rep.se_abs_deviation) << "), delta " << io::format_double(rep.delta) << ", delta2 "
          << io::format_double(rep.delta2) << ", excluded " << rep.excluded << "\n";
    return Success;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> v;
    for (auto item : io::split(text, ',')) v.push_back(io::parse_double(item, "run.t0_list"));
    return v;
}

int cmd_fig1(Context& c) {
    const std::size_t reps = get_count(c.cfg, "run.reps", 30, 2);
    const auto t0s = parse_list(c.cfg.get_string("run.t0_list", "5,10"));
    const Fig1Result r = reproduce_fig1(c.cmd.seed, c.cmd.out_dir, reps, t0s, c.cfg.get_double("run.dt", 1e-3));
    c.manifest.params = fig1_params(t0s.front());
    c.manifest.outputs = {rel(r.csv, c.cmd.out_dir), rel(r.plot, c.cmd.out_dir)};
    c.out << "wrote " << r.csv.generic_string() << "\n";
    return Success;
}

int cmd_fig2(Context& c) {
    const double alpha_hat = c.cfg.get_double("run.alpha_hat", -0.5);
    const Fig2Result r = reproduce_fig2(c.cmd.seed, c.cmd.out_dir, alpha_hat);
    c.manifest.params = ModelParams();
    c.manifest.solver = SolverConfig::for_params(ModelParams());
    c.manifest.outputs = {rel(r.csv, c.cmd.out_dir), rel(r.plot, c.cmd.out_dir)};
    c.out << "wrote " << r.csv.generic_string() << ", max |h - h_hat| at y=0 " << io::format_double(r.max_gap) << "\n";
    return Success;
}

int cmd_endowment(Context& c) {
    const SolverConfig sc = c.cfg.solver_config(c.params);
    c.manifest.solver = sc;
    const HjbSolution truth = fixed_point_solve(c.params, sc);
    truth.require_converged();
    const ConstantsLedger ledger = build_ledger(c.params, truth, c.cfg.bounds_options());
    const double target = c.cfg.get_double("run.delta_target", 0.01);
    const DeltaMode mode = parse_delta_mode(c.cfg.get_string("run.mode", "known-mu"));
    const double x = max_endowment(ledger, target, mode);
    json j{{"delta_target", target}, {"mode", delta_mode_name(mode)}, {"t0", c.params.t0()}, {"max_endowment", x}};
    const fs::path res = c.cmd.out_dir / "endowment.json";
    const fs::path led = c.cmd.out_dir / "ledger.json";
    io::write_text(res, j.dump(2) + "\n");
    io::write_text(led, ledger.to_json() + "\n");
    c.manifest.outputs = {rel(res, c.cmd.out_dir), rel(led, c.cmd.out_dir)};
    c.out << "max endowment " << io::format_double(x) << " for delta " << io::format_double(target) << " ("
          << delta_mode_name(mode) << ")\n";
    return Success;
}

}  // namespace

std::optional<CommandKind> parse_command_kind(const std::string& name) {
    for (const auto& [n, k] : command_table()) {
        if (n == name) return k;
    }
    return std::nullopt;
}

std::string command_name(CommandKind kind) {
    for (const auto& [n, k] : command_table()) {
        if (k == kind) return n;
    }
    return "unknown";
}

int run(const Command& cmd, std::ostream& out, std::ostream& err) {
    const auto started = std::chrono::steady_clock::now();
    try {
        set_thread_count(cmd.threads);
        Config cfg = cmd.config ? Config::load(*cmd.config) : Config{};
        for (const auto& o : cmd.overrides) cfg.apply_override(o);
        const ModelParams params = cfg.model_params();
        fs::create_directories(cmd.out_dir);

        Context c{cmd, cfg, params, out, ExperimentManifest{command_name(cmd.kind), params, {{"seed", cmd.seed}}, {}, {}, {}, 0.0}};
        for (const auto& [k, v] : cfg.values()) c.manifest.settings[k] = v;
        c.manifest.settings["threads"] = std::to_string(cmd.threads);

        int code = Success;
        try {
            switch (cmd.kind) {
                case CommandKind::Solve: code = cmd_solve(c); break;
                case CommandKind::Estimate: code = cmd_estimate(c); break;
                case CommandKind::Value: code = cmd_value(c); break;
                case CommandKind::Delta: code = cmd_delta(c); break;
                case CommandKind::Fig1: code = cmd_fig1(c); break;
                case CommandKind::Fig2: code = cmd_fig2(c); break;
                case CommandKind::Endowment: code = cmd_endowment(c); break;
            }
        } catch (const ConvergenceError& e) {
            err << "error: " << e.what() << "\n";
            code = SolverFailure;
        }
        c.manifest.wall_clock_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        c.manifest.write(cmd.out_dir / "manifest.json");
        return code;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return ValidationFailure;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << "\n";
        return SolverFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return ValidationFailure;
    }
}

int main_entry(int argc, char** argv) {
    CLI::App app{"Optimal consumption-investment under OU-driven volatility"};
    app.require_subcommand(1);
    Command cmd;
    std::string config;
    for (const auto& [name, kind] : command_table()) {
        auto* sub = app.add_subcommand(name, describe(kind));
        sub->add_option("--config", config, "flat key = value config file")->check(CLI::ExistingFile);
        sub->add_option("--out", cmd.out_dir, "output directory");
        sub->add_option("--seed", cmd.seed, "random seed");
        sub->add_option("--set", cmd.overrides, "override key=value (repeatable)")->take_all();
        sub->add_option("--threads", cmd.threads, "worker threads, 0 = auto");
        sub->callback([&cmd, kind = kind] { cmd.kind = kind; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? Success : ValidationFailure;
    }
    if (!config.empty()) cmd.config = config;
    return run(cmd, std::cout, std::cerr);
}

}  // namespace ouhjb::cli
