#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ouhjb/bounds.hpp"
#include "ouhjb/estimate.hpp"
#include "ouhjb/hjb.hpp"
#include "ouhjb/model.hpp"
#include "ouhjb/strategy.hpp"

namespace ouhjb {

/// Monte Carlo estimate of the objective of `strategy` on [t_start, horizon]
/// started at (x0, y0) under the market `params`. Path i uses stream i of
/// `seed`. t_start defaults to params.t0(); t_start == horizon gives x0^gamma
/// with zero error.
McEstimate mc_value(const Strategy& strategy, const ModelParams& params, double x0, double y0, std::size_t n_paths,
                    std::uint64_t seed, double dt = 1e-3, std::optional<double> t_start = std::nullopt);

struct StrategyComparison {
    std::vector<std::string> names;
    std::vector<McEstimate> values;
    std::vector<double> diff_mean;  ///< E[J(first) - J(k)]
    std::vector<double> diff_se;    ///< paired standard error of the difference
};

/// Evaluates every strategy on the same simulated paths.
StrategyComparison compare_strategies(const std::vector<Strategy>& strategies, const ModelParams& params, double x0,
                                      double y0, std::size_t n_paths, std::uint64_t seed, double dt = 1e-3);

/// (pi* x 1.2), (pi* x 0.8), (c* x 1.2), (c* x 0.8), (c* x 0.5).
std::vector<Strategy> perturbed_strategies(const Strategy& optimal);

struct DeltaOptions {
    std::size_t inner_paths = 10000;
    double inner_dt = 2e-3;
    double obs_dt = 1e-3;
    bool estimate_mu = false;           ///< use mu_hat (projected onto [mu_lo, mu_hi]) as well
    std::optional<double> force_alpha;  ///< replace alpha_hat, e.g. by the true alpha
    BoundsOptions bounds;
};

struct DeltaReplication {
    std::size_t replication = 0;
    double alpha_hat = 0.0;
    double mu_hat = 0.0;  ///< value used for the estimated solve
    double y_t0 = 0.0;
    double j_hat = 0.0;
    double j_hat_se = 0.0;
    double j_star = 0.0;
    double abs_deviation = 0.0;
    bool converged = true;
};

struct DeltaReport {
    double x0 = 0.0;
    std::vector<DeltaReplication> rows;
    std::size_t excluded = 0;
    double mean_abs_deviation = 0.0;
    double se_abs_deviation = 0.0;
    double mean_inner_se = 0.0;
    double delta = 0.0;   ///< known-mu bound at x0
    double delta2 = 0.0;  ///< unknown-mu bound at x0
    double epsilon = 0.0;
    double epsilon1 = 0.0;
};

/// Per replication: observe [0, t0] under zero investment, estimate, solve
/// under the estimates, evaluate the estimated strategy by nested MC from the
/// observed Y_{t0}, compare with x0^gamma h(t0, Y_{t0}) from `truth`.
DeltaReport delta_pipeline(const ModelParams& params, const HjbSolution& truth, double x0, std::size_t n_reps,
                           std::uint64_t seed, const DeltaOptions& options = {});

/// Parameters of the estimation figure: alpha = -5, beta = 1, bounds
/// [-10, -0.15], horizon t0 + 1.
ModelParams fig1_params(double t0);

struct Fig1Result {
    std::filesystem::path csv;
    std::filesystem::path plot;
    std::vector<double> t0_values;
    std::vector<std::vector<EstimationReport>> reports;  ///< per t0
};

/// Writes fig1.csv (t0,replication,alpha_hat,tau_h,hit) and fig1.gp.
Fig1Result reproduce_fig1(std::uint64_t seed, const std::filesystem::path& out_dir, std::size_t n_reps = 30,
                          const std::vector<double>& t0_values = {5.0, 10.0}, double dt = 1e-3);

struct Fig2Result {
    std::filesystem::path csv;
    std::filesystem::path plot;
    std::vector<double> t;
    std::vector<double> h;
    std::vector<double> h_hat;
    double r_star = 0.0;
    double max_gap = 0.0;
};

/// Solves under alpha = -5 and alpha_hat = -0.5 and writes fig2.csv (t,h,h_hat
/// at y = 0) and fig2.gp.
Fig2Result reproduce_fig2(std::uint64_t seed, const std::filesystem::path& out_dir, double alpha_hat = -0.5);

struct ExperimentManifest {
    std::string kind;
    ModelParams params;
    std::map<std::string, std::uint64_t> seeds;
    std::optional<SolverConfig> solver;
    std::map<std::string, std::string> settings;
    std::vector<std::string> outputs;
    double wall_clock_seconds = 0.0;

    /// Hash of everything that determines the numeric outputs.
    std::string input_hash() const;
    std::string to_json() const;
    void write(const std::filesystem::path& path) const;
};

struct StrategySummaryRow {
    std::string strategy;
    double x0 = 0.0;
    double y0 = 0.0;
    std::size_t paths = 0;
    McEstimate objective;
};

/// strategy,x0,y0,paths,objective_mean,objective_se
void write_strategy_summary(const std::filesystem::path& path, const std::vector<StrategySummaryRow>& rows);

/// x,t0,mode,epsilon,epsilon1,delta,mc_deviation_mean,mc_deviation_se
void write_delta_report(const std::filesystem::path& path, const DeltaReport& report, double t0);

/// Also writes the per-replication table next to the summary.
void write_delta_replications(const std::filesystem::path& path, const DeltaReport& report);

}  // namespace ouhjb
