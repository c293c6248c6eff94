#ifndef PULSEFRONT_EXPERIMENT_HPP
#define PULSEFRONT_EXPERIMENT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pulsefront/front_analysis.hpp"
#include "pulsefront/reaction.hpp"
#include "pulsefront/scalar_kpp.hpp"
#include "pulsefront/system_sim.hpp"
#include "pulsefront/theta.hpp"

namespace pulsefront {

struct SeedSpec {
    double width = 1.0;           // interface width of the initial sigmoid
    double offset_periods = 0.0;  // interface offset from the window center
};

struct ExperimentConfig {
    double period = 1.0;
    LogisticReaction species1;
    LogisticReaction species2;
    std::vector<double> d_values;
    std::vector<double> alpha_values;
    std::vector<double> k_schedule;
    int nodes_per_period = 256;
    int periods = 40;
    double horizon = 40.0;
    double output_dt = 0.05;
    std::vector<SeedSpec> seeds;
    bool d_exis_check = false;
    bool emit_profiles = false;
    HalfLineOptions predictor; // resolution of the analytic predictors
    std::vector<double> snapshot_times;
    int workers = 0; // 0 = library default
    std::string hash; // content digest of the config source

    PeriodicReaction r1() const { return species1.to_reaction(); }
    PeriodicReaction r2() const { return species2.to_reaction(); }
};

/// Parses the JSON experiment file and validates structural invariants
/// (increasing k schedule above the bistability threshold, positive grids).
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

struct FreqAudit {
    double m1 = 0, M1 = 0, m2 = 0, M2 = 0;
    double d_exis = 0.0;             // explicit existence threshold for d
    bool freq_ok = false;            // L < pi (1/sqrt(M1) + sqrt(d/M2))
    double k_bistable = 0.0;         // max{M1/a2, M2/(alpha a1)}
    bool d_ok = true;
    bool k_ok = true;
};

/// Existence audit for a (d, alpha) point: the high-frequency bound on L,
/// the explicit diffusion threshold, and the bistability floor for k.
FreqAudit audit_point(const ExperimentConfig& cfg, double d, double alpha);

struct RunRecord {
    double d = 0.0, alpha = 0.0, k = 0.0;
    int seed = 0;
    SpeedEstimate c_measured;
    SpeedEstimate c_secondary; // the other level's regression
    double seg_index = 0.0;
    double bracket_lo = 0.0, bracket_hi = 0.0;
    std::int64_t clamp_events = 0;
    std::int64_t node_steps = 0;
    std::map<std::string, bool> verdicts;
    std::string artifact_dir;
    std::string error; // non-empty when the simulation failed
    std::string config_hash;
};

struct PointSummary {
    double d = 0.0, alpha = 0.0;
    int seed = 0;
    double c_inf_fit = 0.0;    // intercept of c_k ~ c_inf + b/k
    double fit_b = 0.0;
    double fit_residual = 0.0;
    double fit_stderr = 0.0;
    double seg_slope = 0.0;    // log-log slope of the segregation index in k
    bool seg_monotone = false;
    SignReport prediction;
    std::string measured_sign; // sign of c at the largest k
    bool agreement = true;
    std::string verdict_note;
};

struct SweepResult {
    std::vector<RunRecord> runs;
    std::vector<PointSummary> points;
    bool all_pass = true;
};

/// Full batch: simulate every (d, alpha, k, seed), fit the 1/k extrapolation
/// per point, attach the analytic prediction, and collect verdicts.
/// Individual simulation failures are recorded, not fatal.
SweepResult run_sweep(const ExperimentConfig& cfg, const std::string& out_dir);

/// Prediction-only pass over the (d, alpha) grid; writes prediction.csv.
std::vector<PointSummary> run_predictions(const ExperimentConfig& cfg,
                                          const std::string& out_dir);

/// summary.csv, predictions.csv, verdicts.csv and the SVG plots.
void emit_report(const SweepResult& res, const ExperimentConfig& cfg,
                 const std::string& out_dir);

} // namespace pulsefront

#endif
