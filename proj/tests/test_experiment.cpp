#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pulsefront/errors.hpp"
#include "pulsefront/experiment.hpp"

using namespace pulsefront;

namespace {

// Small but complete sweep: one advancing point, two k values.
const char* kTinyConfig = R"({
  "period": 1.0,
  "reactions": {
    "species1": {"a": 1.0, "mean": 1.0, "fourier_sine": [0.3]},
    "species2": {"a": 1.0, "mean": 1.0, "fourier_cosine": [0.3]}
  },
  "d": 1.0,
  "alpha": 3.0,
  "k_schedule": [25, 50, 100],
  "grid": {"nodes_per_period": 64, "periods": 16},
  "horizon": 24.0,
  "output_dt": 0.05,
  "snapshot_times": [10.0],
  "predictor": {"nodes_per_period": 384, "truncation_periods": 8},
  "workers": 2
})";

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config parsing: fields, defaults, and the content hash") {
    const ExperimentConfig cfg = parse_config(kTinyConfig);
    CHECK(cfg.period == 1.0);
    CHECK(cfg.d_values.size() == 1);
    CHECK(cfg.alpha_values.size() == 1);
    CHECK(cfg.k_schedule.size() == 3);
    CHECK(cfg.nodes_per_period == 64);
    CHECK(cfg.periods == 16);
    CHECK(cfg.seeds.size() == 1); // default seed injected
    CHECK(cfg.hash.size() == 16);
    CHECK(cfg.hash == parse_config(kTinyConfig).hash);

    const PeriodicReaction r1 = cfg.r1();
    CHECK(r1.zero_level == 1.0);
    CHECK(r1.m_min == doctest::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("config validation rejects bad schedules") {
    std::string bad(kTinyConfig);
    bad.replace(bad.find("[25, 50, 100]"), 13, "[50, 50, 100]");
    CHECK_THROWS_AS(parse_config(bad), std::invalid_argument);

    std::string low(kTinyConfig);
    low.replace(low.find("[25, 50, 100]"), 13, "[0.5, 50, 100]");
    CHECK_THROWS_AS(parse_config(low), std::invalid_argument);
}

TEST_CASE("existence audit: frequency bound and explicit thresholds") {
    ExperimentConfig cfg = parse_config(kTinyConfig);
    FreqAudit a = audit_point(cfg, 1.0, 3.0);
    // L = 1, M1 = 1.3: L sqrt(M1) < pi, so no diffusion floor.
    CHECK(a.d_exis == 0.0);
    CHECK(a.d_ok);
    CHECK(a.freq_ok);
    CHECK(a.k_bistable == doctest::Approx(1.3).epsilon(1e-9));
    CHECK(a.k_ok);

    // Long period: the explicit floor activates.
    cfg.period = 4.0;
    cfg.species1.mu.period = 4.0;
    cfg.species2.mu.period = 4.0;
    a = audit_point(cfg, 0.05, 1.0);
    const double M1 = 1.3, M2 = 1.3;
    const double expect = M2 * std::pow(4.0 / M_PI - 1.0 / std::sqrt(M1), 2.0);
    CHECK(a.d_exis == doctest::Approx(expect).epsilon(1e-12));
    CHECK_FALSE(a.d_ok);
}

TEST_CASE("prediction-only pass writes the full table") {
    const ExperimentConfig cfg = parse_config(kTinyConfig);
    const std::string out = "test_out_predict";
    std::filesystem::remove_all(out);
    const auto points = run_predictions(cfg, out);
    REQUIRE(points.size() == 1);
    // alpha^2/d = 9 with near-unit rates: solidly positive prediction.
    CHECK(points[0].prediction.predicted == SignPrediction::positive);
    CHECK(points[0].prediction.integral > 0.0);

    const std::string table = slurp(out + "/prediction.csv");
    CHECK(table.find("d,alpha,ratio,r_lo,r0_min,r0_max,r_hi,integral,predicted") !=
          std::string::npos);
    CHECK(table.find("positive") != std::string::npos);
    std::filesystem::remove_all(out);
}

TEST_CASE("sweep: records, fit, agreement, and deterministic reruns") {
    const ExperimentConfig cfg = parse_config(kTinyConfig);

    const std::string out1 = "test_out_sweep1";
    const std::string out2 = "test_out_sweep2";
    std::filesystem::remove_all(out1);
    std::filesystem::remove_all(out2);

    const SweepResult res = run_sweep(cfg, out1);
    REQUIRE(res.runs.size() == 3);
    REQUIRE(res.points.size() == 1);

    for (const auto& r : res.runs) {
        CHECK(r.error.empty());
        CHECK(r.c_measured.c > r.bracket_lo);
        CHECK(r.c_measured.c < r.bracket_hi);
        CHECK(r.verdicts.at("bracket"));
        CHECK(r.verdicts.at("box"));
        CHECK(r.config_hash == cfg.hash);
    }
    // Strong competition segregates: the index decreases along the schedule.
    CHECK(res.runs[0].seg_index > res.runs[1].seg_index);
    CHECK(res.runs[1].seg_index > res.runs[2].seg_index);

    const PointSummary& p = res.points[0];
    CHECK(p.prediction.predicted == SignPrediction::positive);
    CHECK(p.measured_sign == "positive");
    CHECK(p.agreement);
    CHECK(res.all_pass);

    // Artifacts exist.
    CHECK(std::filesystem::exists(out1 + "/summary.csv"));
    CHECK(std::filesystem::exists(out1 + "/predictions.csv"));
    CHECK(std::filesystem::exists(out1 + "/verdicts.csv"));
    CHECK(std::filesystem::exists(out1 + "/phase_diagram.svg"));
    bool found_report = false;
    bool found_snap = false;
    for (const auto& e : std::filesystem::recursive_directory_iterator(out1)) {
        if (e.path().filename() == "front_report.json") found_report = true;
        if (e.path().filename() == "snap_t10.csv") found_snap = true;
    }
    CHECK(found_report);
    CHECK(found_snap);

    // Byte-identical rerun.
    run_sweep(cfg, out2);
    for (const char* f : {"summary.csv", "predictions.csv", "verdicts.csv"}) {
        CHECK(slurp(out1 + "/" + f) == slurp(out2 + "/" + f));
    }
    std::filesystem::remove_all(out1);
    std::filesystem::remove_all(out2);
}
