#include "pulsefront/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "pulsefront/errors.hpp"
#include "pulsefront/numerics.hpp"
#include "pulsefront/report.hpp"

namespace pulsefront {

using nlohmann::json;

namespace {

LogisticReaction parse_species(const json& j, double period) {
    LogisticReaction r;
    r.a = j.value("a", 1.0);
    r.mu.mean = j.value("mean", 1.0);
    r.mu.period = period;
    if (j.contains("fourier_cosine"))
        r.mu.cosine = j.at("fourier_cosine").get<std::vector<double>>();
    if (j.contains("fourier_sine"))
        r.mu.sine = j.at("fourier_sine").get<std::vector<double>>();
    return r;
}

std::vector<double> parse_scalar_or_list(const json& j) {
    if (j.is_number()) return {j.get<double>()};
    return j.get<std::vector<double>>();
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j = json::parse(text);
    ExperimentConfig cfg;
    cfg.hash = hex64(fnv1a64(text));
    cfg.period = j.value("period", 1.0);
    cfg.species1 = parse_species(j.at("reactions").at("species1"), cfg.period);
    cfg.species2 = parse_species(j.at("reactions").at("species2"), cfg.period);
    cfg.d_values = parse_scalar_or_list(j.at("d"));
    cfg.alpha_values = parse_scalar_or_list(j.at("alpha"));
    cfg.k_schedule = j.at("k_schedule").get<std::vector<double>>();
    if (j.contains("grid")) {
        cfg.nodes_per_period = j.at("grid").value("nodes_per_period", 256);
        cfg.periods = j.at("grid").value("periods", 40);
    }
    cfg.horizon = j.value("horizon", 40.0);
    cfg.output_dt = j.value("output_dt", 0.05);
    cfg.d_exis_check = j.value("d_exis_check", false);
    cfg.emit_profiles = j.value("emit_profiles", false);
    if (j.contains("predictor")) {
        cfg.predictor.nodes_per_period =
            j.at("predictor").value("nodes_per_period", cfg.predictor.nodes_per_period);
        cfg.predictor.truncation_periods =
            j.at("predictor").value("truncation_periods", cfg.predictor.truncation_periods);
    }
    cfg.workers = j.value("workers", 0);
    if (j.contains("snapshot_times")) {
        cfg.snapshot_times = j.at("snapshot_times").get<std::vector<double>>();
        std::sort(cfg.snapshot_times.begin(), cfg.snapshot_times.end());
    }
    if (j.contains("seeds")) {
        for (const auto& s : j.at("seeds")) {
            SeedSpec spec;
            spec.width = s.value("width", 1.0);
            spec.offset_periods = s.value("offset_periods", 0.0);
            cfg.seeds.push_back(spec);
        }
    }
    if (cfg.seeds.empty()) cfg.seeds.push_back(SeedSpec{});

    if (cfg.k_schedule.empty()) throw std::invalid_argument("k_schedule is empty");
    for (std::size_t i = 1; i < cfg.k_schedule.size(); ++i) {
        if (cfg.k_schedule[i] <= cfg.k_schedule[i - 1])
            throw std::invalid_argument("k_schedule must be strictly increasing");
    }
    for (double d : cfg.d_values)
        if (d <= 0) throw std::invalid_argument("d must be positive");
    for (double a : cfg.alpha_values)
        if (a <= 0) throw std::invalid_argument("alpha must be positive");

    // Bistability floor: every k must clear it at every grid alpha.
    for (double alpha : cfg.alpha_values) {
        const FreqAudit audit = audit_point(cfg, cfg.d_values.front(), alpha);
        if (cfg.k_schedule.front() <= audit.k_bistable)
            throw std::invalid_argument(
                "k_schedule enters the non-bistable range: k <= " +
                std::to_string(audit.k_bistable) + " at alpha = " + std::to_string(alpha));
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

FreqAudit audit_point(const ExperimentConfig& cfg, double d, double alpha) {
    FreqAudit a;
    const PeriodicReaction r1 = cfg.r1();
    const PeriodicReaction r2 = cfg.r2();
    a.m1 = r1.m_min;
    a.M1 = r1.m_max;
    a.m2 = r2.m_min;
    a.M2 = r2.m_max;
    const double L = cfg.period;
    a.freq_ok = L < M_PI * (1.0 / std::sqrt(a.M1) + std::sqrt(d / a.M2));
    a.d_exis = L * std::sqrt(a.M1) > M_PI
                   ? a.M2 * std::pow(L / M_PI - 1.0 / std::sqrt(a.M1), 2.0)
                   : 0.0;
    a.d_ok = d > a.d_exis;
    a.k_bistable = std::max(a.M1 / r2.zero_level, a.M2 / (alpha * r1.zero_level));
    a.k_ok = cfg.k_schedule.front() > a.k_bistable;
    return a;
}

namespace {

struct RunTask {
    double d, alpha, k;
    int seed;
    std::size_t index;
};

void write_front_report(const RunRecord& rec, const std::string& dir) {
    json j;
    j["d"] = rec.d;
    j["alpha"] = rec.alpha;
    j["k"] = rec.k;
    j["seed"] = rec.seed;
    j["config_hash"] = rec.config_hash;
    j["speed"] = {{"c", rec.c_measured.c},
                  {"stderr", rec.c_measured.stderr_c},
                  {"window_begin", rec.c_measured.window.first},
                  {"window_end", rec.c_measured.window.second},
                  {"crossings_used", rec.c_measured.crossings_used},
                  {"ambiguous", rec.c_measured.ambiguous}};
    j["secondary_speed"] = {{"c", rec.c_secondary.c},
                            {"stderr", rec.c_secondary.stderr_c}};
    j["segregation_index"] = rec.seg_index;
    j["speed_bracket"] = {rec.bracket_lo, rec.bracket_hi};
    j["clamp_events"] = rec.clamp_events;
    j["node_steps"] = rec.node_steps;
    json verdicts = json::object();
    for (const auto& [name, ok] : rec.verdicts) verdicts[name] = ok;
    j["verdicts"] = verdicts;
    if (!rec.error.empty()) j["error"] = rec.error;
    std::ofstream out(dir + "/front_report.json");
    if (!out) throw IoError("cannot write front_report.json in " + dir);
    out << j.dump(2) << "\n";
}

void write_speed_series(const std::vector<CrossingSample>& log, const std::string& dir) {
    std::ofstream out(dir + "/speed_series.csv");
    if (!out) throw IoError("cannot write speed_series.csv in " + dir);
    out << "t,x1,x2,seg_index\n";
    for (const auto& c : log)
        out << fmt_num(c.t) << "," << fmt_num(c.x1) << "," << fmt_num(c.x2) << ","
            << fmt_num(c.seg_index) << "\n";
}

void write_xi_trace(const FreeBoundaryTrace& tr, const std::string& dir) {
    std::ofstream out(dir + "/xi.csv");
    if (!out) throw IoError("cannot write xi.csv in " + dir);
    out << "t,xi,flux_left,flux_right\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i)
        out << fmt_num(tr.times[i]) << "," << fmt_num(tr.xi_of_t[i]) << ","
            << fmt_num(tr.flux_left[i]) << "," << fmt_num(tr.flux_right[i]) << "\n";
}

void write_profile_grid(const ProfileSamples& prof, const std::string& dir) {
    std::ofstream out(dir + "/profile.csv");
    if (!out) throw IoError("cannot write profile.csv in " + dir);
    out << "xi,x,phi1,phi2\n";
    for (std::size_t i = 0; i < prof.xi_grid.size(); ++i)
        for (std::size_t j = 0; j < prof.x_grid.size(); ++j)
            out << fmt_num(prof.xi_grid[i]) << "," << fmt_num(prof.x_grid[j]) << ","
                << fmt_num(prof.get1(static_cast<int>(i), static_cast<int>(j))) << ","
                << fmt_num(prof.get2(static_cast<int>(i), static_cast<int>(j))) << "\n";
}

std::string run_dir_name(const RunTask& t) {
    std::ostringstream ss;
    ss << "d" << fmt_num(t.d) << "_a" << fmt_num(t.alpha) << "_k" << fmt_num(t.k)
       << "_s" << t.seed;
    return ss.str();
}

std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n') c = ';';
    return s;
}

std::string sign_of(double c) {
    if (c > kSpeedFloor) return "positive";
    if (c < -kSpeedFloor) return "negative";
    return "zero";
}

RunRecord simulate_one(const ExperimentConfig& cfg, const RunTask& task,
                       double bracket_lo, double bracket_hi,
                       const std::string& out_dir, bool want_fb) {
    RunRecord rec;
    rec.d = task.d;
    rec.alpha = task.alpha;
    rec.k = task.k;
    rec.seed = task.seed;
    rec.bracket_lo = bracket_lo;
    rec.bracket_hi = bracket_hi;
    rec.config_hash = cfg.hash;

    const Grid1D grid = Grid1D::make(cfg.period, cfg.nodes_per_period, cfg.periods);
    SystemParams params;
    params.d = task.d;
    params.alpha = task.alpha;
    params.k = task.k;
    params.r1 = cfg.r1();
    params.r2 = cfg.r2();

    const SeedSpec& seed = cfg.seeds[task.seed];
    const double center = grid.x0 + 0.5 * grid.length() +
                          seed.offset_periods * cfg.period;

    const std::string dir = out_dir + "/runs/" + run_dir_name(task);
    ensure_dir(dir);
    rec.artifact_dir = dir;

    auto attempt = [&](double horizon) {
        SystemState st = initial_front(grid, params.a1(), params.a2(), center, seed.width);
        FrontProbe probe;
        probe.output_dt = cfg.output_dt;
        probe.dump_times = cfg.snapshot_times;
        probe.dump_dir = dir;
        if (want_fb) {
            probe.snapshot_start = horizon * 0.75;
            probe.snapshot_dt = cfg.output_dt;
        }
        return run_until_front(std::move(st), params, grid, horizon, probe);
    };

    RunResult run = attempt(cfg.horizon);
    SpeedRegressOptions ropts;
    ropts.period = cfg.period;
    FrontSpeed speed = estimate_front_speed(run.crossings, ropts);
    if (speed.used.ambiguous) {
        // Rerun once at doubled horizon as the case-split rule requires.
        run = attempt(2.0 * cfg.horizon);
        speed = estimate_front_speed(run.crossings, ropts);
    }

    rec.c_measured = speed.used;
    rec.c_secondary = speed.other;
    rec.seg_index = run.crossings.back().seg_index;
    rec.clamp_events = run.state.clamp_events;
    rec.node_steps = run.steps * static_cast<std::int64_t>(grid.n);
    write_speed_series(run.crossings, dir);

    rec.verdicts["bracket"] = rec.c_measured.c > bracket_lo && rec.c_measured.c < bracket_hi;
    rec.verdicts["levels_agree"] = speed.levels_agree;
    rec.verdicts["box"] =
        rec.clamp_events < static_cast<std::int64_t>(0.001 * rec.node_steps);

    if (want_fb && std::abs(rec.c_measured.c) > kSpeedFloor && !run.snapshots.empty()) {
        try {
            const FreeBoundaryTrace tr =
                extract_free_boundary(run.snapshots, grid, params, rec.c_measured.c);
            write_xi_trace(tr, dir);
            const FreeBoundaryDiagnostics diag = free_boundary_diagnostics(tr, cfg.period);
            rec.verdicts["fb_monotone"] = diag.monotonicity_violation <= grid.dx;
            rec.verdicts["fb_flux_negative"] = diag.max_flux < 0.0;
            if (cfg.emit_profiles) {
                ProfileSamples prof = reconstruct_profile(
                    run.snapshots, grid, rec.c_measured.c, params.a1(), params.a2(),
                    6.0 * cfg.period);
                normalize(prof, rec.c_measured.c > 0 ? 1 : -1);
                write_profile_grid(prof, dir);
            }
        } catch (const Error& e) {
            rec.verdicts["fb_extracted"] = false;
        }
    }
    return rec;
}

} // namespace

std::vector<PointSummary> run_predictions(const ExperimentConfig& cfg,
                                          const std::string& out_dir) {
    ensure_dir(out_dir);
    const PeriodicReaction r1 = cfg.r1();
    const PeriodicReaction r2 = cfg.r2();

    std::vector<PointSummary> points;
    for (double d : cfg.d_values) {
        for (double alpha : cfg.alpha_values) {
            PointSummary p;
            p.d = d;
            p.alpha = alpha;
            p.prediction = predict_sign(d, alpha, r1, r2, cfg.predictor);
            points.push_back(p);
        }
    }

    std::ofstream out(out_dir + "/prediction.csv");
    if (!out) throw IoError("cannot write prediction.csv");
    out << "d,alpha,ratio,r_lo,r0_min,r0_max,r_hi,integral,predicted\n";
    for (const auto& p : points) {
        out << fmt_num(p.d) << "," << fmt_num(p.alpha) << ","
            << fmt_num(p.prediction.ratio) << "," << fmt_num(p.prediction.r_lo) << ","
            << fmt_num(p.prediction.r0.lo) << "," << fmt_num(p.prediction.r0.hi) << ","
            << fmt_num(p.prediction.r_hi) << "," << fmt_num(p.prediction.integral)
            << "," << to_string(p.prediction.predicted) << "\n";
    }
    return points;
}

SweepResult run_sweep(const ExperimentConfig& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    ensure_dir(out_dir + "/runs");
    SweepResult res;

    const PeriodicReaction r1 = cfg.r1();
    const PeriodicReaction r2 = cfg.r2();

    // Hypotheses must hold before any dynamics run.
    const ValidationReport v1 = validate_hypotheses(r1);
    const ValidationReport v2 = validate_hypotheses(r2);
    if (!v1.all_pass() || !v2.all_pass())
        throw MalformedReactionError("reaction hypotheses failed validation");

    if (cfg.d_exis_check) {
        for (double d : cfg.d_values) {
            for (double alpha : cfg.alpha_values) {
                const FreqAudit a = audit_point(cfg, d, alpha);
                if (!a.d_ok)
                    throw std::invalid_argument(
                        "d = " + std::to_string(d) +
                        " does not exceed the existence threshold " +
                        std::to_string(a.d_exis));
            }
        }
    }

    // Analytic predictions, one per (d, alpha); the speed bracket once per d.
    std::map<double, std::pair<double, double>> brackets;
    for (double d : cfg.d_values) brackets[d] = speed_bracket(d, r1, r2);

    std::map<std::pair<double, double>, SignReport> predictions;
    for (double d : cfg.d_values)
        for (double alpha : cfg.alpha_values)
            predictions[{d, alpha}] = predict_sign(d, alpha, r1, r2, cfg.predictor);

    // Flatten the run list; the largest k carries the free-boundary probes.
    std::vector<RunTask> tasks;
    for (double d : cfg.d_values)
        for (double alpha : cfg.alpha_values)
            for (double k : cfg.k_schedule)
                for (int s = 0; s < static_cast<int>(cfg.seeds.size()); ++s)
                    tasks.push_back({d, alpha, k, s, tasks.size()});

    res.runs.resize(tasks.size());
    const double k_max = cfg.k_schedule.back();

#ifdef _OPENMP
    const int workers = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
#else
    const int workers = 1;
#endif

#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const RunTask& t = tasks[i];
        const auto [blo, bhi] = brackets.at(t.d);
        try {
            res.runs[i] =
                simulate_one(cfg, t, blo, bhi, out_dir, t.k == k_max);
        } catch (const std::exception& e) {
            RunRecord rec;
            rec.d = t.d;
            rec.alpha = t.alpha;
            rec.k = t.k;
            rec.seed = t.seed;
            rec.config_hash = cfg.hash;
            rec.error = e.what();
            res.runs[i] = rec;
        }
    }

    for (auto& rec : res.runs) {
        if (rec.error.empty()) write_front_report(rec, rec.artifact_dir);
    }

    // Per-(d, alpha, seed) summaries: 1/k extrapolation and verdicts.
    for (double d : cfg.d_values) {
        for (double alpha : cfg.alpha_values) {
            for (int s = 0; s < static_cast<int>(cfg.seeds.size()); ++s) {
                PointSummary p;
                p.d = d;
                p.alpha = alpha;
                p.seed = s;
                p.prediction = predictions.at({d, alpha});

                std::vector<double> inv_k, c_k, log_k, log_seg;
                bool any_error = false;
                double c_at_kmax = 0.0;
                bool seg_monotone = true;
                double prev_seg = 1e300;
                for (double k : cfg.k_schedule) {
                    const RunRecord* rec = nullptr;
                    for (const auto& r : res.runs)
                        if (r.d == d && r.alpha == alpha && r.k == k && r.seed == s)
                            rec = &r;
                    if (!rec || !rec->error.empty()) {
                        any_error = true;
                        continue;
                    }
                    inv_k.push_back(1.0 / k);
                    c_k.push_back(rec->c_measured.c);
                    log_k.push_back(std::log(k));
                    log_seg.push_back(std::log(std::max(rec->seg_index, 1e-300)));
                    if (k == k_max) c_at_kmax = rec->c_measured.c;
                    if (rec->seg_index >= prev_seg) seg_monotone = false;
                    prev_seg = rec->seg_index;
                }
                if (inv_k.size() >= 3) {
                    const LineFit fit = fit_line(inv_k, c_k);
                    p.c_inf_fit = fit.intercept;
                    p.fit_b = fit.slope;
                    p.fit_residual = fit.rms_residual;
                    p.fit_stderr = fit.slope_stderr;
                    const LineFit seg_fit = fit_line(log_k, log_seg);
                    p.seg_slope = seg_fit.slope;
                }
                p.seg_monotone = seg_monotone && !any_error;
                p.measured_sign = sign_of(c_at_kmax);

                switch (p.prediction.predicted) {
                    case SignPrediction::positive:
                        p.agreement = c_at_kmax > 0.0;
                        break;
                    case SignPrediction::negative:
                        p.agreement = c_at_kmax < 0.0;
                        break;
                    case SignPrediction::zero_interval:
                        p.agreement = std::abs(p.c_inf_fit) <=
                                      std::max(3.0 * kSpeedFloor, 2.0 * p.fit_stderr);
                        break;
                    case SignPrediction::boundary_ambiguous:
                        p.agreement = true; // no sign asserted at the boundary
                        break;
                }
                if (any_error) {
                    p.agreement = false;
                    p.verdict_note = "simulation errors in the k schedule";
                }
                res.points.push_back(p);
            }
        }
    }

    // Stable ordering for emission.
    std::sort(res.runs.begin(), res.runs.end(), [](const RunRecord& a, const RunRecord& b) {
        return std::tie(a.d, a.alpha, a.k, a.seed) < std::tie(b.d, b.alpha, b.k, b.seed);
    });
    std::sort(res.points.begin(), res.points.end(),
              [](const PointSummary& a, const PointSummary& b) {
                  return std::tie(a.d, a.alpha, a.seed) < std::tie(b.d, b.alpha, b.seed);
              });

    for (const auto& r : res.runs) {
        if (!r.error.empty()) res.all_pass = false;
        for (const auto& [name, ok] : r.verdicts)
            if (!ok) res.all_pass = false;
    }
    for (const auto& p : res.points)
        if (!p.agreement || !p.seg_monotone) res.all_pass = false;

    emit_report(res, cfg, out_dir);
    return res;
}

void emit_report(const SweepResult& res, const ExperimentConfig& cfg,
                 const std::string& out_dir) {
    ensure_dir(out_dir);
    {
        std::ofstream out(out_dir + "/summary.csv");
        if (!out) throw IoError("cannot write summary.csv");
        out << "config_hash,d,alpha,k,seed,c,c_stderr,crossings,seg_index,"
               "bracket_lo,bracket_hi,clamp_events,error\n";
        for (const auto& r : res.runs) {
            out << r.config_hash << "," << fmt_num(r.d) << "," << fmt_num(r.alpha) << ","
                << fmt_num(r.k) << "," << r.seed << "," << fmt_num(r.c_measured.c) << ","
                << fmt_num(r.c_measured.stderr_c) << "," << r.c_measured.crossings_used
                << "," << fmt_num(r.seg_index) << "," << fmt_num(r.bracket_lo) << ","
                << fmt_num(r.bracket_hi) << "," << r.clamp_events << ","
                << csv_safe(r.error) << "\n";
        }
    }
    {
        std::ofstream out(out_dir + "/predictions.csv");
        if (!out) throw IoError("cannot write predictions.csv");
        out << "config_hash,d,alpha,seed,ratio,r_lo,r0_min,r0_max,r_hi,integral,"
               "predicted,c_inf_fit,fit_b,fit_residual,measured_sign,agreement\n";
        for (const auto& p : res.points) {
            out << cfg.hash << "," << fmt_num(p.d) << "," << fmt_num(p.alpha) << ","
                << p.seed << "," << fmt_num(p.prediction.ratio) << ","
                << fmt_num(p.prediction.r_lo) << "," << fmt_num(p.prediction.r0.lo)
                << "," << fmt_num(p.prediction.r0.hi) << ","
                << fmt_num(p.prediction.r_hi) << "," << fmt_num(p.prediction.integral)
                << "," << to_string(p.prediction.predicted) << ","
                << fmt_num(p.c_inf_fit) << "," << fmt_num(p.fit_b) << ","
                << fmt_num(p.fit_residual) << "," << p.measured_sign << ","
                << (p.agreement ? "pass" : "fail") << "\n";
        }
    }
    {
        std::ofstream out(out_dir + "/verdicts.csv");
        if (!out) throw IoError("cannot write verdicts.csv");
        out << "config_hash,d,alpha,k,seed,check,pass\n";
        for (const auto& r : res.runs) {
            for (const auto& [name, ok] : r.verdicts)
                out << r.config_hash << "," << fmt_num(r.d) << "," << fmt_num(r.alpha)
                    << "," << fmt_num(r.k) << "," << r.seed << "," << name << ","
                    << (ok ? "pass" : "fail") << "\n";
            if (!r.error.empty())
                out << r.config_hash << "," << fmt_num(r.d) << "," << fmt_num(r.alpha)
                    << "," << fmt_num(r.k) << "," << r.seed << ",completed,fail\n";
        }
        for (const auto& p : res.points) {
            out << cfg.hash << "," << fmt_num(p.d) << "," << fmt_num(p.alpha) << ",,"
                << p.seed << ",sign_agreement," << (p.agreement ? "pass" : "fail")
                << "\n";
            out << cfg.hash << "," << fmt_num(p.d) << "," << fmt_num(p.alpha) << ",,"
                << p.seed << ",seg_monotone," << (p.seg_monotone ? "pass" : "fail")
                << "\n";
        }
    }

    // c_k vs 1/k, one plot per (d, alpha).
    for (const auto& p : res.points) {
        if (p.seed != 0) continue;
        SvgSeries meas;
        meas.points_only = true;
        meas.label = "measured c_k";
        for (const auto& r : res.runs) {
            if (r.d == p.d && r.alpha == p.alpha && r.seed == 0 && r.error.empty()) {
                meas.x.push_back(1.0 / r.k);
                meas.y.push_back(r.c_measured.c);
            }
        }
        if (meas.x.empty()) continue;
        SvgSeries fitline;
        fitline.label = "fit c_inf + b/k";
        fitline.color = "#d62728";
        for (int i = 0; i <= 32; ++i) {
            const double ik = *std::max_element(meas.x.begin(), meas.x.end()) * i / 32.0;
            fitline.x.push_back(ik);
            fitline.y.push_back(p.c_inf_fit + p.fit_b * ik);
        }
        std::ostringstream name;
        name << out_dir << "/speed_fit_d" << fmt_num(p.d) << "_a" << fmt_num(p.alpha)
             << ".svg";
        write_svg_plot(name.str(), "speed vs 1/k", "1/k", "c_k", {meas, fitline});
    }

    // Phase diagram over the (d, alpha) grid with the analytic margins.
    {
        SvgSeries pos, neg, zero;
        pos.points_only = neg.points_only = zero.points_only = true;
        pos.color = "#2ca02c";
        pos.label = "measured positive";
        neg.color = "#d62728";
        neg.label = "measured negative";
        zero.color = "#7f7f7f";
        zero.label = "measured zero";
        double r_lo = 0.0, r_hi = 0.0;
        for (const auto& p : res.points) {
            if (p.seed != 0) continue;
            r_lo = p.prediction.r_lo;
            r_hi = p.prediction.r_hi;
            SvgSeries* target = &zero;
            if (p.measured_sign == "positive") target = &pos;
            if (p.measured_sign == "negative") target = &neg;
            target->x.push_back(p.d);
            target->y.push_back(p.alpha);
        }
        SvgSeries lo_curve, hi_curve;
        lo_curve.color = "#9467bd";
        lo_curve.label = "alpha^2 = d r_lo";
        hi_curve.color = "#8c564b";
        hi_curve.label = "alpha^2 = d r_hi";
        const double dmax = *std::max_element(cfg.d_values.begin(), cfg.d_values.end());
        for (int i = 1; i <= 64; ++i) {
            const double d = dmax * i / 64.0;
            lo_curve.x.push_back(d);
            lo_curve.y.push_back(std::sqrt(d * r_lo));
            hi_curve.x.push_back(d);
            hi_curve.y.push_back(std::sqrt(d * r_hi));
        }
        write_svg_plot(out_dir + "/phase_diagram.svg", "sign of the limiting speed",
                       "d", "alpha", {pos, neg, zero, lo_curve, hi_curve});
    }

    // Interface traces for the largest-k runs that produced one.
    {
        std::vector<SvgSeries> traces;
        const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
        int idx = 0;
        for (const auto& r : res.runs) {
            if (r.seed != 0 || !r.error.empty()) continue;
            std::ifstream xi(r.artifact_dir + "/xi.csv");
            if (!xi) continue;
            SvgSeries s;
            s.color = palette[idx % 8];
            std::ostringstream lbl;
            lbl << "d=" << fmt_num(r.d) << " a=" << fmt_num(r.alpha);
            s.label = lbl.str();
            std::string line;
            std::getline(xi, line); // header
            while (std::getline(xi, line)) {
                const auto c1 = line.find(',');
                const auto c2 = line.find(',', c1 + 1);
                s.x.push_back(std::stod(line.substr(0, c1)));
                s.y.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
            }
            if (!s.x.empty()) {
                traces.push_back(std::move(s));
                ++idx;
            }
            if (idx >= 8) break;
        }
        if (!traces.empty())
            write_svg_plot(out_dir + "/xi_traces.svg", "interface position", "t",
                           "Xi(t)", traces);
    }
}

} // namespace pulsefront
