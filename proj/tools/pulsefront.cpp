#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pulsefront/errors.hpp"
#include "pulsefront/experiment.hpp"
#include "pulsefront/reaction.hpp"
#include "pulsefront/report.hpp"

namespace {

std::string default_out_dir() {
    const char* env = std::getenv("PULSEFRONT_OUT");
    return env ? env : "out";
}

void apply_overrides(pulsefront::ExperimentConfig& cfg, int resolution, double horizon,
                     int workers) {
    if (resolution > 0) cfg.nodes_per_period = resolution;
    if (horizon > 0) cfg.horizon = horizon;
    if (workers > 0) cfg.workers = workers;
}

int cmd_check(const pulsefront::ExperimentConfig& cfg) {
    using namespace pulsefront;
    bool ok = true;

    const PeriodicReaction r1 = cfg.r1();
    const PeriodicReaction r2 = cfg.r2();
    for (const auto& [name, rep] :
         {std::pair{std::string("species1"), validate_hypotheses(r1)},
          std::pair{std::string("species2"), validate_hypotheses(r2)}}) {
        for (const auto& c : rep.checks) {
            std::cout << name << "." << c.name << ": " << (c.pass ? "pass" : "FAIL")
                      << " (worst " << c.worst_violation << ")\n";
            ok = ok && c.pass;
        }
    }

    for (double d : cfg.d_values) {
        for (double alpha : cfg.alpha_values) {
            const FreqAudit a = audit_point(cfg, d, alpha);
            std::cout << "d=" << d << " alpha=" << alpha
                      << ": high-frequency bound " << (a.freq_ok ? "holds" : "fails")
                      << ", d_exis=" << a.d_exis << " ("
                      << (a.d_ok ? "d ok" : "d TOO SMALL") << ")"
                      << ", k_bistable=" << a.k_bistable << " ("
                      << (a.k_ok ? "k ok" : "k TOO SMALL") << ")\n";
            if (cfg.d_exis_check) ok = ok && a.d_ok;
            ok = ok && a.k_ok;
        }
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pulsating-front laboratory for two-species competition in periodic media"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = default_out_dir();
    int workers = 0;
    int resolution = 0;
    double horizon = 0.0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--workers", workers, "concurrent sweep workers");
        sub->add_option("--resolution", resolution, "nodes per period override");
        sub->add_option("--horizon", horizon, "time horizon override");
    };

    CLI::App* run = app.add_subcommand("run", "simulate the sweep and compare to predictions");
    add_common(run);
    CLI::App* predict = app.add_subcommand("predict", "analytic predictions only");
    add_common(predict);
    CLI::App* check = app.add_subcommand("check", "audit hypotheses and existence bounds");
    add_common(check);

    CLI11_PARSE(app, argc, argv);

    try {
        pulsefront::ExperimentConfig cfg = pulsefront::load_config(config_path);
        apply_overrides(cfg, resolution, horizon, workers);

        if (check->parsed()) return cmd_check(cfg);

        if (predict->parsed()) {
            pulsefront::run_predictions(cfg, out_dir);
            std::cout << "wrote " << out_dir << "/prediction.csv\n";
            return 0;
        }

        const pulsefront::SweepResult res = pulsefront::run_sweep(cfg, out_dir);
        int failures = 0;
        for (const auto& r : res.runs) {
            if (!r.error.empty()) {
                std::cout << "run d=" << r.d << " a=" << r.alpha << " k=" << r.k
                          << " seed=" << r.seed << " ERROR: " << r.error << "\n";
                ++failures;
            }
        }
        for (const auto& p : res.points) {
            std::cout << "d=" << p.d << " alpha=" << p.alpha << " seed=" << p.seed
                      << ": predicted " << to_string(p.prediction.predicted)
                      << ", measured " << p.measured_sign << ", c_inf_fit="
                      << p.c_inf_fit << (p.agreement ? "" : "  [DISAGREE]") << "\n";
            if (!p.agreement) ++failures;
        }
        std::cout << (res.all_pass ? "all verdicts pass" : "verdicts FAILED") << "; see "
                  << out_dir << "/verdicts.csv\n";
        return res.all_pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
