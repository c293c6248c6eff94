#ifndef PULSEFRONT_REACTION_HPP
#define PULSEFRONT_REACTION_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pulsefront/fourier.hpp"

namespace pulsefront {

/// A KPP-type growth-rate factor f(u, x): L-periodic in x, decreasing in u,
/// positive at u = 0、with a unique positive zero at u = zero_level shared by
/// every x. The reaction term of the PDE is u * f(u, x).
///
/// Values are immutable once built and the evaluators must be pure, so
/// instances can be shared freely across threads.
struct PeriodicReaction {
    double period = 1.0;     // L
    std::function<double(double, double)> eval;    // f(u, x)
    std::function<double(double, double)> eval_du; // df/du
    std::function<double(double, double)> eval_dx; // df/dx
    double zero_level = 1.0; // a, with f(a, x) = 0 for all x
    double m_min = 1.0;      // min over one period of f(0, .)
    double m_max = 1.0;      // max over one period of f(0, .)

    /// Set when the reaction is mu(x) * (a - u); enables the sampled fast
    /// path in the time stepper.
    struct LogisticForm {
        FourierSeries mu;
        double a = 1.0;
        double scale = 1.0; // overall output factor, f = scale * mu(x)(a - u)
    };
    std::optional<LogisticForm> logistic;
};

/// Logistic family mu(x) * (a - u). mu is a truncated Fourier series and must
/// stay positive on the period.
struct LogisticReaction {
    FourierSeries mu;
    double a = 1.0;

    /// ||mu||_L1 over one period, by composite Simpson quadrature.
    double mu_l1() const;

    PeriodicReaction to_reaction() const;
};

struct HypothesisCheck {
    std::string name;
    bool pass = false;
    double worst_violation = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<HypothesisCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct SamplingResolution {
    int nx = 256;
    int nu = 128;
};

/// Sampling-based audit of the structural hypotheses: smooth evaluators that
/// agree with finite differences, f(0,.) >= m > 0, f decreasing in u, and a
/// constant positive zero at zero_level. Throws MalformedReactionError on
/// non-finite evaluator output.
ValidationReport validate_hypotheses(const PeriodicReaction& r,
                                     SamplingResolution samples = {});

/// g(u, x) = r(u, 2*x0 - x). Period preserved; an involution about x0.
PeriodicReaction reflect(const PeriodicReaction& r, double x0);

/// g(z, x) = r(z / kappa, x): stretches the u-axis, zero_level scales to
/// kappa * zero_level. kappa <= 0 is a domain error.
PeriodicReaction rescale(const PeriodicReaction& r, double kappa);

/// g(u, x) = c * r(u, x) for c > 0. zero_level unchanged, m/M scale by c.
PeriodicReaction scale_output(const PeriodicReaction& r, double c);

/// min_x f(u, x) over one period (dense scan plus golden-section refinement).
double min_over_period(const PeriodicReaction& r, double u);
double max_over_period(const PeriodicReaction& r, double u);

} // namespace pulsefront

#endif
