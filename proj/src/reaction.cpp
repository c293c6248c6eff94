#include "pulsefront/reaction.hpp"

#include <cmath>
#include <stdexcept>

#include "pulsefront/errors.hpp"
#include "pulsefront/numerics.hpp"

namespace pulsefront {

namespace {

double scan_extremum(const std::function<double(double)>& g, double lo, double hi,
                     bool want_min) {
    const int n = 256;
    const double h = (hi - lo) / n;
    int best = 0;
    double best_v = g(lo);
    for (int i = 1; i <= n; ++i) {
        const double v = g(lo + i * h);
        if (want_min ? (v < best_v) : (v > best_v)) {
            best_v = v;
            best = i;
        }
    }
    const double a = lo + std::max(0, best - 1) * h;
    const double b = lo + std::min(n, best + 1) * h;
    std::function<double(double)> obj = g;
    if (!want_min) obj = [&g](double x) { return -g(x); };
    auto [xm, vm] = golden_min(obj, a, b, 1e-10 * (hi - lo));
    (void)xm;
    return want_min ? vm : -vm;
}

} // namespace

double LogisticReaction::mu_l1() const {
    // mu >> 0, so the L1 norm is the plain integral. Composite Simpson.
    const int n = 4096; // even
    const double L = mu.period;
    const double h = L / n;
    double acc = mu.eval(0.0) + mu.eval(L);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * mu.eval(i * h);
    return acc * h / 3.0;
}

PeriodicReaction LogisticReaction::to_reaction() const {
    if (a <= 0.0) throw std::invalid_argument("logistic reaction needs a > 0");
    if (mu.mean - mu.coef_l1() <= 0.0)
        throw MalformedReactionError("logistic rate mu is not positive on the period");
    PeriodicReaction r;
    r.period = mu.period;
    r.zero_level = a;
    const FourierSeries m = mu;
    const double aa = a;
    r.eval = [m, aa](double u, double x) { return m.eval(x) * (aa - u); };
    r.eval_du = [m](double /*u*/, double x) { return -m.eval(x); };
    r.eval_dx = [m, aa](double u, double x) { return m.deriv(x) * (aa - u); };
    r.m_min = scan_extremum([&](double x) { return mu.eval(x) * a; }, 0.0, mu.period, true);
    r.m_max = scan_extremum([&](double x) { return mu.eval(x) * a; }, 0.0, mu.period, false);
    r.logistic = PeriodicReaction::LogisticForm{mu, a, 1.0};
    return r;
}

double min_over_period(const PeriodicReaction& r, double u) {
    return scan_extremum([&](double x) { return r.eval(u, x); }, 0.0, r.period, true);
}

double max_over_period(const PeriodicReaction& r, double u) {
    return scan_extremum([&](double x) { return r.eval(u, x); }, 0.0, r.period, false);
}

ValidationReport validate_hypotheses(const PeriodicReaction& r, SamplingResolution s) {
    if (!r.eval || !r.eval_du || !r.eval_dx)
        throw MalformedReactionError("reaction is missing an evaluator");
    if (r.period <= 0.0) throw std::invalid_argument("period must be positive");

    ValidationReport rep;
    const double L = r.period;
    const double a = r.zero_level;
    const double hx = L / s.nx;
    const double hu = 2.0 * a / s.nu;

    auto probe = [&](double u, double x) {
        const double v = r.eval(u, x);
        if (!std::isfinite(v))
            throw MalformedReactionError("non-finite f(" + std::to_string(u) + "," +
                                         std::to_string(x) + ")");
        return v;
    };

    // Smoothness proxy: analytic derivatives against centered differences.
    {
        HypothesisCheck c{"smooth_c1", true, 0.0, "eval_du/eval_dx match finite differences"};
        const double eps_u = 1e-5 * std::max(1.0, a);
        const double eps_x = 1e-5 * L;
        for (int i = 0; i <= s.nx; i += 8) {
            for (int j = 0; j <= s.nu; j += 8) {
                const double x = i * hx;
                const double u = j * hu;
                const double fd_u = (probe(u + eps_u, x) - probe(std::max(0.0, u - eps_u), x)) /
                                    (eps_u + std::min(u, eps_u));
                const double fd_x = (probe(u, x + eps_x) - probe(u, x - eps_x)) / (2.0 * eps_x);
                const double du = r.eval_du(u, x);
                const double dx = r.eval_dx(u, x);
                const double scale_u = std::max({1.0, std::abs(du), std::abs(fd_u)});
                const double scale_x = std::max({1.0, std::abs(dx), std::abs(fd_x)});
                c.worst_violation = std::max(c.worst_violation,
                                             std::abs(fd_u - du) / scale_u);
                c.worst_violation = std::max(c.worst_violation,
                                             std::abs(fd_x - dx) / scale_x);
            }
        }
        c.pass = c.worst_violation < 1e-3;
        rep.checks.push_back(c);
    }

    // Positive floor at u = 0.
    {
        HypothesisCheck c{"positive_at_zero", true, 0.0, "f(0,.) within [m_min, m_max], m_min > 0"};
        double lo = probe(0.0, 0.0), hi = lo;
        for (int i = 0; i <= s.nx; ++i) {
            const double v = probe(0.0, i * hx);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double slack = 1e-9 * std::max(1.0, std::abs(hi));
        c.pass = lo > 0.0 && r.m_min > 0.0 && r.m_min <= r.m_max &&
                 lo >= r.m_min - slack && hi <= r.m_max + slack;
        c.worst_violation = std::max({0.0, -lo, r.m_min - lo, hi - r.m_max});
        rep.checks.push_back(c);
    }

    // Decreasing in u on the sampled lattice.
    {
        HypothesisCheck c{"decreasing_in_u", true, -1e300, "df/du < 0 on the lattice"};
        for (int i = 0; i <= s.nx; ++i) {
            for (int j = 0; j <= s.nu; ++j) {
                const double d = r.eval_du(j * hu, i * hx);
                if (!std::isfinite(d)) throw MalformedReactionError("non-finite df/du");
                c.worst_violation = std::max(c.worst_violation, d);
            }
        }
        c.pass = c.worst_violation < 0.0;
        rep.checks.push_back(c);
    }

    // Constant zero at zero_level.
    {
        HypothesisCheck c{"zero_level", true, 0.0, "f(a, x) = 0 for all sampled x"};
        for (int i = 0; i <= s.nx; ++i)
            c.worst_violation = std::max(c.worst_violation, std::abs(probe(a, i * hx)));
        c.pass = c.worst_violation < 1e-9 * std::max(1.0, r.m_max);
        rep.checks.push_back(c);
    }

    // Periodicity.
    {
        HypothesisCheck c{"periodic_in_x", true, 0.0, "f(u, x + L) = f(u, x)"};
        for (int i = 0; i <= s.nx; i += 4) {
            for (int j = 0; j <= s.nu; j += 4) {
                const double x = i * hx;
                const double u = j * hu;
                const double f0 = probe(u, x);
                const double f1 = probe(u, x + L);
                c.worst_violation = std::max(c.worst_violation,
                                             std::abs(f1 - f0) / (1.0 + std::abs(f0)));
            }
        }
        c.pass = c.worst_violation <= 1e-12;
        rep.checks.push_back(c);
    }

    return rep;
}

PeriodicReaction reflect(const PeriodicReaction& r, double x0) {
    PeriodicReaction g = r;
    const auto f = r.eval;
    const auto fu = r.eval_du;
    const auto fx = r.eval_dx;
    g.eval = [f, x0](double u, double x) { return f(u, 2.0 * x0 - x); };
    g.eval_du = [fu, x0](double u, double x) { return fu(u, 2.0 * x0 - x); };
    g.eval_dx = [fx, x0](double u, double x) { return -fx(u, 2.0 * x0 - x); };
    g.logistic.reset(); // mirrored rate is no longer the stored series
    return g;
}

PeriodicReaction rescale(const PeriodicReaction& r, double kappa) {
    if (kappa <= 0.0) throw std::invalid_argument("rescale: kappa must be positive");
    PeriodicReaction g = r;
    const auto f = r.eval;
    const auto fu = r.eval_du;
    const auto fx = r.eval_dx;
    g.eval = [f, kappa](double z, double x) { return f(z / kappa, x); };
    g.eval_du = [fu, kappa](double z, double x) { return fu(z / kappa, x) / kappa; };
    g.eval_dx = [fx, kappa](double z, double x) { return fx(z / kappa, x); };
    g.zero_level = kappa * r.zero_level;
    if (g.logistic) {
        // scale*mu(x)*(a - z/kappa) = (scale/kappa)*mu(x)*(kappa*a - z)
        g.logistic->a = kappa * g.logistic->a;
        g.logistic->scale = g.logistic->scale / kappa;
    }
    return g;
}

PeriodicReaction scale_output(const PeriodicReaction& r, double c) {
    if (c <= 0.0) throw std::invalid_argument("scale_output: factor must be positive");
    PeriodicReaction g = r;
    const auto f = r.eval;
    const auto fu = r.eval_du;
    const auto fx = r.eval_dx;
    g.eval = [f, c](double u, double x) { return c * f(u, x); };
    g.eval_du = [fu, c](double u, double x) { return c * fu(u, x); };
    g.eval_dx = [fx, c](double u, double x) { return c * fx(u, x); };
    g.m_min = c * r.m_min;
    g.m_max = c * r.m_max;
    if (g.logistic) g.logistic->scale *= c;
    return g;
}

} // namespace pulsefront
