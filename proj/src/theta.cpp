#include "pulsefront/theta.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pulsefront/errors.hpp"
#include "pulsefront/numerics.hpp"

namespace pulsefront {

namespace {

/// Newton iteration on -z'' = z g(z, x_offset), z(0) = 0, z(L) = cap, with
/// x_offset relative to the left endpoint.
struct BvpProblem {
    std::function<double(double, double)> g;    // (z, x_offset)
    std::function<double(double, double)> g_dz;
    double cap = 1.0;
    double length = 1.0;
    int nodes = 1024;
};

std::vector<double> newton_bvp(const BvpProblem& p, std::vector<double> z,
                               double tol, int max_iter, int* iters_out) {
    const int m = p.nodes; // z has m+1 entries, both ends pinned
    const double h = p.length / m;
    const double h2 = h * h;
    std::vector<double> F(m + 1, 0.0);

    auto residual = [&](const std::vector<double>& w, std::vector<double>& out) {
        double norm = 0.0;
        for (int j = 1; j < m; ++j) {
            out[j] = (w[j - 1] - 2.0 * w[j] + w[j + 1]) / h2 + w[j] * p.g(w[j], j * h);
            norm = std::max(norm, std::abs(out[j]));
        }
        return norm;
    };

    double fnorm = residual(z, F);
    // Rounding floor of the residual: three O(cap/h^2) terms cancelling.
    const double res_floor = 64.0 * 2.220446049250313e-16 * std::max(1.0, p.cap) / h2;
    int it = 0;
    std::vector<double> lo(m - 1), di(m - 1), up(m - 1), rhs(m - 1);
    std::vector<double> trial(z.size()), Ft(m + 1, 0.0);
    for (; it < max_iter; ++it) {
        if (fnorm <= res_floor) break;
        for (int j = 1; j < m; ++j) {
            lo[j - 1] = 1.0 / h2;
            up[j - 1] = 1.0 / h2;
            di[j - 1] = -2.0 / h2 + p.g(z[j], j * h) + z[j] * p.g_dz(z[j], j * h);
            rhs[j - 1] = -F[j];
        }
        solve_tridiagonal(lo, di, up, rhs);

        double step_norm = 0.0;
        for (double v : rhs) step_norm = std::max(step_norm, std::abs(v));

        // Backtracking line search on the residual norm.
        double tau = 1.0;
        double fnew = fnorm;
        bool accepted = false;
        for (int bt = 0; bt < 30; ++bt) {
            trial = z;
            for (int j = 1; j < m; ++j) trial[j] += tau * rhs[j - 1];
            fnew = residual(trial, Ft);
            if (fnew <= std::max((1.0 - 0.25 * tau) * fnorm, res_floor)) {
                accepted = true;
                break;
            }
            tau *= 0.5;
        }
        if (!accepted) {
            if (fnorm <= 1e3 * res_floor) break; // converged to rounding level
            throw NumericalFailure("half-line Newton stalled", fnorm);
        }
        z.swap(trial);
        F.swap(Ft);
        fnorm = fnew;
        if (step_norm * tau <= tol * std::max(1.0, p.cap)) break;
    }
    if (it == max_iter)
        throw NumericalFailure("half-line Newton did not converge", fnorm);
    if (iters_out) *iters_out = it + 1;
    return z;
}

double slope_4th_order(const std::vector<double>& z, double h) {
    return (-25.0 * z[0] + 48.0 * z[1] - 36.0 * z[2] + 16.0 * z[3] - 3.0 * z[4]) /
           (12.0 * h);
}

std::vector<double> tanh_seed(double cap, double rate, double length, int nodes) {
    std::vector<double> z(nodes + 1);
    const double h = length / nodes;
    const double beta = std::sqrt(std::max(rate, 1e-8) / 2.0);
    for (int j = 0; j <= nodes; ++j) z[j] = cap * std::tanh(beta * j * h);
    z[0] = 0.0;
    z[nodes] = cap;
    return z;
}

/// min_x/max_x of f(z, .) tabulated on a z-grid; linear interpolation.
/// The scan resolution bounds the envelope slack used later.
struct ExtremalRates {
    double z_hi = 1.0;
    std::vector<double> lo, hi;

    double eval(bool want_min, double z) const {
        const auto& v = want_min ? lo : hi;
        const int n = static_cast<int>(v.size()) - 1;
        double s = std::clamp(z, 0.0, z_hi) / z_hi * n;
        int i = std::min(static_cast<int>(s), n - 1);
        const double w = s - i;
        return v[i] * (1.0 - w) + v[i + 1] * w;
    }
};

ExtremalRates tabulate_extremal_rates(const PeriodicReaction& r) {
    const int nz = 2048;
    const int nx = 1024;
    ExtremalRates t;
    t.z_hi = 1.5 * r.zero_level;
    t.lo.resize(nz + 1);
    t.hi.resize(nz + 1);
    const double L = r.period;
    for (int i = 0; i <= nz; ++i) {
        const double z = t.z_hi * i / nz;
        double lo = r.eval(z, 0.0), hi = lo;
        for (int j = 1; j < nx; ++j) {
            const double v = r.eval(z, L * j / nx);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (!std::isfinite(lo) || !std::isfinite(hi))
            throw MalformedReactionError("non-finite reaction while tabulating extremes");
        t.lo[i] = lo;
        t.hi[i] = hi;
    }
    return t;
}

BvpProblem table_problem(const ExtremalRates& t, bool want_min, double cap,
                         double length, int nodes) {
    BvpProblem p;
    p.cap = cap;
    p.length = length;
    p.nodes = nodes;
    const double dz = 1e-6 * std::max(1.0, cap);
    p.g = [&t, want_min](double z, double) { return t.eval(want_min, z); };
    p.g_dz = [&t, want_min, dz](double z, double) {
        return (t.eval(want_min, z + dz) - t.eval(want_min, std::max(0.0, z - dz))) /
               (dz + std::min(z, dz));
    };
    return p;
}

} // namespace

HalfLineContext make_halfline_context(const PeriodicReaction& r,
                                      const HalfLineOptions& opts) {
    if (opts.truncation_periods < 6)
        throw std::invalid_argument("truncation must cover at least 6 periods");
    HalfLineContext ctx;
    ctx.cap = r.zero_level;

    // Truncation error decays like exp(-2 rho X) with rho the linearized
    // far-field rate sqrt(a |df/du(a,.)|); slow-decay reactions need more
    // periods than the default to keep the pinned-end slope clean.
    double fu_min = 1e300;
    for (int i = 0; i < 256; ++i) {
        const double x = r.period * i / 256.0;
        fu_min = std::min(fu_min, -r.eval_du(r.zero_level, x));
    }
    int periods = opts.truncation_periods;
    if (fu_min > 0.0) {
        const double rho = std::sqrt(r.zero_level * fu_min);
        const int needed =
            static_cast<int>(std::ceil(7.5 / (rho * r.period)));
        periods = std::min(std::max(periods, needed), 6 * opts.truncation_periods);
    }
    ctx.length = periods * r.period;
    ctx.nodes = periods * opts.nodes_per_period;

    const ExtremalRates table = tabulate_extremal_rates(r);
    const BvpProblem plo = table_problem(table, true, ctx.cap, ctx.length, ctx.nodes);
    const BvpProblem phi = table_problem(table, false, ctx.cap, ctx.length, ctx.nodes);

    ctx.sub = newton_bvp(plo, tanh_seed(ctx.cap, table.eval(true, 0.0), ctx.length, ctx.nodes),
                         opts.newton_tol, opts.max_newton, nullptr);
    ctx.super = newton_bvp(phi, tanh_seed(ctx.cap, table.eval(false, 0.0), ctx.length, ctx.nodes),
                           opts.newton_tol, opts.max_newton, nullptr);
    const double h = ctx.length / ctx.nodes;
    ctx.sub_slope = slope_4th_order(ctx.sub, h);
    ctx.super_slope = slope_4th_order(ctx.super, h);
    return ctx;
}

HalfLineSolution solve_halfline(double x0, const PeriodicReaction& r,
                                const HalfLineOptions& opts,
                                const HalfLineContext* ctx) {
    HalfLineContext local;
    if (!ctx) {
        local = make_halfline_context(r, opts);
        ctx = &local;
    }
    const double a = r.zero_level;
    const int nodes = ctx->nodes;

    BvpProblem p;
    const auto f = r.eval;
    const auto fu = r.eval_du;
    p.g = [f, x0](double z, double xo) { return f(z, x0 + xo); };
    p.g_dz = [fu, x0](double z, double xo) { return fu(z, x0 + xo); };
    p.cap = a;
    p.length = ctx->length;
    p.nodes = nodes;

    HalfLineSolution sol;
    sol.z = newton_bvp(p, ctx->sub, opts.newton_tol, opts.max_newton,
                       &sol.newton_iterations);
    sol.x0 = x0;
    sol.h = ctx->length / nodes;
    sol.x.resize(sol.z.size());
    for (std::size_t j = 0; j < sol.x.size(); ++j) sol.x[j] = x0 + j * sol.h;
    sol.theta = slope_4th_order(sol.z, sol.h);

    for (int j = 1; j <= nodes; ++j) {
        if (sol.z[j] <= 0.0)
            throw NumericalFailure("half-line solution lost positivity", sol.z[j]);
    }
    if (std::abs(sol.z[nodes] - a) > 0.01 * a)
        throw NumericalFailure("half-line solution failed to saturate",
                               sol.z[nodes] - a);

    if (opts.check_envelope) {
        // Slack covers the finite x-scan behind the tabulated extremes.
        const double slack = 2e-3 * a;
        for (int j = 0; j <= nodes; ++j) {
            if (sol.z[j] < ctx->sub[j] - slack || sol.z[j] > ctx->super[j] + slack)
                throw NumericalFailure(
                    "half-line solution escaped its sub/super-solution envelope",
                    std::max(ctx->sub[j] - sol.z[j], sol.z[j] - ctx->super[j]));
        }
    }
    return sol;
}

double theta(double x0, const PeriodicReaction& r, const HalfLineOptions& opts,
             const HalfLineContext* ctx) {
    const double th = solve_halfline(x0, r, opts, ctx).theta;
    if (th <= 0.0) throw NumericalFailure("theta not positive", th);
    return th;
}

ThresholdProfile a_profile(double d, const PeriodicReaction& r1,
                           const PeriodicReaction& r2, int resolution,
                           const HalfLineOptions& opts) {
    if (d <= 0.0) throw std::invalid_argument("d must be positive");
    const double L = r1.period;
    const PeriodicReaction f2_over_d = scale_output(r2, 1.0 / d);

    const HalfLineContext ctx1 = make_halfline_context(r1, opts);
    const HalfLineContext ctx2 = make_halfline_context(f2_over_d, opts);

    auto a_at = [&](double x) {
        const double num = d * theta(x, f2_over_d, opts, &ctx2);
        const double den = theta(x, reflect(r1, x), opts, &ctx1);
        return num / den;
    };

    ThresholdProfile prof;
    prof.d = d;
    prof.x_samples.resize(resolution);
    prof.A_values.resize(resolution);

#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < resolution; ++i) {
        const double x = L * i / resolution;
        prof.x_samples[i] = x;
        prof.A_values[i] = a_at(x);
    }

    // Deterministic extrema: scan the samples, then refine locally.
    int imin = 0, imax = 0;
    for (int i = 1; i < resolution; ++i) {
        if (prof.A_values[i] < prof.A_values[imin]) imin = i;
        if (prof.A_values[i] > prof.A_values[imax]) imax = i;
    }
    const double hx = L / resolution;
    auto refine = [&](int idx, bool want_min) {
        std::function<double(double)> obj = a_at;
        if (!want_min) obj = [&a_at](double x) { return -a_at(x); };
        auto [xm, vm] = golden_min(obj, prof.x_samples[idx] - hx,
                                   prof.x_samples[idx] + hx, 1e-6 * L, 60);
        return std::make_pair(xm, want_min ? vm : -vm);
    };
    auto [xmin, vmin] = refine(imin, true);
    auto [xmax, vmax] = refine(imax, false);
    prof.A_min = std::min(vmin, prof.A_values[imin]);
    prof.A_max = std::max(vmax, prof.A_values[imax]);
    prof.x_at_min = vmin <= prof.A_values[imin] ? xmin : prof.x_samples[imin];
    prof.x_at_max = vmax >= prof.A_values[imax] ? xmax : prof.x_samples[imax];
    if (prof.A_min <= 0.0)
        throw NumericalFailure("threshold profile must be positive", prof.A_min);
    return prof;
}

std::pair<double, double> r_bounds(const PeriodicReaction& r1,
                                   const PeriodicReaction& r2,
                                   const HalfLineOptions& opts) {
    // Unit-diffusion envelope slopes for species 2: the context already
    // solves exactly the min_x/max_x problems.
    const HalfLineContext ctx2 = make_halfline_context(r2, opts);
    const double z_lo_slope = ctx2.sub_slope;
    const double z_hi_slope = ctx2.super_slope;

    // Extrema over x of theta(x, f1 reflected about x).
    const HalfLineContext ctx1 = make_halfline_context(r1, opts);
    auto theta1 = [&](double x) { return theta(x, reflect(r1, x), opts, &ctx1); };
    const int scan = 96;
    const double L = r1.period;
    std::vector<double> th(scan);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < scan; ++i) th[i] = theta1(L * i / scan);
    int imin = 0, imax = 0;
    for (int i = 1; i < scan; ++i) {
        if (th[i] < th[imin]) imin = i;
        if (th[i] > th[imax]) imax = i;
    }
    const double hx = L / scan;
    auto [xa, th_min_ref] = golden_min(theta1, L * imin / scan - hx,
                                       L * imin / scan + hx, 1e-6 * L, 60);
    std::function<double(double)> neg = [&theta1](double x) { return -theta1(x); };
    auto [xb, th_max_neg] = golden_min(neg, L * imax / scan - hx, L * imax / scan + hx,
                                       1e-6 * L, 60);
    (void)xa;
    (void)xb;
    const double th_min = std::min(th_min_ref, th[imin]);
    const double th_max = std::max(-th_max_neg, th[imax]);

    const double r_lo = std::pow(z_lo_slope / th_max, 2.0);
    const double r_hi = std::pow(z_hi_slope / th_min, 2.0);
    if (!(r_lo > 0.0 && r_lo <= r_hi + 1e-12))
        throw ConsistencyError("r bounds are not ordered");
    return {r_lo, r_hi};
}

Interval r0_interval(double d, const PeriodicReaction& r1, const PeriodicReaction& r2,
                     const HalfLineOptions& opts) {
    const ThresholdProfile prof = a_profile(d, r1, r2, 128, opts);
    Interval r0{prof.A_min * prof.A_min / d, prof.A_max * prof.A_max / d};
    const auto [r_lo, r_hi] = r_bounds(r1, r2, opts);
    // Both routes carry O(h^2) solver noise; matters only when the interval
    // degenerates onto the bounds (homogeneous rates).
    const double slack = 1e-4 * std::max(1.0, r_hi);
    if (r0.lo < r_lo - slack || r0.hi > r_hi + slack)
        throw ConsistencyError("zero-speed interval escaped its d-uniform bounds");
    return r0;
}

double eta(double z, double x, double d, double alpha, const PeriodicReaction& r1,
           const PeriodicReaction& r2) {
    const double zp = std::max(z, 0.0);
    const double zm = -std::min(z, 0.0);
    double v = 0.0;
    if (zp > 0.0) v += r1.eval(zp / alpha, x) * zp;
    if (zm > 0.0) v -= r2.eval(zm / d, x) * zm / d;
    return v;
}

GluedEquilibrium build_equilibrium(double x_e, double d, double alpha,
                                   const PeriodicReaction& r1,
                                   const PeriodicReaction& r2,
                                   const HalfLineOptions& opts, double match_tol) {
    if (d <= 0.0 || alpha <= 0.0)
        throw std::invalid_argument("d and alpha must be positive");

    // Left piece: species 1, reflected about x_e and stretched by alpha.
    const PeriodicReaction left_r = rescale(reflect(r1, x_e), alpha);
    // Right piece: species 2, output-scaled by 1/d and stretched by d.
    const PeriodicReaction right_r = rescale(scale_output(r2, 1.0 / d), d);

    const HalfLineSolution zl = solve_halfline(x_e, left_r, opts);
    const HalfLineSolution zr = solve_halfline(x_e, right_r, opts);

    GluedEquilibrium eq;
    eq.x_e = x_e;
    eq.derivative_mismatch = std::abs(zl.theta - zr.theta);
    if (eq.derivative_mismatch > match_tol)
        throw InvalidGluingError(
            "junction is not C1: |theta_left - theta_right| = " +
            std::to_string(eq.derivative_mismatch) +
            " (alpha does not match the critical profile at x_e)");

    // Keep the inner half of each truncated piece so the samples stay
    // strictly between the far-field levels.
    const int keep = static_cast<int>(zl.z.size() - 1) / 2;
    eq.x.resize(2 * keep + 1);
    eq.e.resize(2 * keep + 1);
    for (int j = 0; j <= 2 * keep; ++j) {
        const int off = j - keep; // node offset from x_e
        eq.x[j] = x_e + off * zl.h;
        eq.e[j] = off <= 0 ? zl.z[-off] : -zr.z[off];
    }

    // Residual of -e'' = eta[e] in discrete L2, away from the junction.
    const double h = zl.h;
    double acc = 0.0;
    int count = 0;
    for (int j = 1; j + 1 < static_cast<int>(eq.x.size()); ++j) {
        if (std::abs(j - keep) <= 2) continue;
        const double lap = (eq.e[j - 1] - 2.0 * eq.e[j] + eq.e[j + 1]) / (h * h);
        const double res = -lap - eta(eq.e[j], eq.x[j], d, alpha, r1, r2);
        acc += res * res;
        ++count;
    }
    eq.pde_residual_l2 = std::sqrt(acc / std::max(1, count));
    return eq;
}

std::string to_string(SignPrediction p) {
    switch (p) {
        case SignPrediction::positive: return "positive";
        case SignPrediction::negative: return "negative";
        case SignPrediction::zero_interval: return "zero-interval";
        case SignPrediction::boundary_ambiguous: return "boundary-ambiguous";
    }
    return "?";
}

double sign_integral(double d, double alpha, const PeriodicReaction& r1,
                     const PeriodicReaction& r2, double* error_estimate) {
    static const Quadrature gl = gauss_legendre(64);
    const double L = r1.period;
    const double a1 = r1.zero_level;
    const double a2 = r2.zero_level;

    auto integrand = [&](double x) {
        const double i1 =
            integrate_gl([&](double z) { return z * r1.eval(z, x); }, 0.0, a1, gl);
        const double i2 =
            integrate_gl([&](double z) { return z * r2.eval(z, x); }, 0.0, a2, gl);
        const double v = alpha * alpha * i1 - d * i2;
        if (!std::isfinite(v)) throw MalformedReactionError("non-finite sign integrand");
        return v;
    };

    auto midpoint = [&](int n) {
        double acc = 0.0;
        const double h = L / n;
        for (int i = 0; i < n; ++i) acc += integrand((i + 0.5) * h);
        return acc * h;
    };

    const double coarse = midpoint(512);
    if (error_estimate) {
        const double fine = midpoint(1024);
        *error_estimate = std::abs(fine - coarse);
    }
    return coarse;
}

SignReport predict_sign(double d, double alpha, const PeriodicReaction& r1,
                        const PeriodicReaction& r2, const HalfLineOptions& opts) {
    SignReport rep;
    rep.ratio = alpha * alpha / d;
    rep.integral = sign_integral(d, alpha, r1, r2, &rep.integral_error);
    std::tie(rep.r_lo, rep.r_hi) = r_bounds(r1, r2, opts);

    const ThresholdProfile prof = a_profile(d, r1, r2, 128, opts);
    rep.r0 = {prof.A_min * prof.A_min / d, prof.A_max * prof.A_max / d};
    const double slack = 1e-4 * std::max(1.0, rep.r_hi);
    if (rep.r0.lo < rep.r_lo - slack || rep.r0.hi > rep.r_hi + slack)
        throw ConsistencyError("zero-speed interval escaped its d-uniform bounds");

    // The interval endpoints carry solver noise of roughly `snap`; genuine
    // proximity within `band` is reported rather than asserted as a sign.
    const double snap = 1e-4 * std::max(1.0, rep.r0.hi);
    const double band = 1e-3;
    const double dist_above = rep.ratio - rep.r0.hi;
    const double dist_below = rep.r0.lo - rep.ratio;
    if (dist_above <= snap && dist_below <= snap)
        rep.predicted = SignPrediction::zero_interval;
    else if (dist_above > snap)
        rep.predicted = dist_above < band ? SignPrediction::boundary_ambiguous
                                          : SignPrediction::positive;
    else
        rep.predicted = dist_below < band ? SignPrediction::boundary_ambiguous
                                          : SignPrediction::negative;

    // Interval prediction and integral sign must agree off the interval.
    if (rep.predicted == SignPrediction::positive && !(rep.integral > 0.0))
        throw ConsistencyError("interval predicts positive but the integral is not");
    if (rep.predicted == SignPrediction::negative && !(rep.integral < 0.0))
        throw ConsistencyError("interval predicts negative but the integral is not");

    // Corollary cross-check in the unit-level logistic family.
    if (r1.logistic && r2.logistic && r1.logistic->a == 1.0 && r2.logistic->a == 1.0 &&
        r1.logistic->scale == 1.0 && r2.logistic->scale == 1.0) {
        const LogisticReaction l1{r1.logistic->mu, 1.0};
        const LogisticReaction l2{r2.logistic->mu, 1.0};
        const double corollary = (alpha * alpha * l1.mu_l1() - d * l2.mu_l1()) / 6.0;
        const double scale = std::max({1.0, std::abs(rep.integral), std::abs(corollary)});
        if (std::abs(rep.integral - corollary) > 1e-9 * scale)
            throw ConsistencyError("logistic corollary disagrees with the sign integral");
    }
    return rep;
}

} // namespace pulsefront
