#include "pulsefront/scalar_kpp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pulsefront/errors.hpp"
#include "pulsefront/numerics.hpp"

namespace pulsefront {

EigenResult principal_eigenvalue(const EigenProblem& p) {
    if (p.grid_n < 16) throw std::invalid_argument("eigen grid_n must be >= 16");
    if (p.diffusion <= 0.0) throw std::invalid_argument("diffusion must be positive");
    if (!p.potential) throw std::invalid_argument("potential not set");

    const int n = p.grid_n;
    const double h = p.period / n;
    const double delta = p.diffusion;
    const double lam = p.wavenumber;

    std::vector<double> q(n);
    double qmax = -1e300;
    for (int j = 0; j < n; ++j) {
        q[j] = p.potential(j * h);
        if (!std::isfinite(q[j])) throw std::invalid_argument("non-finite potential sample");
        qmax = std::max(qmax, q[j]);
    }

    // Rows of A = -delta D2 - 2 delta lam D1 - (delta lam^2 + q), periodic wrap.
    const double off = delta / (h * h);
    const double drift = delta * lam / h;
    std::vector<double> lower(n, -off + drift);  // multiplies u[j-1]
    std::vector<double> upper(n, -off - drift);  // multiplies u[j+1]
    std::vector<double> diag(n);
    for (int j = 0; j < n; ++j) diag[j] = 2.0 * off - (delta * lam * lam + q[j]);

    // The principal eigenvalue sits in [-delta lam^2 - qmax, -delta lam^2 - qmin],
    // so this shift keeps A - sigma I an M-matrix and the inverse iteration a
    // positive (Perron) iteration.
    const double sigma = -delta * lam * lam - qmax - 1.0;
    std::vector<double> dshift(n);
    for (int j = 0; j < n; ++j) dshift[j] = diag[j] - sigma;

    std::vector<double> x(n, 1.0);
    double mu_prev = 0.0;
    double mu = 0.0;
    const int max_iter = 20000;
    int it = 0;
    for (; it < max_iter; ++it) {
        std::vector<double> y(x);
        solve_cyclic_tridiagonal(lower, dshift, upper, y);
        // Rayleigh-style ratio for the dominant eigenvalue of the inverse.
        double num = 0.0, den = 0.0;
        for (int j = 0; j < n; ++j) {
            num += y[j] * x[j];
            den += x[j] * x[j];
        }
        mu = num / den;
        double ymax = 0.0;
        for (double v : y) ymax = std::max(ymax, std::abs(v));
        if (ymax == 0.0 || !std::isfinite(ymax))
            throw NumericalFailure("inverse iteration produced a null vector", 0.0);
        for (int j = 0; j < n; ++j) x[j] = y[j] / ymax;
        if (it > 2 && std::abs(mu - mu_prev) <= 1e-14 * std::abs(mu)) break;
        mu_prev = mu;
    }
    if (it == max_iter) {
        double res = std::abs(mu - mu_prev);
        throw NumericalFailure("eigen inverse iteration did not converge", res);
    }

    EigenResult out;
    out.value = sigma + 1.0 / mu;
    double xmax = *std::max_element(x.begin(), x.end());
    if (xmax <= 0.0)
        throw NumericalFailure("eigenfunction lost positivity", xmax);
    for (double& v : x) v /= xmax;
    out.eigenfunction = std::move(x);
    return out;
}

MinimalSpeedResult minimal_speed(const PeriodicReaction& r, double delta, int grid_n) {
    if (delta <= 0.0) throw std::invalid_argument("delta must be positive");

    EigenProblem p;
    p.diffusion = delta;
    p.period = r.period;
    p.grid_n = grid_n;
    const auto f = r.eval;
    p.potential = [f](double x) { return f(0.0, x); };

    auto speed_of = [&](double log_lam) {
        EigenProblem q = p;
        q.wavenumber = std::exp(log_lam);
        const double ev = principal_eigenvalue(q).value;
        return -ev / q.wavenumber;
    };

    const double lo = std::log(1e-3);
    const double hi = std::log(1e3);

    // Coarse scan to bracket the quasi-convex minimum, then golden section.
    const int scan = 48;
    int best = 0;
    double best_v = speed_of(lo);
    for (int i = 1; i <= scan; ++i) {
        const double v = speed_of(lo + (hi - lo) * i / scan);
        if (v < best_v) {
            best_v = v;
            best = i;
        }
    }
    if (best == 0 || best == scan)
        throw UnboundedSearchError("speed dispersion minimum pinned to the lambda bracket");

    const double a = lo + (hi - lo) * (best - 1) / scan;
    const double b = lo + (hi - lo) * (best + 1) / scan;
    auto [log_opt, c_min] = golden_min(speed_of, a, b, 1e-7);

    MinimalSpeedResult res;
    res.c_star = c_min;
    res.lambda_opt = std::exp(log_opt);
    res.bracket = {1e-3, 1e3};

    const double lb = 2.0 * std::sqrt(delta * r.m_min);
    const double ub = 2.0 * std::sqrt(delta * r.m_max);
    const double slack = 1e-6 * std::max(1.0, ub);
    if (res.c_star <= 0.0 || res.c_star < lb - slack || res.c_star > ub + slack)
        throw ConsistencyError("minimal speed escaped its dispersion bounds");
    return res;
}

std::pair<double, double> speed_bracket(double d, const PeriodicReaction& r1,
                                        const PeriodicReaction& r2, int grid_n) {
    const double right = minimal_speed(r1, 1.0, grid_n).c_star;
    const double left = minimal_speed(r2, d, grid_n).c_star;
    return {-left, right};
}

} // namespace pulsefront
