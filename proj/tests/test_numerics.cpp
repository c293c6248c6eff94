#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pulsefront/numerics.hpp"

using namespace pulsefront;

TEST_CASE("tridiagonal solve reproduces a manufactured solution") {
    const int n = 200;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(0.1, 1.0);
    std::vector<double> lower(n), diag(n), upper(n), x(n), rhs(n);
    for (int i = 0; i < n; ++i) {
        lower[i] = -uni(rng);
        upper[i] = -uni(rng);
        diag[i] = 3.0 + uni(rng); // dominant
        x[i] = uni(rng) - 0.5;
    }
    for (int i = 0; i < n; ++i) {
        rhs[i] = diag[i] * x[i];
        if (i > 0) rhs[i] += lower[i] * x[i - 1];
        if (i + 1 < n) rhs[i] += upper[i] * x[i + 1];
    }
    solve_tridiagonal(lower, diag, upper, rhs);
    for (int i = 0; i < n; ++i) CHECK(rhs[i] == doctest::Approx(x[i]).epsilon(1e-12));
}

TEST_CASE("cyclic tridiagonal solve handles the periodic corners") {
    const int n = 128;
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> uni(0.1, 1.0);
    std::vector<double> lower(n), diag(n), upper(n), x(n), rhs(n);
    for (int i = 0; i < n; ++i) {
        lower[i] = -uni(rng);
        upper[i] = -uni(rng);
        diag[i] = 4.0 + uni(rng);
        x[i] = uni(rng) - 0.5;
    }
    for (int i = 0; i < n; ++i) {
        rhs[i] = diag[i] * x[i] + lower[i] * x[(i + n - 1) % n] + upper[i] * x[(i + 1) % n];
    }
    solve_cyclic_tridiagonal(lower, diag, upper, rhs);
    for (int i = 0; i < n; ++i) CHECK(rhs[i] == doctest::Approx(x[i]).epsilon(1e-11));
}

TEST_CASE("golden section finds a quartic minimum") {
    auto f = [](double x) { return std::pow(x - 0.7, 4) + 2.0; };
    auto [xm, fm] = golden_min(f, -3.0, 5.0, 1e-10);
    CHECK(xm == doctest::Approx(0.7).epsilon(1e-4));
    CHECK(fm == doctest::Approx(2.0));
}

TEST_CASE("gauss-legendre integrates polynomials exactly and e^x well") {
    const Quadrature q = gauss_legendre(64);
    double wsum = 0.0;
    for (double w : q.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));

    auto poly = [](double x) { return 5.0 * x * x * x * x * x * x - x + 2.0; };
    // int_{-1}^{1} = 2*5/7 + 4
    CHECK(integrate_gl(poly, -1.0, 1.0, q) ==
          doctest::Approx(10.0 / 7.0 + 4.0).epsilon(1e-14));
    CHECK(integrate_gl([](double x) { return std::exp(x); }, 0.0, 1.0, q) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("periodic-residual fit recovers an unbiased slope") {
    // Plain least squares on slope+sinusoid data is biased by the residual's
    // odd moment; the harmonic regressors must remove it.
    const double c = 0.7, L = 1.0;
    const double period = L / c;
    std::vector<double> t, x;
    for (int i = 0; i <= 2000; ++i) {
        const double ti = 10.0 * i / 2000.0;
        t.push_back(ti);
        x.push_back(c * ti + 0.1 * std::sin(2.0 * M_PI * ti / period) + 0.3);
    }
    const LineFit plain = fit_line(t, x);
    const LineFit harm = fit_line_periodic(t, x, period, 3);
    CHECK(std::abs(plain.slope - c) > 1e-4); // the bias is real
    CHECK(harm.slope == doctest::Approx(c).epsilon(1e-9));
    CHECK(harm.intercept == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("fnv1a64 is stable") {
    CHECK(fnv1a64("") == 14695981039346656037ull);
    CHECK(fnv1a64("a") != fnv1a64("b"));
    CHECK(fnv1a64("config") == fnv1a64("config"));
}
