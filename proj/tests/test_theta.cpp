#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pulsefront/errors.hpp"
#include "pulsefront/theta.hpp"

using namespace pulsefront;

namespace {

// Independent oracle for the homogeneous interface flux: integrating
// -z'' z' = mu (a z - z^2) z' from the pinned end to the saturated far field
// gives z'(0)^2/2 = mu a^3/6.
double theta_energy_oracle(double mu, double a) { return std::sqrt(mu * a * a * a / 3.0); }

PeriodicReaction logistic(double mean, double sine1, double a = 1.0, double L = 1.0) {
    LogisticReaction r;
    r.mu = FourierSeries{mean, {}, {sine1}, L};
    r.a = a;
    return r.to_reaction();
}

} // namespace

TEST_CASE("homogeneous theta matches the energy identity") {
    for (auto [mu, a] : {std::pair{1.0, 1.0}, {3.0, 2.0}, {0.5, 1.0}}) {
        const double th = theta(0.3, logistic(mu, 0.0, a));
        CHECK(th == doctest::Approx(theta_energy_oracle(mu, a)).epsilon(1e-5));
    }
}

TEST_CASE("theta scaling law under u-axis stretching") {
    const PeriodicReaction r = logistic(2.0, 1.0);
    const double base = theta(0.2, r);
    for (double kappa : {0.5, 2.0, 10.0}) {
        const double scaled = theta(0.2, rescale(r, kappa));
        CHECK(scaled == doctest::Approx(kappa * base).epsilon(1e-5));
    }
}

TEST_CASE("theta is periodic in the pinning point") {
    const PeriodicReaction r = logistic(2.0, 1.0);
    const double t0 = theta(0.4, r);
    const double t1 = theta(0.4 + r.period, r);
    CHECK(t1 == doctest::Approx(t0).epsilon(1e-6));
}

TEST_CASE("periodic theta sits inside the envelope slopes") {
    // mu in [1, 3]: flux between the homogeneous extremes.
    const PeriodicReaction r = logistic(2.0, 1.0);
    const double th = theta(0.0, r);
    CHECK(th >= theta_energy_oracle(1.0, 1.0) - 1e-6);
    CHECK(th <= theta_energy_oracle(3.0, 1.0) + 1e-6);
}

TEST_CASE("half-line solution saturates and stays positive") {
    const HalfLineSolution sol = solve_halfline(0.1, logistic(2.0, 1.0));
    CHECK(sol.z.front() == 0.0);
    for (std::size_t j = 1; j < sol.z.size(); ++j) CHECK(sol.z[j] > 0.0);
    CHECK(sol.z.back() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sol.theta > 0.0);
}

TEST_CASE("truncation doubling leaves theta unchanged") {
    const PeriodicReaction r = logistic(2.0, 1.0);
    HalfLineOptions o10;
    HalfLineOptions o20;
    o20.truncation_periods = 20;
    const double t10 = theta(0.0, r, o10);
    const double t20 = theta(0.0, r, o20);
    CHECK(std::abs(t10 - t20) < 1e-7);
}

TEST_CASE("theta responds proportionally to small reaction perturbations") {
    const double t0 = theta(0.0, logistic(2.0, 1.0));
    const double d1 = std::abs(theta(0.0, logistic(2.0 + 1e-2, 1.0)) - t0);
    const double d2 = std::abs(theta(0.0, logistic(2.0 + 1e-3, 1.0)) - t0);
    CHECK(d1 > 0.0);
    CHECK(d2 > 0.0);
    CHECK(d1 / d2 == doctest::Approx(10.0).epsilon(0.2)); // near-linear response
}

TEST_CASE("critical profile is flat with the closed form for homogeneous rates") {
    // A_d = sqrt(d mu2 / mu1) when both rates are constant.
    const PeriodicReaction r1 = logistic(1.0, 0.0);
    const PeriodicReaction r2 = logistic(1.0, 0.0);

    HalfLineOptions fast;
    fast.nodes_per_period = 512;
    const ThresholdProfile p2 = a_profile(2.0, r1, r2, 32, fast);
    CHECK(p2.A_min == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
    CHECK(p2.A_max == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));

    const ThresholdProfile p1 = a_profile(1.0, r1, r2, 32, fast);
    CHECK(p1.A_min == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(p1.A_max == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("critical profile varies for a periodic rate and stays in bounds") {
    const PeriodicReaction r1 = logistic(1.0, 0.0);
    const PeriodicReaction r2 = logistic(2.0, 1.0); // mu2 in [1, 3]
    HalfLineOptions fast;
    fast.nodes_per_period = 512;
    const ThresholdProfile prof = a_profile(1.0, r1, r2, 32, fast);
    CHECK(prof.A_max > prof.A_min + 1e-3);
    // Envelope slopes bound the numerator; the denominator is exactly
    // theta(mu=1): A in [sqrt(1/3)/th1, sqrt(3/3)/th1] with th1 = sqrt(1/3).
    CHECK(prof.A_min >= 1.0 - 1e-3);
    CHECK(prof.A_max <= std::sqrt(3.0) + 1e-3);
}

TEST_CASE("d-uniform bounds: closed forms") {
    const PeriodicReaction ones = logistic(1.0, 0.0);
    const auto [lo_h, hi_h] = r_bounds(ones, ones);
    CHECK(lo_h == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(hi_h == doctest::Approx(1.0).epsilon(1e-5));

    const PeriodicReaction wavy2 = logistic(2.0, 1.0); // mu2 in [1, 3]
    const auto [lo, hi] = r_bounds(ones, wavy2);
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(hi == doctest::Approx(3.0).epsilon(1e-4));
}

TEST_CASE("zero-speed interval nests inside the d-uniform bounds") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> amp(-0.35, 0.35);
    std::uniform_real_distribution<double> base(0.8, 1.6);
    HalfLineOptions fast;
    fast.nodes_per_period = 512;

    for (int trial = 0; trial < 2; ++trial) {
        LogisticReaction l1{FourierSeries{base(rng), {amp(rng)}, {amp(rng)}, 1.0}, 1.0};
        LogisticReaction l2{FourierSeries{base(rng), {amp(rng)}, {amp(rng)}, 1.0}, 1.0};
        const PeriodicReaction r1 = l1.to_reaction();
        const PeriodicReaction r2 = l2.to_reaction();
        const auto [r_lo, r_hi] = r_bounds(r1, r2, fast);
        for (double d : {0.5, 2.0}) {
            const Interval r0 = r0_interval(d, r1, r2, fast);
            CHECK(r0.lo >= r_lo - 1e-6);
            CHECK(r0.hi <= r_hi + 1e-6);
            CHECK(r0.lo <= r0.hi);
        }
    }
}

TEST_CASE("sign integral: logistic closed forms") {
    // int_0^1 z mu (1-z) dz = mu/6.
    const PeriodicReaction mu1 = logistic(1.0, 0.0);
    const PeriodicReaction mu2 = logistic(2.0, 0.0);

    double err = 0.0;
    const double v = sign_integral(1.0, 1.0, mu1, mu2, &err);
    CHECK(v == doctest::Approx(-1.0 / 6.0).epsilon(1e-10));
    CHECK(err < 1e-12);

    CHECK(sign_integral(1.0, 1.0, mu1, mu1) == doctest::Approx(0.0));
    CHECK(sign_integral(1.0, 2.0, mu1, mu1) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("sign prediction: positive, negative, and the boundary case") {
    const PeriodicReaction ones = logistic(1.0, 0.0);
    const PeriodicReaction twos = logistic(2.0, 0.0);
    HalfLineOptions fast;
    fast.nodes_per_period = 512;

    const SignReport pos = predict_sign(1.0, 2.0, ones, ones, fast);
    CHECK(pos.predicted == SignPrediction::positive);
    CHECK(pos.integral == doctest::Approx(0.5).epsilon(1e-9));

    const SignReport neg = predict_sign(1.0, 1.0, ones, twos, fast);
    CHECK(neg.predicted == SignPrediction::negative);
    CHECK(neg.integral == doctest::Approx(-1.0 / 6.0).epsilon(1e-9));

    // alpha = sqrt(d): the ratio lands exactly on the singleton interval.
    const SignReport zero = predict_sign(2.0, std::sqrt(2.0), ones, ones, fast);
    CHECK(zero.predicted == SignPrediction::zero_interval);
}

TEST_CASE("equilibrium gluing: symmetric case is odd and C1") {
    const PeriodicReaction ones = logistic(1.0, 0.0);
    HalfLineOptions fast;
    fast.nodes_per_period = 512;
    const GluedEquilibrium eq = build_equilibrium(0.5, 1.0, 1.0, ones, ones, fast);
    CHECK(eq.derivative_mismatch < 1e-9);
    CHECK(eq.pde_residual_l2 < 1e-3);
    // Odd symmetry about x_e.
    const int mid = static_cast<int>(eq.e.size()) / 2;
    CHECK(eq.e[mid] == doctest::Approx(0.0).epsilon(1e-12));
    for (int off : {5, 50, 500}) {
        CHECK(eq.e[mid + off] == doctest::Approx(-eq.e[mid - off]).epsilon(1e-9));
    }
}

TEST_CASE("equilibrium gluing: d=2 closed-form matching and bounds") {
    const PeriodicReaction ones = logistic(1.0, 0.0);
    const double d = 2.0;
    const double alpha = std::sqrt(2.0); // A_d for equal homogeneous rates
    const GluedEquilibrium eq = build_equilibrium(0.25, d, alpha, ones, ones);
    CHECK(eq.derivative_mismatch < 1e-5);
    CHECK(eq.pde_residual_l2 < 1e-3);
    for (std::size_t j = 0; j < eq.e.size(); ++j) {
        CHECK(eq.e[j] < alpha * 1.0);
        CHECK(eq.e[j] > -d * 1.0);
    }
}

TEST_CASE("equilibrium gluing rejects a mismatched alpha") {
    const PeriodicReaction ones = logistic(1.0, 0.0);
    CHECK_THROWS_AS(
        build_equilibrium(0.25, 2.0, std::sqrt(2.0) + 0.1, ones, ones),
        InvalidGluingError);
}

TEST_CASE("interval membership matches pointwise critical-alpha comparisons") {
    // For alpha^2/d inside the interval there are points where alpha clears
    // A_d and points where it does not.
    const PeriodicReaction r1 = logistic(1.0, 0.0);
    const PeriodicReaction r2 = logistic(2.0, 1.0);
    HalfLineOptions fast;
    fast.nodes_per_period = 512;
    const ThresholdProfile prof = a_profile(1.0, r1, r2, 48, fast);
    const double alpha = 0.5 * (prof.A_min + prof.A_max);
    bool some_above = false, some_below = false;
    for (double v : prof.A_values) {
        if (alpha >= v) some_above = true;
        if (alpha <= v) some_below = true;
    }
    CHECK(some_above);
    CHECK(some_below);
}
