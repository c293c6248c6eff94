#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pulsefront/errors.hpp"
#include "pulsefront/reaction.hpp"

using namespace pulsefront;

namespace {

LogisticReaction homogeneous(double mu = 1.0, double a = 1.0) {
    LogisticReaction r;
    r.mu = FourierSeries{mu, {}, {}, 1.0};
    r.a = a;
    return r;
}

LogisticReaction wavy() {
    // mu(x) = 2 + sin(2 pi x), L = 1
    LogisticReaction r;
    r.mu = FourierSeries{2.0, {}, {1.0}, 1.0};
    r.a = 1.0;
    return r;
}

} // namespace

TEST_CASE("homogeneous logistic passes all hypotheses") {
    const PeriodicReaction r = homogeneous().to_reaction();
    const ValidationReport rep = validate_hypotheses(r);
    CHECK(rep.all_pass());
    CHECK(r.zero_level == 1.0);
    CHECK(r.m_min == doctest::Approx(1.0));
    CHECK(r.m_max == doctest::Approx(1.0));
}

TEST_CASE("wavy logistic: extrema of the growth floor") {
    const PeriodicReaction r = wavy().to_reaction();
    const ValidationReport rep = validate_hypotheses(r);
    CHECK(rep.all_pass());
    CHECK(r.m_min == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.m_max == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("non-monotone growth factor fails the decreasing check at u=0") {
    PeriodicReaction r;
    r.period = 1.0;
    r.zero_level = 1.0;
    r.eval = [](double u, double) { return (1.0 + u) * (1.0 - u); };
    r.eval_du = [](double u, double) { return -2.0 * u; }; // zero at u=0
    r.eval_dx = [](double, double) { return 0.0; };
    r.m_min = 1.0;
    r.m_max = 1.0;
    const ValidationReport rep = validate_hypotheses(r);
    CHECK_FALSE(rep.all_pass());
    bool monotone_failed = false;
    for (const auto& c : rep.checks) {
        if (c.name == "decreasing_in_u") {
            monotone_failed = !c.pass;
            CHECK(c.worst_violation == doctest::Approx(0.0));
        } else {
            CHECK(c.pass);
        }
    }
    CHECK(monotone_failed);
}

TEST_CASE("non-finite evaluator raises a malformed-reaction error") {
    PeriodicReaction r = homogeneous().to_reaction();
    r.eval = [](double u, double) { return u > 0.5 ? std::nan("") : 1.0 - u; };
    CHECK_THROWS_AS(validate_hypotheses(r), MalformedReactionError);
}

TEST_CASE("reflection of a constant-rate reaction is the identity") {
    const PeriodicReaction r = homogeneous(2.0, 1.5).to_reaction();
    const PeriodicReaction g = reflect(r, 0.37);
    for (double u : {0.0, 0.5, 1.2}) {
        for (double x : {-0.3, 0.0, 0.41, 0.9}) {
            CHECK(g.eval(u, x) == doctest::Approx(r.eval(u, x)).epsilon(1e-14));
        }
    }
}

TEST_CASE("reflection about 0 flips the sine part of the rate") {
    const PeriodicReaction r = wavy().to_reaction();
    const PeriodicReaction g = reflect(r, 0.0);
    // mu'(x) = 2 - sin(2 pi x)
    for (double x : {0.1, 0.25, 0.6, 0.93}) {
        const double expect = (2.0 - std::sin(2.0 * M_PI * x)) * (1.0 - 0.3);
        CHECK(g.eval(0.3, x) == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("reflect twice restores the reaction pointwise") {
    const PeriodicReaction r = wavy().to_reaction();
    const PeriodicReaction g = reflect(reflect(r, 0.7), 0.7);
    for (double u : {0.0, 0.4, 1.0}) {
        for (double x : {0.05, 0.33, 0.71}) {
            CHECK(g.eval(u, x) == doctest::Approx(r.eval(u, x)).epsilon(1e-14));
            CHECK(g.eval_dx(u, x) == doctest::Approx(r.eval_dx(u, x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("rescale stretches the u axis and the zero level") {
    const PeriodicReaction r = homogeneous().to_reaction();
    CHECK_THROWS_AS(rescale(r, -1.0), std::invalid_argument);

    const PeriodicReaction id = rescale(r, 1.0);
    CHECK(id.zero_level == 1.0);
    CHECK(id.eval(0.3, 0.0) == doctest::Approx(r.eval(0.3, 0.0)));

    const PeriodicReaction g = rescale(r, 2.0);
    CHECK(g.zero_level == doctest::Approx(2.0));
    // g(z, x) = 1 - z/2
    CHECK(g.eval(1.0, 0.2) == doctest::Approx(0.5));
    CHECK(g.eval(2.0, 0.2) == doctest::Approx(0.0));
}

TEST_CASE("rescale composes multiplicatively") {
    const PeriodicReaction r = wavy().to_reaction();
    const PeriodicReaction g1 = rescale(r, 6.0);
    const PeriodicReaction g2 = rescale(rescale(r, 2.0), 3.0);
    for (double z : {0.1, 1.0, 4.0}) {
        for (double x : {0.0, 0.4}) {
            CHECK(g1.eval(z, x) == doctest::Approx(g2.eval(z, x)).epsilon(1e-14));
        }
    }
    CHECK(g1.logistic.has_value());
    CHECK(g1.logistic->a == doctest::Approx(6.0));
}

TEST_CASE("periodicity holds to near machine precision") {
    const PeriodicReaction r = wavy().to_reaction();
    for (double u : {0.0, 0.2, 0.9}) {
        for (double x : {0.0, 0.123, 0.77}) {
            const double f0 = r.eval(u, x);
            const double f1 = r.eval(u, x + r.period);
            CHECK(std::abs(f1 - f0) <= 1e-12 * (1.0 + std::abs(f0)));
        }
    }
}

TEST_CASE("analytic derivatives match centered differences") {
    const PeriodicReaction r = wavy().to_reaction();
    const double eps = 1e-6;
    for (double u : {0.2, 0.8}) {
        for (double x : {0.15, 0.62}) {
            const double fd_u = (r.eval(u + eps, x) - r.eval(u - eps, x)) / (2 * eps);
            const double fd_x = (r.eval(u, x + eps) - r.eval(u, x - eps)) / (2 * eps);
            CHECK(r.eval_du(u, x) == doctest::Approx(fd_u).epsilon(1e-5));
            CHECK(r.eval_dx(u, x) == doctest::Approx(fd_x).epsilon(1e-5));
        }
    }
}

TEST_CASE("mu L1 norm matches the closed form for a Fourier rate") {
    // Oscillations integrate to zero over a period, leaving mean * L.
    LogisticReaction r = wavy();
    CHECK(r.mu_l1() == doctest::Approx(2.0).epsilon(1e-10));
    r.mu.period = 3.0;
    CHECK(r.mu_l1() == doctest::Approx(6.0).epsilon(1e-10));
}

TEST_CASE("non-positive rate is rejected") {
    LogisticReaction r;
    r.mu = FourierSeries{1.0, {}, {1.5}, 1.0}; // dips below zero
    r.a = 1.0;
    CHECK_THROWS_AS(r.to_reaction(), MalformedReactionError);
}
