#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pulsefront/errors.hpp"
#include "pulsefront/front_analysis.hpp"
#include "pulsefront/system_sim.hpp"
#include "pulsefront/theta.hpp"

using namespace pulsefront;

namespace {

PeriodicReaction logistic(double mean, double sine1, double a = 1.0, double L = 1.0) {
    LogisticReaction r;
    r.mu = FourierSeries{mean, {}, {sine1}, L};
    r.a = a;
    return r.to_reaction();
}

SystemParams make_params(double d, double alpha, double k, double sine = 0.0) {
    SystemParams p;
    p.d = d;
    p.alpha = alpha;
    p.k = k;
    p.r1 = logistic(1.0, sine);
    p.r2 = logistic(1.0, sine);
    return p;
}

} // namespace

TEST_CASE("speed estimator nails a constructed pulsating log") {
    // x(t) = 0.7 t + 0.1 sin(2 pi 0.7 t / L): the residual is periodic with
    // the pulsation period, so the windowed harmonic fit must recover the
    // drift almost exactly.
    const double c = 0.7, L = 1.0;
    std::vector<double> t, x;
    for (int i = 0; i <= 1500; ++i) {
        const double ti = 15.0 * i / 1500.0;
        t.push_back(ti);
        x.push_back(c * ti + 0.1 * std::sin(2.0 * M_PI * c * ti / L));
    }
    SpeedRegressOptions opts;
    opts.period = L;
    const SpeedEstimate est = estimate_speed(t, x, opts);
    CHECK(est.c == doctest::Approx(c).epsilon(1e-6));
    CHECK_FALSE(est.ambiguous);
}

TEST_CASE("speed estimator: constant log gives zero with tiny stderr") {
    std::vector<double> t, x;
    for (int i = 0; i <= 400; ++i) {
        t.push_back(i * 0.05);
        x.push_back(3.25);
    }
    SpeedRegressOptions opts;
    opts.period = 1.0;
    const SpeedEstimate est = estimate_speed(t, x, opts);
    CHECK(est.c == doctest::Approx(0.0));
    CHECK(est.stderr_c < 1e-12);
}

TEST_CASE("speed estimator rejects wildly non-monotone data") {
    std::vector<double> t, x;
    for (int i = 0; i <= 400; ++i) {
        const double ti = i * 0.05;
        t.push_back(ti);
        x.push_back(0.8 * ti + 5.0 * std::sin(3.1 * ti)); // retreats by >> L
    }
    SpeedRegressOptions opts;
    opts.period = 1.0;
    CHECK_THROWS_AS(estimate_speed(t, x, opts), NotAFrontError);
}

TEST_CASE("speed estimator needs enough crossings") {
    std::vector<double> t{0.0, 1.0, 2.0}, x{0.0, 0.5, 1.0};
    SpeedRegressOptions opts;
    CHECK_THROWS_AS(estimate_speed(t, x, opts), InsufficientDataError);
}

TEST_CASE("profile reconstruction from an exact pulsating ansatz") {
    // u(t, x) = g(x - c t) h(x) with g a sigmoid and h periodic: binning in
    // (xi, x mod L) must reproduce g h to well under sup-norm 1e-3.
    const double c = 0.8;
    const Grid1D grid = Grid1D::make(1.0, 256, 24);
    auto g = [](double xi) { return 1.0 / (1.0 + std::exp(2.0 * (xi - 12.0))); };
    auto h = [](double x) { return 1.0 + 0.2 * std::sin(2.0 * M_PI * x); };

    std::vector<Snapshot> snaps;
    for (int i = 0; i <= 400; ++i) {
        Snapshot s;
        s.t = 1.25 / 400.0 * i * 1.0; // slightly over one pulsation period
        s.window_shift = 0;
        s.u1.resize(grid.n);
        s.u2.resize(grid.n);
        for (int j = 0; j < grid.n; ++j) {
            const double x = grid.x(j);
            s.u1[j] = g(x - c * s.t) * h(x) / 1.2;     // keep within [0, 1]
            s.u2[j] = (1.0 - g(x - c * s.t)) * h(x) / 1.2;
        }
        snaps.push_back(std::move(s));
    }

    const ProfileSamples prof = reconstruct_profile(snaps, grid, c, 1.0, 1.0, 5.0);
    CHECK(prof.min_bin_occupancy >= 0);

    double sup_err = 0.0;
    for (std::size_t i = 0; i < prof.xi_grid.size(); ++i) {
        for (std::size_t j = 0; j < prof.x_grid.size(); ++j) {
            const double expect = g(prof.xi_grid[i]) * h(prof.x_grid[j]) / 1.2;
            sup_err = std::max(sup_err,
                               std::abs(prof.get1(static_cast<int>(i),
                                                  static_cast<int>(j)) -
                                        expect));
        }
    }
    CHECK(sup_err < 1e-3);

    // Monotone input stays monotone per column after binning.
    for (std::size_t j = 0; j < prof.x_grid.size(); ++j) {
        for (std::size_t i = 0; i + 1 < prof.xi_grid.size(); ++i) {
            CHECK(prof.get1(static_cast<int>(i), static_cast<int>(j)) >=
                  prof.get1(static_cast<int>(i + 1), static_cast<int>(j)) - 1e-3);
        }
    }
}

TEST_CASE("profile reconstruction refuses near-zero speeds and short spans") {
    const Grid1D grid = Grid1D::make(1.0, 64, 8);
    std::vector<Snapshot> snaps(3);
    for (int i = 0; i < 3; ++i) {
        snaps[i].t = 0.01 * i;
        snaps[i].u1.assign(grid.n, 0.5);
        snaps[i].u2.assign(grid.n, 0.5);
    }
    CHECK_THROWS_AS(reconstruct_profile(snaps, grid, 1e-4, 1.0, 1.0, 2.0),
                    DegenerateCoordinatesError);
    CHECK_THROWS_AS(reconstruct_profile(snaps, grid, 1.0, 1.0, 1.0, 2.0),
                    InsufficientDataError);
}

TEST_CASE("normalization: idempotence and inverse translation") {
    // Synthetic monotone profile with a tanh interface.
    const Grid1D grid = Grid1D::make(1.0, 128, 16);
    ProfileSamples prof;
    prof.a1 = prof.a2 = 1.0;
    const int nxi = 400, nx = 16;
    prof.xi_grid.resize(nxi);
    prof.x_grid.resize(nx);
    for (int j = 0; j < nx; ++j) prof.x_grid[j] = j / static_cast<double>(nx);
    prof.phi1.resize(static_cast<std::size_t>(nxi) * nx);
    prof.phi2.resize(static_cast<std::size_t>(nxi) * nx);
    // fill(shift) samples the translated profile phi0(xi - shift) on a
    // fixed grid, so the anchor moves by exactly +shift.
    auto fill = [&](double shift) {
        for (int i = 0; i < nxi; ++i) {
            prof.xi_grid[i] = -10.0 + 20.0 * i / (nxi - 1);
            for (int j = 0; j < nx; ++j) {
                const double xi = prof.xi_grid[i] - shift;
                const double bump = 0.2 * std::sin(2.0 * M_PI * prof.x_grid[j]);
                prof.at1(i, j) = 0.5 * (1.0 - std::tanh(2.0 * (xi - bump)));
                prof.at2(i, j) = 0.5 * (1.0 + std::tanh(2.0 * (xi - bump)));
            }
        }
    };

    fill(0.0);
    const double s1 = normalize(prof, -1);
    const double anchored = prof.xi_grid.front();
    const double s2 = normalize(prof, -1);
    CHECK(s2 == doctest::Approx(0.0).epsilon(1e-12)); // idempotent
    CHECK(prof.xi_grid.front() == doctest::Approx(anchored));

    fill(3.2);
    const double s3 = normalize(prof, -1);
    // Recovery is limited by the xi sampling of the anchor interpolation.
    const double dxi = prof.xi_grid[1] - prof.xi_grid[0];
    CHECK(std::abs(s3 - (s1 - 3.2)) < dxi);

    // The two anchor rules differ by less than the interface width.
    fill(0.0);
    ProfileSamples prof2 = prof;
    const double down_rule = normalize(prof, -1);
    const double up_rule = normalize(prof2, +1);
    CHECK(std::abs(down_rule - up_rule) < 1.0);
    (void)grid;
}

TEST_CASE("free boundary of a rigid tanh wave") {
    const double s = 0.6;
    const Grid1D grid = Grid1D::make(1.0, 128, 24);
    SystemParams p = make_params(1.0, 1.0, 400.0);
    std::vector<Snapshot> snaps;
    for (int i = 0; i <= 60; ++i) {
        Snapshot snap;
        snap.t = 0.05 * i;
        snap.u1.resize(grid.n);
        snap.u2.resize(grid.n);
        for (int j = 0; j < grid.n; ++j) {
            const double w = std::tanh(s * snap.t + 10.0 - grid.x(j));
            snap.u1[j] = std::max(w, 0.0);
            snap.u2[j] = std::max(-w, 0.0);
        }
        snaps.push_back(std::move(snap));
    }
    const FreeBoundaryTrace tr = extract_free_boundary(snaps, grid, p, s, 2);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        CHECK(tr.xi_of_t[i] == doctest::Approx(s * tr.times[i] + 10.0).epsilon(1e-6));
        CHECK(tr.flux_left[i] < 0.0);
        CHECK(tr.flux_right[i] < 0.0);
        CHECK(tr.flux_left[i] == doctest::Approx(tr.flux_right[i]).epsilon(0.02));
        CHECK(tr.flux_left[i] == doctest::Approx(-1.0).epsilon(0.02));
    }
    const FreeBoundaryDiagnostics diag = free_boundary_diagnostics(tr, 1.0);
    CHECK(diag.monotonicity_violation <= 0.0 + 1e-12);
    CHECK(diag.flux_mismatch < 0.02);
    CHECK(diag.max_flux < 0.0);
    CHECK(diag.periodicity_deviation < 1e-6); // x - s Xi^{-1}(x) is constant here
}

TEST_CASE("free boundary detector flags non-front data") {
    const Grid1D grid = Grid1D::make(1.0, 64, 8);
    SystemParams p = make_params(1.0, 1.0, 100.0);
    std::vector<Snapshot> snaps(1);
    snaps[0].t = 0.0;
    snaps[0].u1.assign(grid.n, 1.0); // w > 0 everywhere
    snaps[0].u2.assign(grid.n, 0.0);
    CHECK_THROWS_AS(extract_free_boundary(snaps, grid, p, 0.5, 2), NoInterfaceError);

    for (int j = 0; j < grid.n; ++j) {
        const double x = grid.x(j);
        snaps[0].u1[j] = (x < 2.0 || x > 6.0) ? 1.0 : 0.0;
        snaps[0].u2[j] = (x < 2.0 || x > 6.0) ? 0.0 : 1.0;
    }
    CHECK_THROWS_AS(extract_free_boundary(snaps, grid, p, 0.5, 2),
                    MultiInterfaceError);
}

TEST_CASE("interface velocity matches the curvature-jump identity") {
    // Piecewise-quadratic ansatz built to satisfy the jump identity exactly:
    // slope p at the interface, curvatures A+ (left) and A- (right) with
    // A+ - A- = (1 - 1/d) Xi'(t) p. Quadratic fits recover it to rounding.
    const double d = 2.0;
    const double s = 0.5, eps = 0.04, omega = 2.0 * M_PI * 0.5;
    const double pslope = -1.0;
    const Grid1D grid = Grid1D::make(1.0, 256, 24);
    SystemParams params = make_params(d, 1.0, 400.0);

    auto xi_of = [&](double t) { return 12.0 + s * t + eps * std::sin(omega * t); };
    auto xi_rate = [&](double t) { return s + eps * omega * std::cos(omega * t); };

    std::vector<Snapshot> snaps;
    for (int i = 0; i <= 200; ++i) {
        Snapshot snap;
        snap.t = 0.005 * i;
        const double xi = xi_of(snap.t);
        const double a_plus = 0.3; // left-side curvature
        const double a_minus = a_plus + (1.0 - 1.0 / d) * xi_rate(snap.t) * pslope;
        snap.u1.resize(grid.n);
        snap.u2.resize(grid.n);
        // Quadratic near the interface, frozen beyond |r| = 0.8 so the sign
        // change stays unique; the fit stencils stay well inside.
        auto local = [&](double r) {
            const double rc = std::clamp(r, -0.8, 0.8);
            const double a_side = rc < 0.0 ? a_plus : a_minus;
            return pslope * rc + 0.5 * a_side * rc * rc;
        };
        for (int j = 0; j < grid.n; ++j) {
            const double w = local(grid.x(j) - xi);
            snap.u1[j] = std::max(w, 0.0);
            snap.u2[j] = std::max(-w, 0.0) / d;
        }
        snaps.push_back(std::move(snap));
    }

    const FreeBoundaryTrace tr = extract_free_boundary(snaps, grid, params, s, 4);
    const XiPrimeReport rep = xi_prime_check(tr, snaps, grid, params, 4);
    CHECK(rep.applicable);
    CHECK(rep.samples > 100);
    CHECK(rep.median_rel_discrepancy < 1e-3);
}

TEST_CASE("curvature-jump check is not applicable at d = 1") {
    const Grid1D grid = Grid1D::make(1.0, 64, 8);
    SystemParams p = make_params(1.0, 1.0, 100.0);
    FreeBoundaryTrace tr;
    tr.s = 0.5;
    const XiPrimeReport rep = xi_prime_check(tr, {}, grid, p);
    CHECK_FALSE(rep.applicable);
}

TEST_CASE("equilibrium extraction from a relaxed symmetric run") {
    // d = 1, alpha = 1, equal rates: the signed field is odd about the
    // interface and stationary, so extraction must succeed with a small
    // segregated-equation residual.
    const Grid1D grid = Grid1D::make(1.0, 128, 16);
    SystemParams p = make_params(1.0, 1.0, 400.0);
    SystemState st = initial_front(grid, 1.0, 1.0, 8.0, 0.5);
    Stepper stepper(p, grid);
    const double dt = p.stable_dt();
    const long steps = static_cast<long>(30.0 / dt);
    for (long i = 0; i < steps; ++i) stepper.advance(st, dt);

    const EquilibriumSamples eq = extract_equilibrium(st, p, grid, 1e-4);
    CHECK(eq.zero_crossings == 1);
    CHECK(eq.residual_l2 < 1e-3);
    for (std::size_t j = 0; j < eq.e.size(); ++j) {
        CHECK(eq.e[j] < 1.0);
        CHECK(eq.e[j] > -1.0);
    }
    // Odd symmetry about the window center.
    const int n = grid.n;
    for (int j = 0; j < n / 4; ++j) {
        CHECK(eq.e[j] == doctest::Approx(-eq.e[n - 1 - j]).epsilon(1e-6));
    }

    // A fresh (non-relaxed) state must be refused.
    SystemState young = initial_front(grid, 1.0, 1.0, 8.0, 0.5);
    step(young, p, grid, dt);
    CHECK_THROWS_AS(extract_equilibrium(young, p, grid, 1e-4),
                    PrematureExtractionError);
}

TEST_CASE("signed-field comparison across cells holds after relaxation") {
    const Grid1D grid = Grid1D::make(1.0, 128, 16);
    SystemParams p = make_params(1.0, 1.0, 200.0, 0.4);
    SystemState st = initial_front(grid, 1.0, 1.0, 8.0, 0.5);
    Stepper stepper(p, grid);
    const double dt = p.stable_dt();
    const long steps = static_cast<long>(25.0 / dt);
    for (long i = 0; i < steps; ++i) stepper.advance(st, dt);
    CHECK(window_monotonicity_violation(st, p, grid) < 1e-6);
}

TEST_CASE("combined-field dynamics residual shrinks under refinement") {
    // The identity couples v_1's time derivative to v_d's diffusion and the
    // reaction imbalance; it holds for any k, so the discrete residual is
    // pure truncation error.
    auto residual_at = [&](int npp, double dt_frac) {
        const Grid1D grid = Grid1D::make(1.0, npp, 12);
        SystemParams p = make_params(2.0, 1.5, 60.0, 0.3);
        SystemState st = initial_front(grid, 1.0, 1.0, 6.0, 0.5);
        Stepper stepper(p, grid);
        const double dt = p.stable_dt() * dt_frac;
        const long steps = static_cast<long>(2.0 / dt);
        for (long i = 0; i < steps; ++i) stepper.advance(st, dt);
        Snapshot s0{st.t, st.window_shift, st.u1, st.u2};
        stepper.advance(st, dt);
        Snapshot s1{st.t, st.window_shift, st.u1, st.u2};
        return v1_dynamics_residual(s0, s1, grid, p);
    };
    const double coarse = residual_at(96, 1.0);
    const double fine = residual_at(192, 0.5);
    CHECK(fine < coarse);
}
