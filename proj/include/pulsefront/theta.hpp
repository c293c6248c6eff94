#ifndef PULSEFRONT_THETA_HPP
#define PULSEFRONT_THETA_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pulsefront/reaction.hpp"

namespace pulsefront {

/// Unique positive solution of the half-line problem
///   -z'' = z f(z, x)  on (x0, x0 + N L),  z(x0) = 0,  z saturating at
/// zero_level in the far field. theta is the right-sided slope at x0: the
/// interface flux of a one-species territory.
struct HalfLineSolution {
    double x0 = 0.0;
    std::vector<double> x;
    std::vector<double> z;
    double theta = 0.0;
    double h = 0.0;
    int newton_iterations = 0;
};

struct HalfLineOptions {
    int truncation_periods = 10; // N
    int nodes_per_period = 1024;
    double newton_tol = 1e-12;   // on the scaled step norm
    int max_newton = 60;
    bool check_envelope = true;
};

/// Sub/super-solution pair for a reaction: the half-line solutions driven by
/// min_x f and max_x f. The sub-solution doubles as the Newton seed, which
/// pins the iteration to the positive branch. Reusable across every x0 (the
/// x-extremes of f do not move under translation or reflection), so build it
/// once per reaction when scanning.
struct HalfLineContext {
    double cap = 1.0;
    double length = 0.0;
    int nodes = 0;
    std::vector<double> sub;
    std::vector<double> super;
    double sub_slope = 0.0;   // z'(0) of the sub-solution
    double super_slope = 0.0; // z'(0) of the super-solution
};

HalfLineContext make_halfline_context(const PeriodicReaction& r,
                                      const HalfLineOptions& opts = {});

/// Damped Newton on the second-order finite-difference discretization,
/// seeded by the sub-solution. The returned solution is checked against the
/// envelope. Pass a prebuilt context when calling repeatedly.
HalfLineSolution solve_halfline(double x0, const PeriodicReaction& r,
                                const HalfLineOptions& opts = {},
                                const HalfLineContext* ctx = nullptr);

/// theta(x0, r): slope of the half-line solution at x0. Positive, L-periodic
/// in x0, and scales linearly when the reaction's u-axis is stretched.
double theta(double x0, const PeriodicReaction& r, const HalfLineOptions& opts = {},
             const HalfLineContext* ctx = nullptr);

/// Critical competitiveness profile
///   A_d(x) = d * theta(x, (1/d) f2) / theta(x, f1 reflected about x),
/// with extrema refined by golden section. alpha hitting A_d(x) permits a
/// stationary interface at x.
struct ThresholdProfile {
    std::vector<double> x_samples;
    std::vector<double> A_values;
    double A_min = 0.0;
    double A_max = 0.0;
    double x_at_min = 0.0;
    double x_at_max = 0.0;
    double d = 1.0;
};

ThresholdProfile a_profile(double d, const PeriodicReaction& r1,
                           const PeriodicReaction& r2, int resolution = 128,
                           const HalfLineOptions& opts = {});

/// d-uniform outer bounds (r_lo, r_hi) for the zero-speed interval of
/// alpha^2/d. Computed from unit-diffusion half-line problems built on
/// min_x f2 and max_x f2; the diffusion rate cancels exactly, so it does
/// not appear in the signature.
std::pair<double, double> r_bounds(const PeriodicReaction& r1,
                                   const PeriodicReaction& r2,
                                   const HalfLineOptions& opts = {});

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double v) const { return lo <= v && v <= hi; }
};

/// [A_min^2/d, A_max^2/d]; enforced to nest inside [r_lo, r_hi].
Interval r0_interval(double d, const PeriodicReaction& r1, const PeriodicReaction& r2,
                     const HalfLineOptions& opts = {});

/// Limit nonlinearity acting on the signed field:
/// f1(z/alpha, x) z+ - (1/d) f2(-z/d, x) z-.
double eta(double z, double x, double d, double alpha, const PeriodicReaction& r1,
           const PeriodicReaction& r2);

struct GluedEquilibrium {
    std::vector<double> x;
    std::vector<double> e;
    double x_e = 0.0;
    double derivative_mismatch = 0.0; // |theta_left - theta_right|
    double pde_residual_l2 = 0.0;     // of -e'' = eta[e], away from x_e
};

/// Glues the reflected alpha-scaled species-1 half-line solution (left of
/// x_e) with the negated d-scaled species-2 one (right of x_e). Throws
/// InvalidGluingError unless alpha matches A_d(x_e) so the junction is C1.
GluedEquilibrium build_equilibrium(double x_e, double d, double alpha,
                                   const PeriodicReaction& r1,
                                   const PeriodicReaction& r2,
                                   const HalfLineOptions& opts = {},
                                   double match_tol = 1e-4);

enum class SignPrediction { positive, negative, zero_interval, boundary_ambiguous };

std::string to_string(SignPrediction p);

struct SignReport {
    double integral = 0.0;      // of eta over one period and the full z-range
    double integral_error = 0.0;
    Interval r0;
    double r_lo = 0.0;
    double r_hi = 0.0;
    double ratio = 0.0;         // alpha^2 / d
    SignPrediction predicted = SignPrediction::zero_interval;
};

/// Integral of alpha^2 int_0^{a1} z f1 dz - d int_0^{a2} z f2 dz over one
/// period: its sign is the sign of a non-zero limiting speed.
/// Gauss-Legendre inside, composite midpoint outside.
double sign_integral(double d, double alpha, const PeriodicReaction& r1,
                     const PeriodicReaction& r2, double* error_estimate = nullptr);

/// Full sign prediction. If both reactions are logistic with unit carrying
/// level, cross-checks the integral against alpha^2 ||mu1||_1 - d ||mu2||_1
/// (they must agree up to quadrature noise).
SignReport predict_sign(double d, double alpha, const PeriodicReaction& r1,
                        const PeriodicReaction& r2, const HalfLineOptions& opts = {});

} // namespace pulsefront

#endif
