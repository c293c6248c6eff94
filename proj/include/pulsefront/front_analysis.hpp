#ifndef PULSEFRONT_FRONT_ANALYSIS_HPP
#define PULSEFRONT_FRONT_ANALYSIS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "pulsefront/grid.hpp"
#include "pulsefront/system_sim.hpp"
#include "pulsefront/theta.hpp"

namespace pulsefront {

/// Below this magnitude a measured speed is treated as stationary: the
/// traveling-coordinate change of variables is ill-posed near zero speed.
inline constexpr double kSpeedFloor = 1e-3;

struct SpeedEstimate {
    double c = 0.0;
    double stderr_c = 0.0;
    std::pair<double, double> window{0.0, 0.0};
    int crossings_used = 0;
    bool ambiguous = false; // |c| within [floor, 3*floor]
};

struct SpeedRegressOptions {
    double period = 1.0;        // L of the medium
    double min_window = 5.0;    // fallback window duration when |c| ~ 0
    int harmonics = 3;          // periodic-residual regressors
    double jitter_tol = -1.0;   // non-monotonicity allowance; <0 = 2L default
    int max_iterations = 25;
};

/// Slope of crossing position vs time over a trailing window spanning a
/// whole number of pulsation periods L/|c| (iterated re-windowing), with
/// harmonic regressors absorbing the time-periodic residual.
SpeedEstimate estimate_speed(const std::vector<double>& t,
                             const std::vector<double>& x,
                             const SpeedRegressOptions& opts);

/// Dual-level estimate from a simulation crossing log: the species-1 level
/// for leftward candidates, species-2 for rightward, cross-validated within
/// 2*combined stderr.
struct FrontSpeed {
    SpeedEstimate used;
    SpeedEstimate other;
    bool levels_agree = false;
};

FrontSpeed estimate_front_speed(const std::vector<CrossingSample>& log,
                                const SpeedRegressOptions& opts);

/// Front profiles phi_i(xi, x) in traveling coordinates: nonincreasing
/// (species 1) / nondecreasing (species 2) in xi, L-periodic in x by
/// construction (x stored modulo L on the grid lattice).
struct ProfileSamples {
    std::vector<double> xi_grid;
    std::vector<double> x_grid;
    // Row-major [xi][x].
    std::vector<double> phi1;
    std::vector<double> phi2;
    int min_bin_occupancy = 0;
    double a1 = 1.0, a2 = 1.0;

    double& at1(int i, int j) { return phi1[i * x_grid.size() + j]; }
    double& at2(int i, int j) { return phi2[i * x_grid.size() + j]; }
    double get1(int i, int j) const { return phi1[i * x_grid.size() + j]; }
    double get2(int i, int j) const { return phi2[i * x_grid.size() + j]; }
};

/// Bins snapshot samples (t, x) -> (xi = x - c t, x mod L) and averages.
/// Requires |c| above the floor and at least one pulsation period of data.
ProfileSamples reconstruct_profile(const std::vector<Snapshot>& snaps,
                                   const Grid1D& grid, double c, double a1,
                                   double a2, double xi_halfwidth);

/// Translates the xi axis so the anchor sits at xi = 0: the first xi where
/// any column of phi1 drops below a1/2 (c <= 0), or the last xi where any
/// column of phi2 is below a2/2 (c > 0). Returns the shift applied.
double normalize(ProfileSamples& prof, int c_sign);

struct FreeBoundaryTrace {
    std::vector<double> times;
    std::vector<double> xi_of_t;    // interface position (absolute coords)
    std::vector<double> flux_left;  // one-sided d/dx of the signed field
    std::vector<double> flux_right;
    double s = 0.0;                 // associated speed
};

/// Interface Xi(t) from the single sign change of v_d = alpha u1 - d u2 per
/// snapshot. One-sided fluxes come from quadratic fits sampled beyond the
/// smoothed transition layer (width ~ k^{-1/2}) and extrapolated to the
/// interface; offset < 0 picks the layer-clearing default for the run's k.
FreeBoundaryTrace extract_free_boundary(const std::vector<Snapshot>& snaps,
                                        const Grid1D& grid, const SystemParams& p,
                                        double s, int flux_offset_nodes = -1);

struct FreeBoundaryDiagnostics {
    double monotonicity_violation = 0.0; // worst step against the direction of s
    double periodicity_deviation = 0.0;  // of x - s*Xi^{-1}(x), relative to L
    double flux_mismatch = 0.0;          // max |left-right| / |left|
    double max_flux = -1e300;            // both sides must stay negative
};

FreeBoundaryDiagnostics free_boundary_diagnostics(const FreeBoundaryTrace& tr,
                                                  double period);

struct XiPrimeReport {
    bool applicable = false; // false when d == 1 (no curvature jump)
    double median_rel_discrepancy = 0.0;
    int samples = 0;
};

/// Compares finite-difference Xi'(t) against
/// d/(1-d) * (jump of d2/dx2 across the interface) / (d/dx at the interface).
XiPrimeReport xi_prime_check(const FreeBoundaryTrace& tr,
                             const std::vector<Snapshot>& snaps,
                             const Grid1D& grid, const SystemParams& p,
                             int offset_nodes = -1);

struct EquilibriumSamples {
    std::vector<double> x;  // absolute coordinates
    std::vector<double> e;  // alpha*u1 - d*u2 at the final time
    double residual_l2 = 0.0;
    double time_derivative_norm = 0.0;
    int zero_crossings = 0;
};

/// Signed equilibrium from a time-converged stationary run. Refuses states
/// whose instantaneous time derivative is still above `rate_tol`.
EquilibriumSamples extract_equilibrium(const SystemState& state,
                                       const SystemParams& params,
                                       const Grid1D& grid, double rate_tol = 1e-4);

/// Worst violation of: v_d sampled one period to the right never exceeds
/// the local value (signed-field comparison across cells).
double window_monotonicity_violation(const SystemState& state,
                                     const SystemParams& params, const Grid1D& grid);

/// Discrete L2 norm of d/dt v_1 - d2/dx2 v_d - (alpha u1 f1[u1] - u2 f2[u2])
/// between two consecutive snapshots; the identity is k-independent.
double v1_dynamics_residual(const Snapshot& s0, const Snapshot& s1,
                            const Grid1D& grid, const SystemParams& p);

} // namespace pulsefront

#endif
