#ifndef PULSEFRONT_SYSTEM_SIM_HPP
#define PULSEFRONT_SYSTEM_SIM_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pulsefront/grid.hpp"
#include "pulsefront/reaction.hpp"

namespace pulsefront {

/// Discretized two-species state at one time instant.
struct SystemState {
    double t = 0.0;
    std::vector<double> u1;
    std::vector<double> u2;
    /// Cumulative whole-period window shifts, in periods. Absolute positions
    /// are window coordinates plus shift*L.
    long window_shift = 0;
    std::int64_t clamp_events = 0;
};

struct CombinedFields {
    std::vector<double> v_d; // alpha*u1 - d*u2
    std::vector<double> v_1; // alpha*u1 - u2
};

struct SystemParams {
    double d = 1.0;
    double alpha = 1.0;
    double k = 100.0;
    PeriodicReaction r1;
    PeriodicReaction r2;
    bool parallel = true; // use the OpenMP kernels

    double a1() const { return r1.zero_level; }
    double a2() const { return r2.zero_level; }

    /// Explicit-stage stability budget:
    /// 0.5 / (k*max(alpha*a1, a2) + max(M1, M2)).
    double stable_dt() const;
};

CombinedFields combine_fields(const SystemState& s, const SystemParams& p);

/// Reusable time integrator: samples the growth rates once and keeps the
/// double buffers across steps. Prefer this over the free step() when
/// advancing in a loop.
class Stepper {
public:
    Stepper(const SystemParams& params, const Grid1D& grid);
    ~Stepper();
    Stepper(Stepper&&) noexcept;
    Stepper& operator=(Stepper&&) noexcept;
    Stepper(const Stepper&) = delete;
    Stepper& operator=(const Stepper&) = delete;

    /// One IMEX step: explicit reaction+competition, implicit diffusion,
    /// comparison-box clamping with events counted on the state.
    void advance(SystemState& state, double dt);

    const SystemParams& params() const { return params_; }

private:
    SystemParams params_;
    Grid1D grid_;
    struct Workspace;
    std::unique_ptr<Workspace> ws_;
};

/// Smooth sigmoid connecting the two single-species states across
/// interface_x: u1 high on the left, u2 high on the right.
SystemState initial_front(const Grid1D& grid, double a1, double a2,
                          double interface_x, double width);

/// One-shot convenience wrapper around Stepper for single steps.
void step(SystemState& state, const SystemParams& params, const Grid1D& grid,
          double dt);

struct CrossingSample {
    double t = 0.0;
    double x1 = 0.0;        // leftmost u1 = a1/2 crossing, absolute coords
    double x2 = 0.0;        // rightmost u2 = a2/2 crossing, absolute coords
    double seg_index = 0.0; // integral of u1*u2 over the window
};

struct Snapshot {
    double t = 0.0;
    long window_shift = 0;
    std::vector<double> u1;
    std::vector<double> u2;
};

struct FrontProbe {
    double output_dt = 0.05;   // crossing-log cadence
    double dt_override = 0.0;  // 0 = stability-budget default
    int guard_periods = 5;     // minimum front distance from window edges
    double snapshot_start = -1.0; // capture full snapshots from this time on
    double snapshot_dt = 0.0;     // snapshot cadence (0 = same as output_dt)
    std::vector<double> dump_times; // write snap_t<t>.csv at these times
    std::string dump_dir;
};

struct RunResult {
    SystemState state;
    std::vector<CrossingSample> crossings;
    std::vector<Snapshot> snapshots;
    double dt = 0.0;
    std::int64_t steps = 0;
};

/// Integrates with the stability-budget dt until `horizon`, logging level-set
/// crossings at the probe cadence and recentering the window by whole
/// periods whenever the interface drifts more than one period off center.
/// Shifts are exact node copies; vacated nodes take the extinction values.
RunResult run_until_front(SystemState state, const SystemParams& params,
                          const Grid1D& grid, double horizon,
                          const FrontProbe& probe);

/// Shift fields by `shift_periods` whole periods (positive = window moves
/// right). Exposed for the recentering-exactness tests.
void shift_window(SystemState& state, const SystemParams& params,
                  const Grid1D& grid, long shift_periods);

/// Leftmost u1 = a1/2 crossing in window coordinates, or nullopt.
std::optional<double> crossing_down(const std::vector<double>& u, double level,
                                    const Grid1D& grid);
/// Rightmost u2 = a2/2 crossing in window coordinates, or nullopt.
std::optional<double> crossing_up_from_right(const std::vector<double>& u,
                                             double level, const Grid1D& grid);

/// Trapezoid integral of u1*u2 over [window_lo, window_hi].
double segregation_index(const SystemState& s, const Grid1D& grid,
                         double window_lo, double window_hi);

/// CSV snapshot with columns t,x,u1,u2,v_d (absolute x).
void dump_snapshot_csv(const SystemState& s, const SystemParams& p,
                       const Grid1D& grid, const std::string& path);

} // namespace pulsefront

#endif
