#include "pulsefront/system_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "pulsefront/errors.hpp"
#include "pulsefront/kernels.hpp"
#include "pulsefront/numerics.hpp"

namespace pulsefront {

double SystemParams::stable_dt() const {
    const double comp = k * std::max(alpha * a1(), a2());
    const double growth = std::max(r1.m_max, r2.m_max);
    return 0.5 / (comp + growth);
}

CombinedFields combine_fields(const SystemState& s, const SystemParams& p) {
    CombinedFields f;
    const std::size_t n = s.u1.size();
    f.v_d.resize(n);
    f.v_1.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        f.v_d[j] = p.alpha * s.u1[j] - p.d * s.u2[j];
        f.v_1[j] = p.alpha * s.u1[j] - s.u2[j];
    }
    return f;
}

SystemState initial_front(const Grid1D& grid, double a1, double a2,
                          double interface_x, double width) {
    if (width <= 0.0) throw std::invalid_argument("interface width must be positive");
    if (interface_x <= grid.x0 || interface_x >= grid.x_end())
        throw std::invalid_argument("interface_x outside the domain");
    SystemState s;
    s.u1.resize(grid.n);
    s.u2.resize(grid.n);
    auto sigmoid = [](double y) {
        if (y > 40.0) return 1.0;
        if (y < -40.0) return 0.0;
        return 1.0 / (1.0 + std::exp(-y));
    };
    for (int j = 0; j < grid.n; ++j) {
        const double x = grid.x(j);
        s.u1[j] = a1 * sigmoid((interface_x - x) / width);
        s.u2[j] = a2 * sigmoid((x - interface_x) / width);
    }
    return s;
}

namespace {

/// Implicit Neumann diffusion solve: (I - dt*delta*D2) u = rhs, mirrored
/// ghost nodes at both ends.
void diffuse_implicit(std::vector<double>& u, double delta, double dt, double dx) {
    const int n = static_cast<int>(u.size());
    const double r = delta * dt / (dx * dx);
    static thread_local std::vector<double> lower, diag, upper;
    lower.assign(n, -r);
    upper.assign(n, -r);
    diag.assign(n, 1.0 + 2.0 * r);
    upper[0] = -2.0 * r;
    lower[n - 1] = -2.0 * r;
    solve_tridiagonal(lower, diag, upper, u);
}

/// Per-run caches: sampled growth rates (logistic fast path) or node
/// coordinates (generic path), plus the double-buffered fields. Rates in
/// window coordinates survive whole-period shifts because the medium is
/// L-periodic.
struct StepWorkspace {
    std::vector<double> rate1, rate2;
    std::vector<double> xs;
    std::vector<double> out1, out2;
    bool fast = false;

    void prepare(const SystemParams& p, const Grid1D& grid) {
        out1.resize(grid.n);
        out2.resize(grid.n);
        fast = p.r1.logistic && p.r2.logistic;
        if (fast) {
            rate1.resize(grid.n);
            rate2.resize(grid.n);
            for (int j = 0; j < grid.n; ++j) {
                const double x = grid.x(j);
                rate1[j] = p.r1.logistic->scale * p.r1.logistic->mu.eval(x);
                rate2[j] = p.r2.logistic->scale * p.r2.logistic->mu.eval(x);
            }
        } else {
            xs.resize(grid.n);
            for (int j = 0; j < grid.n; ++j) xs[j] = grid.x(j);
        }
    }
};

/// Below this many nodes the fork/join cost of a parallel region outweighs
/// the per-step work; see the benchmark target.
constexpr int kParallelGrainNodes = 32768;

void step_impl(SystemState& state, const SystemParams& params, const Grid1D& grid,
               double dt, StepWorkspace& ws) {
    const int n = grid.n;
    const bool par = params.parallel && n >= kParallelGrainNodes;
    if (ws.fast) {
        kernels::LogisticStage st{ws.rate1.data(), ws.rate2.data(),
                                  params.r1.logistic->a, params.r2.logistic->a,
                                  params.k, params.alpha, dt};
        if (par)
            kernels::logistic_stage_omp(st, state.u1.data(), state.u2.data(),
                                        ws.out1.data(), ws.out2.data(), n);
        else
            kernels::logistic_stage_serial(st, state.u1.data(), state.u2.data(),
                                           ws.out1.data(), ws.out2.data(), n);
    } else {
        kernels::GenericStage st{&params.r1.eval, &params.r2.eval, ws.xs.data(),
                                 params.k, params.alpha, dt};
        if (par)
            kernels::generic_stage_omp(st, state.u1.data(), state.u2.data(),
                                       ws.out1.data(), ws.out2.data(), n);
        else
            kernels::generic_stage_serial(st, state.u1.data(), state.u2.data(),
                                          ws.out1.data(), ws.out2.data(), n);
    }

    state.u1.swap(ws.out1);
    state.u2.swap(ws.out2);

    // The implicit solves are independent between the species.
    const double eps = 1e-8;
    std::int64_t ev1 = 0, ev2 = 0;
    if (par) {
#pragma omp parallel sections
        {
#pragma omp section
            {
                diffuse_implicit(state.u1, 1.0, dt, grid.dx);
                ev1 = kernels::clamp_box(state.u1, params.a1(), eps);
            }
#pragma omp section
            {
                diffuse_implicit(state.u2, params.d, dt, grid.dx);
                ev2 = kernels::clamp_box(state.u2, params.a2(), eps);
            }
        }
    } else {
        diffuse_implicit(state.u1, 1.0, dt, grid.dx);
        ev1 = kernels::clamp_box(state.u1, params.a1(), eps);
        diffuse_implicit(state.u2, params.d, dt, grid.dx);
        ev2 = kernels::clamp_box(state.u2, params.a2(), eps);
    }
    state.clamp_events += ev1 + ev2;
    state.t += dt;
}

} // namespace

struct Stepper::Workspace : StepWorkspace {};

Stepper::Stepper(const SystemParams& params, const Grid1D& grid)
    : params_(params), grid_(grid), ws_(std::make_unique<Workspace>()) {
    ws_->prepare(params_, grid_);
}

Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;
Stepper& Stepper::operator=(Stepper&&) noexcept = default;

void Stepper::advance(SystemState& state, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
    if (dt > params_.stable_dt() * (1.0 + 1e-12))
        throw std::invalid_argument("dt exceeds the explicit-stage stability budget");
    if (static_cast<int>(state.u1.size()) != grid_.n)
        throw std::invalid_argument("state/grid size mismatch");
    step_impl(state, params_, grid_, dt, *ws_);
}

void step(SystemState& state, const SystemParams& params, const Grid1D& grid,
          double dt) {
    Stepper(params, grid).advance(state, dt);
}

std::optional<double> crossing_down(const std::vector<double>& u, double level,
                                    const Grid1D& grid) {
    for (int j = 0; j + 1 < grid.n; ++j) {
        if (u[j] >= level && u[j + 1] < level) {
            const double frac = (u[j] - level) / (u[j] - u[j + 1]);
            return grid.x(j) + frac * grid.dx;
        }
    }
    return std::nullopt;
}

std::optional<double> crossing_up_from_right(const std::vector<double>& u,
                                             double level, const Grid1D& grid) {
    for (int j = grid.n - 1; j > 0; --j) {
        if (u[j] >= level && u[j - 1] < level) {
            const double frac = (u[j] - level) / (u[j] - u[j - 1]);
            return grid.x(j) - frac * grid.dx;
        }
    }
    return std::nullopt;
}

double segregation_index(const SystemState& s, const Grid1D& grid,
                         double window_lo, double window_hi) {
    if (window_lo < grid.x0 - 1e-12 || window_hi > grid.x_end() + 1e-12 ||
        window_lo >= window_hi)
        throw std::invalid_argument("segregation window outside the domain");
    const int j0 = std::max(0, static_cast<int>(std::ceil((window_lo - grid.x0) / grid.dx)));
    const int j1 = std::min(grid.n - 1,
                            static_cast<int>(std::floor((window_hi - grid.x0) / grid.dx)));
    double acc = 0.0;
    for (int j = j0; j < j1; ++j)
        acc += 0.5 * (s.u1[j] * s.u2[j] + s.u1[j + 1] * s.u2[j + 1]) * grid.dx;
    return acc;
}

void shift_window(SystemState& state, const SystemParams& params,
                  const Grid1D& grid, long shift_periods) {
    if (shift_periods == 0) return;
    const int m = static_cast<int>(shift_periods) * grid.nodes_per_period;
    const int n = grid.n;
    std::vector<double> nu1(n), nu2(n);
    for (int j = 0; j < n; ++j) {
        const int src = j + m;
        if (src >= 0 && src < n) {
            nu1[j] = state.u1[src];
            nu2[j] = state.u2[src];
        } else if (src >= n) {
            // window moved right; incoming nodes sit in species-2 territory
            nu1[j] = 0.0;
            nu2[j] = params.a2();
        } else {
            nu1[j] = params.a1();
            nu2[j] = 0.0;
        }
    }
    state.u1.swap(nu1);
    state.u2.swap(nu2);
    state.window_shift += shift_periods;
}

RunResult run_until_front(SystemState state, const SystemParams& params,
                          const Grid1D& grid, double horizon,
                          const FrontProbe& probe) {
    if (static_cast<int>(state.u1.size()) != grid.n)
        throw std::invalid_argument("state/grid size mismatch");
    RunResult res;
    double dt = params.stable_dt();
    if (probe.dt_override > 0.0) {
        if (probe.dt_override > dt * (1.0 + 1e-12))
            throw std::invalid_argument("dt override exceeds the stability budget");
        dt = probe.dt_override;
    }
    const long steps_total = static_cast<long>(std::ceil(horizon / dt));
    const long out_every = std::max(1L, static_cast<long>(std::floor(probe.output_dt / dt)));
    const double snap_dt = probe.snapshot_dt > 0.0 ? probe.snapshot_dt : probe.output_dt;
    const long snap_every = std::max(1L, static_cast<long>(std::floor(snap_dt / dt)));
    const double guard = probe.guard_periods * grid.period;
    if (2.0 * guard + 2.0 * grid.period >= grid.length())
        throw std::invalid_argument("window too short for the guard bands");
    std::size_t next_dump = 0;

    Stepper stepper(params, grid);

    auto observe = [&]() {
        const double a1 = params.a1();
        const double a2 = params.a2();
        for (int j = 0; j < grid.n; ++j) {
            if (!std::isfinite(state.u1[j]) || !std::isfinite(state.u2[j]))
                throw BlowupError("non-finite field", state.t);
        }
        auto c1 = crossing_down(state.u1, a1 / 2.0, grid);
        auto c2 = crossing_up_from_right(state.u2, a2 / 2.0, grid);
        if (!c1 || !c2)
            throw WindowOverflowError("interface left the window at t=" +
                                      std::to_string(state.t));
        const double mid = 0.5 * (*c1 + *c2);
        if (mid - grid.x0 < guard || grid.x_end() - mid < guard)
            throw WindowOverflowError("interface reached the guard band at t=" +
                                      std::to_string(state.t));

        CrossingSample cs;
        cs.t = state.t;
        cs.x1 = *c1 + state.window_shift * grid.period;
        cs.x2 = *c2 + state.window_shift * grid.period;
        cs.seg_index = segregation_index(state, grid, grid.x0, grid.x_end());
        res.crossings.push_back(cs);

        // Recenter by whole periods once the interface drifts off center.
        const double center = grid.x0 + 0.5 * grid.length();
        const double drift = mid - center;
        if (std::abs(drift) >= grid.period) {
            const long shift = static_cast<long>(std::trunc(drift / grid.period));
            shift_window(state, params, grid, shift);
        }
    };

    auto maybe_dump = [&](double t_prev, double t_now) {
        while (next_dump < probe.dump_times.size() &&
               probe.dump_times[next_dump] <= t_now) {
            if (probe.dump_times[next_dump] > t_prev && !probe.dump_dir.empty()) {
                char name[64];
                std::snprintf(name, sizeof(name), "snap_t%g.csv",
                              probe.dump_times[next_dump]);
                dump_snapshot_csv(state, params, grid, probe.dump_dir + "/" + name);
            }
            ++next_dump;
        }
    };

    maybe_dump(-1.0, state.t); // dumps requested at or before the start time
    observe();
    for (long s = 1; s <= steps_total; ++s) {
        const double t_prev = state.t;
        stepper.advance(state, dt);
        if (s % out_every == 0 || s == steps_total) observe();
        if (probe.snapshot_start >= 0.0 && state.t >= probe.snapshot_start &&
            s % snap_every == 0) {
            res.snapshots.push_back({state.t, state.window_shift, state.u1, state.u2});
        }
        maybe_dump(t_prev, state.t);
    }

    res.dt = dt;
    res.steps = steps_total;
    res.state = std::move(state);
    return res;
}

void dump_snapshot_csv(const SystemState& s, const SystemParams& p,
                       const Grid1D& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path);
    out << "t,x,u1,u2,v_d\n";
    char line[160];
    for (int j = 0; j < grid.n; ++j) {
        const double x = grid.x(j) + s.window_shift * grid.period;
        const double vd = p.alpha * s.u1[j] - p.d * s.u2[j];
        std::snprintf(line, sizeof(line), "%.10g,%.10g,%.10g,%.10g,%.10g\n", s.t, x,
                      s.u1[j], s.u2[j], vd);
        out << line;
    }
}

} // namespace pulsefront
