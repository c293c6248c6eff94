// Timing harness comparing the serial reference kernels against the OpenMP
// variants, and checking that they agree bitwise.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include <omp.h>

#include "pulsefront/fourier.hpp"
#include "pulsefront/grid.hpp"
#include "pulsefront/kernels.hpp"
#include "pulsefront/reaction.hpp"
#include "pulsefront/system_sim.hpp"

using namespace pulsefront;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now_ms();
        f();
        best = std::min(best, now_ms() - t0);
    }
    return best;
}

} // namespace

int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 1 << 20;
    int iters = argc > 2 ? std::atoi(argv[2]) : 50;

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    std::vector<double> u1(n), u2(n), rate1(n), rate2(n);
    std::vector<double> s1(n), s2(n), p1(n), p2(n);
    for (int j = 0; j < n; ++j) {
        u1[j] = uni(rng);
        u2[j] = uni(rng);
        rate1[j] = 1.0 + 0.5 * uni(rng);
        rate2[j] = 1.0 + 0.5 * uni(rng);
    }

    kernels::LogisticStage st{rate1.data(), rate2.data(), 1.0, 1.0, 200.0, 2.0, 1e-3};

    const double t_serial = time_best_of(5, [&] {
        for (int i = 0; i < iters; ++i)
            kernels::logistic_stage_serial(st, u1.data(), u2.data(), s1.data(),
                                           s2.data(), n);
    });
    const double t_omp = time_best_of(5, [&] {
        for (int i = 0; i < iters; ++i)
            kernels::logistic_stage_omp(st, u1.data(), u2.data(), p1.data(), p2.data(),
                                        n);
    });

    long mismatches = 0;
    for (int j = 0; j < n; ++j) {
        if (s1[j] != p1[j] || s2[j] != p2[j]) ++mismatches;
    }

    std::printf("threads              : %d\n", omp_get_max_threads());
    std::printf("nodes x iters        : %d x %d\n", n, iters);
    std::printf("explicit stage serial: %9.3f ms\n", t_serial);
    std::printf("explicit stage OpenMP: %9.3f ms  (speedup %.2fx)\n", t_omp,
                t_serial / t_omp);
    std::printf("bitwise mismatches   : %ld\n", mismatches);

    // Full IMEX step through the public stepper, both paths. The grid sits
    // above the stepper's parallel-grain threshold so the comparison shows
    // the regime where the OpenMP path engages.
    {
        LogisticReaction l1{FourierSeries{1.0, {}, {0.4}, 1.0}, 1.0};
        LogisticReaction l2{FourierSeries{1.0, {0.3}, {}, 1.0}, 1.0};
        const Grid1D grid = Grid1D::make(1.0, 256, 128);
        SystemParams params;
        params.d = 2.0;
        params.alpha = 1.5;
        params.k = 200.0;
        params.r1 = l1.to_reaction();
        params.r2 = l2.to_reaction();

        SystemState base = initial_front(grid, 1.0, 1.0, 64.0, 1.0);
        const double dt = params.stable_dt();

        SystemState a = base;
        params.parallel = false;
        Stepper serial(params, grid);
        const double t_step_serial = time_best_of(3, [&] {
            for (int i = 0; i < 200; ++i) serial.advance(a, dt);
        });

        SystemState b = base;
        params.parallel = true;
        Stepper parallel(params, grid);
        const double t_step_omp = time_best_of(3, [&] {
            for (int i = 0; i < 200; ++i) parallel.advance(b, dt);
        });

        std::printf("IMEX step serial     : %9.3f ms / 200 steps\n", t_step_serial);
        std::printf("IMEX step OpenMP     : %9.3f ms / 200 steps (speedup %.2fx)\n",
                    t_step_omp, t_step_serial / t_step_omp);
    }
    return mismatches == 0 ? 0 : 1;
}
