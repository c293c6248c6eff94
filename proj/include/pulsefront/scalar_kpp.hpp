#ifndef PULSEFRONT_SCALAR_KPP_HPP
#define PULSEFRONT_SCALAR_KPP_HPP

#include <functional>
#include <utility>
#include <vector>

#include "pulsefront/reaction.hpp"

namespace pulsefront {

/// Periodic principal-eigenvalue problem for the tilted operator
///   -delta u'' - 2 delta lambda u' - (delta lambda^2 + potential(x)) u
/// on one period with periodic boundary conditions.
struct EigenProblem {
    double diffusion = 1.0;                    // delta > 0
    std::function<double(double)> potential;   // L-periodic
    double period = 1.0;                       // L
    double wavenumber = 0.0;                   // lambda >= 0
    int grid_n = 512;                          // nodes per period, >= 16
};

struct EigenResult {
    double value = 0.0;
    std::vector<double> eigenfunction; // positive, max-normalized to 1
};

/// Principal eigenpair by shifted inverse power iteration on the
/// second-order periodic finite-difference matrix. The eigenfunction is the
/// Perron vector; second-order convergence in the grid spacing.
EigenResult principal_eigenvalue(const EigenProblem& p);

struct MinimalSpeedResult {
    double c_star = 0.0;     // minimal pulsating-front speed
    double lambda_opt = 0.0; // minimizing exponential tilt
    std::pair<double, double> bracket{0.0, 0.0}; // lambda search interval
};

/// Minimal front speed min_{lambda>0} (-principal eigenvalue)/lambda for the
/// scalar equation u_t = delta u_xx + u f(u, x), using f(0, .) as potential.
/// Golden-section search on log lambda in [1e-3, 1e3]; errors if the
/// minimizer pins to the bracket edge.
MinimalSpeedResult minimal_speed(const PeriodicReaction& r, double delta,
                                 int grid_n = 512);

/// (-c*[d, species2], +c*[1, species1]): every two-species front speed must
/// lie strictly inside this interval.
std::pair<double, double> speed_bracket(double d, const PeriodicReaction& r1,
                                        const PeriodicReaction& r2, int grid_n = 512);

} // namespace pulsefront

#endif
