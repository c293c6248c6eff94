#ifndef PULSEFRONT_GRID_HPP
#define PULSEFRONT_GRID_HPP

#include <stdexcept>

namespace pulsefront {

/// Uniform 1-D grid covering an integer number of coefficient periods, with
/// the spacing an exact divisor of the period so whole-period shifts land on
/// grid nodes.
struct Grid1D {
    double x0 = 0.0;
    double dx = 0.0;
    int n = 0;                 // node count, periods*nodes_per_period + 1
    int periods = 0;
    int nodes_per_period = 0;
    double period = 1.0;       // L

    static Grid1D make(double L, int nodes_per_period, int periods, double x0 = 0.0) {
        if (nodes_per_period < 64)
            throw std::invalid_argument("nodes_per_period must be >= 64");
        if (periods < 1) throw std::invalid_argument("periods must be >= 1");
        if (L <= 0.0) throw std::invalid_argument("period must be positive");
        Grid1D g;
        g.x0 = x0;
        g.period = L;
        g.nodes_per_period = nodes_per_period;
        g.periods = periods;
        g.dx = L / nodes_per_period;
        g.n = periods * nodes_per_period + 1;
        return g;
    }

    double x(int j) const { return x0 + j * dx; }
    double length() const { return periods * period; }
    double x_end() const { return x0 + length(); }
};

} // namespace pulsefront

#endif
