#ifndef PULSEFRONT_NUMERICS_HPP
#define PULSEFRONT_NUMERICS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace pulsefront {

/// Solves a tridiagonal system in place (Thomas algorithm).
/// `lower[i]` multiplies x[i-1], `diag[i]` x[i], `upper[i]` x[i+1].
/// `rhs` is overwritten with the solution. Requires a diagonally dominant
/// (or otherwise LU-stable without pivoting) matrix.
void solve_tridiagonal(const std::vector<double>& lower,
                       const std::vector<double>& diag,
                       const std::vector<double>& upper,
                       std::vector<double>& rhs);

/// Solves a periodic (cyclic) tridiagonal system: same layout as
/// solve_tridiagonal plus corner entries lower[0]*x[n-1] in row 0 and
/// upper[n-1]*x[0] in row n-1. Sherman-Morrison on top of Thomas.
void solve_cyclic_tridiagonal(const std::vector<double>& lower,
                              const std::vector<double>& diag,
                              const std::vector<double>& upper,
                              std::vector<double>& rhs);

/// Golden-section minimizer for a unimodal function on [lo, hi].
/// Returns (argmin, min). Stops when the bracket is narrower than tol_x.
std::pair<double, double> golden_min(const std::function<double(double)>& f,
                                     double lo, double hi,
                                     double tol_x, int max_iter = 200);

struct Quadrature {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre polynomial from Chebyshev initial guesses.
Quadrature gauss_legendre(int n);

/// Integrates f over [a, b] with an n-point Gauss-Legendre rule.
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    const Quadrature& q);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double rms_residual = 0.0;
};

/// Ordinary least squares y ~ intercept + slope * t.
LineFit fit_line(const std::vector<double>& t, const std::vector<double>& y);

/// Least squares y ~ intercept + slope*t + sum_h p_h sin(2 pi h t / period)
///                                        + q_h cos(2 pi h t / period).
/// Harmonic terms absorb a periodic residual so the slope is unbiased on
/// windows spanning whole periods. `harmonics` = 0 reduces to fit_line.
LineFit fit_line_periodic(const std::vector<double>& t,
                          const std::vector<double>& y,
                          double period, int harmonics);

/// Dense Gaussian elimination with partial pivoting for the small normal
/// systems used by fit_line_periodic. a is row-major n x n, overwritten.
void solve_dense(std::vector<double>& a, std::vector<double>& b, int n);

/// 64-bit FNV-1a digest, used to stamp outputs with their config content.
std::uint64_t fnv1a64(const std::string& bytes);

} // namespace pulsefront

#endif
