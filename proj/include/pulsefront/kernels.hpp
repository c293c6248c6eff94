#ifndef PULSEFRONT_KERNELS_HPP
#define PULSEFRONT_KERNELS_HPP

#include <cstdint>
#include <functional>
#include <vector>

namespace pulsefront::kernels {

/// Per-node explicit update shared by the serial reference and the OpenMP
/// kernel, so the two cannot drift apart. Growth factors are sampled per
/// node: f_i(u, x_j) = rate_i[j] * (a_i - u) on the logistic fast path.
struct LogisticStage {
    const double* rate1;
    const double* rate2;
    double a1, a2;
    double k, alpha, dt;
};

inline void logistic_node(const LogisticStage& s, const double* u1, const double* u2,
                          double* out1, double* out2, int j) {
    const double v1 = u1[j];
    const double v2 = u2[j];
    out1[j] = v1 + s.dt * (v1 * (s.rate1[j] * (s.a1 - v1)) - s.k * v1 * v2);
    out2[j] = v2 + s.dt * (v2 * (s.rate2[j] * (s.a2 - v2)) - s.alpha * s.k * v1 * v2);
}

/// Reference implementation, kept for equivalence tests and benchmarking.
void logistic_stage_serial(const LogisticStage& s, const double* u1, const double* u2,
                           double* out1, double* out2, int n);

/// OpenMP variant used by the production stepper. Bitwise identical to the
/// serial reference: the per-node arithmetic is shared and order-independent.
void logistic_stage_omp(const LogisticStage& s, const double* u1, const double* u2,
                        double* out1, double* out2, int n);

/// Generic explicit stage for closures f_i(u, x); x passed per node.
struct GenericStage {
    const std::function<double(double, double)>* f1;
    const std::function<double(double, double)>* f2;
    const double* x;
    double k, alpha, dt;
};

void generic_stage_serial(const GenericStage& s, const double* u1, const double* u2,
                          double* out1, double* out2, int n);
void generic_stage_omp(const GenericStage& s, const double* u1, const double* u2,
                       double* out1, double* out2, int n);

/// Clamp fields into [0, cap + eps] in place; returns the number of nodes
/// whose undershoot/overshoot exceeded `eps`. Serial: the caller already
/// parallelizes across species.
std::int64_t clamp_box(std::vector<double>& u, double cap, double eps);

} // namespace pulsefront::kernels

#endif
