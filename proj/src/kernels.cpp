#include "pulsefront/kernels.hpp"

namespace pulsefront::kernels {

void logistic_stage_serial(const LogisticStage& s, const double* u1, const double* u2,
                           double* out1, double* out2, int n) {
    for (int j = 0; j < n; ++j) logistic_node(s, u1, u2, out1, out2, j);
}

void logistic_stage_omp(const LogisticStage& s, const double* u1, const double* u2,
                        double* out1, double* out2, int n) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) logistic_node(s, u1, u2, out1, out2, j);
}

namespace {
inline void generic_node(const GenericStage& s, const double* u1, const double* u2,
                         double* out1, double* out2, int j) {
    const double v1 = u1[j];
    const double v2 = u2[j];
    const double x = s.x[j];
    out1[j] = v1 + s.dt * (v1 * (*s.f1)(v1, x) - s.k * v1 * v2);
    out2[j] = v2 + s.dt * (v2 * (*s.f2)(v2, x) - s.alpha * s.k * v1 * v2);
}
} // namespace

void generic_stage_serial(const GenericStage& s, const double* u1, const double* u2,
                          double* out1, double* out2, int n) {
    for (int j = 0; j < n; ++j) generic_node(s, u1, u2, out1, out2, j);
}

void generic_stage_omp(const GenericStage& s, const double* u1, const double* u2,
                       double* out1, double* out2, int n) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) generic_node(s, u1, u2, out1, out2, j);
}

std::int64_t clamp_box(std::vector<double>& u, double cap, double eps) {
    std::int64_t events = 0;
    const int n = static_cast<int>(u.size());
    for (int j = 0; j < n; ++j) {
        if (u[j] < 0.0) {
            if (u[j] < -eps) ++events;
            u[j] = 0.0;
        } else if (u[j] > cap) {
            if (u[j] > cap + eps) ++events;
            u[j] = cap;
        }
    }
    return events;
}

} // namespace pulsefront::kernels
