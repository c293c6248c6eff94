#include "pulsefront/numerics.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pulsefront {

void solve_tridiagonal(const std::vector<double>& lower,
                       const std::vector<double>& diag,
                       const std::vector<double>& upper,
                       std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    if (n == 0) return;
    static thread_local std::vector<double> scratch;
    scratch.resize(n);
    double beta = diag[0];
    rhs[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        scratch[i] = upper[i - 1] / beta;
        beta = diag[i] - lower[i] * scratch[i];
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] -= scratch[i + 1] * rhs[i + 1];
    }
}

void solve_cyclic_tridiagonal(const std::vector<double>& lower,
                              const std::vector<double>& diag,
                              const std::vector<double>& upper,
                              std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    if (n < 3) throw std::invalid_argument("cyclic tridiagonal needs n >= 3");

    // Sherman-Morrison: A = B + u v^T with u = (gamma, 0, ..., alpha)^T,
    // v = (1, 0, ..., beta/gamma)^T chosen so B is plain tridiagonal.
    const double alpha = upper[n - 1]; // row n-1, column 0
    const double beta = lower[0];      // row 0, column n-1
    const double gamma = -diag[0];

    std::vector<double> d(diag);
    d[0] = diag[0] - gamma;
    d[n - 1] = diag[n - 1] - alpha * beta / gamma;

    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = alpha;

    solve_tridiagonal(lower, d, upper, rhs);
    solve_tridiagonal(lower, d, upper, u);

    const double vy = rhs[0] + beta / gamma * rhs[n - 1];
    const double vq = u[0] + beta / gamma * u[n - 1];
    const double factor = vy / (1.0 + vq);
    for (std::size_t i = 0; i < n; ++i) rhs[i] -= factor * u[i];
}

std::pair<double, double> golden_min(const std::function<double(double)>& f,
                                     double lo, double hi,
                                     double tol_x, int max_iter) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > tol_x; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

Quadrature gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1");
    Quadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[i] = -x;
        q.nodes[n - 1 - i] = x;
        q.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        q.weights[n - 1 - i] = q.weights[i];
    }
    return q;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    const Quadrature& q) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        acc += q.weights[i] * f(mid + half * q.nodes[i]);
    }
    return acc * half;
}

LineFit fit_line(const std::vector<double>& t, const std::vector<double>& y) {
    return fit_line_periodic(t, y, 1.0, 0);
}

void solve_dense(std::vector<double>& a, std::vector<double>& b, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
            std::swap(b[col], b[piv]);
        }
        const double d = a[col * n + col];
        if (d == 0.0) throw std::runtime_error("singular normal equations");
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / d;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= a[r * n + c] * b[c];
        b[r] = acc / a[r * n + r];
    }
}

LineFit fit_line_periodic(const std::vector<double>& t,
                          const std::vector<double>& y,
                          double period, int harmonics) {
    const std::size_t n = t.size();
    if (n != y.size() || n < 3)
        throw std::invalid_argument("fit_line_periodic: need >= 3 matched samples");
    if (harmonics > 0 && period <= 0.0)
        throw std::invalid_argument("fit_line_periodic: period must be positive");

    const int p = 2 + 2 * harmonics;
    if (static_cast<std::size_t>(p) + 1 > n)
        throw std::invalid_argument("fit_line_periodic: more parameters than samples");

    // Center t for conditioning.
    double tmean = 0.0;
    for (double v : t) tmean += v;
    tmean /= static_cast<double>(n);

    auto basis = [&](double ti, int j) -> double {
        if (j == 0) return 1.0;
        if (j == 1) return ti - tmean;
        const int h = (j - 2) / 2 + 1;
        const double arg = 2.0 * M_PI * h * ti / period;
        return (j % 2 == 0) ? std::sin(arg) : std::cos(arg);
    };

    std::vector<double> ata(static_cast<std::size_t>(p) * p, 0.0);
    std::vector<double> atb(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (int r = 0; r < p; ++r) {
            const double br = basis(t[i], r);
            atb[r] += br * y[i];
            for (int c = 0; c < p; ++c) ata[r * p + c] += br * basis(t[i], c);
        }
    }
    std::vector<double> ata_copy(ata);
    std::vector<double> coef(atb);
    solve_dense(ata_copy, coef, p);

    double ss_res = 0.0;
    double stt = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double pred = 0.0;
        for (int r = 0; r < p; ++r) pred += coef[r] * basis(t[i], r);
        const double res = y[i] - pred;
        ss_res += res * res;
        const double dt = t[i] - tmean;
        stt += dt * dt;
    }
    LineFit out;
    out.slope = coef[1];
    out.intercept = coef[0] - coef[1] * tmean;
    out.rms_residual = std::sqrt(ss_res / static_cast<double>(n));
    const double dof = static_cast<double>(n) - p;
    out.slope_stderr = (dof > 0 && stt > 0) ? std::sqrt(ss_res / dof / stt) : 0.0;
    return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace pulsefront
