#ifndef PULSEFRONT_FOURIER_HPP
#define PULSEFRONT_FOURIER_HPP

#include <cmath>
#include <vector>

namespace pulsefront {

/// Truncated real Fourier series on a period L:
///   g(x) = mean + sum_j cosine[j] cos(2 pi (j+1) x / L)
///               + sum_j sine[j]   sin(2 pi (j+1) x / L).
struct FourierSeries {
    double mean = 1.0;
    std::vector<double> cosine;
    std::vector<double> sine;
    double period = 1.0;

    double eval(double x) const {
        const double w = 2.0 * M_PI / period;
        double v = mean;
        for (std::size_t j = 0; j < cosine.size(); ++j)
            v += cosine[j] * std::cos(w * (j + 1.0) * x);
        for (std::size_t j = 0; j < sine.size(); ++j)
            v += sine[j] * std::sin(w * (j + 1.0) * x);
        return v;
    }

    double deriv(double x) const {
        const double w = 2.0 * M_PI / period;
        double v = 0.0;
        for (std::size_t j = 0; j < cosine.size(); ++j)
            v -= cosine[j] * w * (j + 1.0) * std::sin(w * (j + 1.0) * x);
        for (std::size_t j = 0; j < sine.size(); ++j)
            v += sine[j] * w * (j + 1.0) * std::cos(w * (j + 1.0) * x);
        return v;
    }

    /// Lower bound mean - sum |coefficients|; positive means g >> 0.
    double coef_l1() const {
        double s = 0.0;
        for (double c : cosine) s += std::abs(c);
        for (double c : sine) s += std::abs(c);
        return s;
    }
};

} // namespace pulsefront

#endif
