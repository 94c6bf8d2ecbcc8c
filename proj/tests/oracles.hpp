#pragma once

// Test-only oracles, independent of the library's eigen implementation.

#include <algorithm>
#include <array>
#include <complex>
#include <random>
#include <stdexcept>

#include "aportrait/linalg.hpp"

namespace aportrait::testing {

inline Mat random_matrix(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    Mat m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = u(rng);
    return m;
}

// The characteristic cubic always has a real root inside the Cauchy bound;
// bisection isolates it, synthetic division leaves a quadratic solved by the
// stable formula.
inline std::array<std::complex<double>, 3> bisection_oracle(const Mat& M) {
    const double c2 = M.trace();
    const double c1 = (M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0)) +
                      (M(0, 0) * M(2, 2) - M(0, 2) * M(2, 0)) +
                      (M(1, 1) * M(2, 2) - M(1, 2) * M(2, 1));
    const double c0 = M.det();
    auto p = [&](double x) { return ((x - c2) * x + c1) * x - c0; };

    const double R = 1.0 + std::max({std::fabs(c2), std::fabs(c1), std::fabs(c0)});
    double lo = -R, hi = R;
    if (!(p(lo) < 0 && p(hi) > 0)) throw std::logic_error("Cauchy bound does not bracket");
    for (int it = 0; it < 200 && hi - lo > 1e-15 * R; ++it) {
        const double mid = 0.5 * (lo + hi);
        (p(mid) < 0 ? lo : hi) = mid;
    }
    const double r = 0.5 * (lo + hi);

    const double b = r - c2;
    const double c = c1 + r * b;
    const double disc = b * b - 4 * c;
    std::array<std::complex<double>, 3> roots;
    roots[0] = r;
    if (disc >= 0) {
        const double s = std::sqrt(disc);
        const double q = (b >= 0) ? -0.5 * (b + s) : -0.5 * (b - s);
        roots[1] = q;
        roots[2] = (q != 0.0) ? c / q : -0.5 * (b - s);
    } else {
        roots[1] = std::complex<double>(-b / 2, std::sqrt(-disc) / 2);
        roots[2] = std::conj(roots[1]);
    }
    std::sort(roots.begin(), roots.end(), [](auto a, auto b2) {
        return a.real() != b2.real() ? a.real() > b2.real() : a.imag() > b2.imag();
    });
    return roots;
}

}  // namespace aportrait::testing
