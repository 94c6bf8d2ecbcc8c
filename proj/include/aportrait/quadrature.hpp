#pragma once

#include <cmath>

namespace aportrait::quad {

// Panel count used for trajectory integrals: at least 64, growing with the
// window length so long windows keep per-panel resolution.
inline int panels_for_span(double span) {
    const double scaled = std::ceil(64.0 * span);
    return scaled > 64.0 ? static_cast<int>(scaled) : 64;
}

// Composite Simpson rule with `panels` panels (2*panels+1 evaluations).
template <typename F>
double simpson(double a, double b, int panels, F&& f) {
    const double h = (b - a) / (2.0 * panels);
    double odd = 0, even = 0;
    for (int i = 1; i < 2 * panels; i += 2) odd += f(a + i * h);
    for (int i = 2; i < 2 * panels; i += 2) even += f(a + i * h);
    return (h / 3.0) * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

}  // namespace aportrait::quad
