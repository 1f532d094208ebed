#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sysrisk {

/// Uniform grid on [start, end] with both endpoints included; index 0 is `start`.
struct TimeGrid {
    double start = 0.0;
    double end = 1.0;
    int n_steps = 1;

    double step() const { return (end - start) / n_steps; }
    int size() const { return n_steps + 1; }
    double at(int k) const { return k == n_steps ? end : start + k * step(); }

    /// Grid over [start, end] whose step is the largest value <= `max_step`.
    static TimeGrid with_max_step(double start, double end, double max_step) {
        if (!(max_step > 0.0) || !(end > start)) throw std::invalid_argument("TimeGrid: bad bounds");
        // 1e-9 slack so that T/dt landing a hair above an integer does not add a step
        const double n = std::ceil((end - start) / max_step - 1e-9);
        return TimeGrid{start, end, static_cast<int>(std::max(1.0, n))};
    }
};

/// Composite Simpson rule with `panels` panels (rounded up to even).
template <class F>
double simpson(F&& f, double lo, double hi, int panels) {
    if (hi == lo) return 0.0;
    if (panels < 2) panels = 2;
    if (panels % 2 != 0) ++panels;
    const double h = (hi - lo) / panels;
    double odd = 0.0;
    double even = 0.0;
    for (int k = 1; k < panels; ++k) {
        const double v = f(lo + k * h);
        if (k % 2 == 1) odd += v; else even += v;
    }
    return h / 3.0 * (f(lo) + 4.0 * odd + 2.0 * even + f(hi));
}

}  // namespace sysrisk
