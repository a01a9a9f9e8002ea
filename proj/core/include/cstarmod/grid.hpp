#pragma once

#include <cstddef>
#include <vector>

namespace cstarmod {

/// Closed-interval quadrature grid: ascending nodes plus positive weights
/// summing to the interval length.
struct GridDomain {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> points;
    std::vector<double> weights;

    static GridDomain uniform_trapezoid(double lo, double hi, std::size_t n);
    /// Composite Simpson weights; n must be odd and >= 3.
    static GridDomain uniform_simpson(double lo, double hi, std::size_t n);

    std::size_t size() const { return points.size(); }
    void validate() const;
};

/// Evenly spaced scan nodes on [lo, hi]. Nodes are computed as exact integer
/// blends ((N-i)*lo + i*hi)/N so representable rational targets are hit
/// exactly; the effective step is (hi-lo)/N for N = round((hi-lo)/step).
std::vector<double> make_scan_grid(double lo, double hi, double step);

} // namespace cstarmod
