#include "cstarmod/grid.hpp"

#include <cmath>
#include <string>

#include "cstarmod/errors.hpp"

namespace cstarmod {

namespace {

std::vector<double> blend_nodes(double lo, double hi, std::size_t n) {
    const double N = static_cast<double>(n - 1);
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = ((N - static_cast<double>(i)) * lo + static_cast<double>(i) * hi) / N;
    }
    return pts;
}

} // namespace

GridDomain GridDomain::uniform_trapezoid(double lo, double hi, std::size_t n) {
    if (n < 2) throw ConfigError("GridDomain: need at least 2 nodes");
    if (!(lo < hi)) throw ConfigError("GridDomain: lo must be < hi");
    GridDomain g;
    g.lo = lo;
    g.hi = hi;
    g.points = blend_nodes(lo, hi, n);
    const double h = (hi - lo) / static_cast<double>(n - 1);
    g.weights.assign(n, h);
    g.weights.front() = 0.5 * h;
    g.weights.back() = 0.5 * h;
    return g;
}

GridDomain GridDomain::uniform_simpson(double lo, double hi, std::size_t n) {
    if (n < 3 || n % 2 == 0) throw ConfigError("GridDomain: Simpson weights need odd n >= 3");
    if (!(lo < hi)) throw ConfigError("GridDomain: lo must be < hi");
    GridDomain g;
    g.lo = lo;
    g.hi = hi;
    g.points = blend_nodes(lo, hi, n);
    const double h = (hi - lo) / static_cast<double>(n - 1);
    g.weights.assign(n, 0.0);
    for (std::size_t i = 0; i + 2 < n; i += 2) {
        g.weights[i] += h / 3.0;
        g.weights[i + 1] += 4.0 * h / 3.0;
        g.weights[i + 2] += h / 3.0;
    }
    return g;
}

void GridDomain::validate() const {
    if (points.size() < 2) throw ConfigError("GridDomain: need at least 2 nodes");
    if (points.size() != weights.size()) throw ShapeError("GridDomain: points/weights size mismatch");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw ConfigError("GridDomain: weights must be positive");
        sum += w;
    }
    const double span = hi - lo;
    if (std::abs(sum - span) > 1e-12 * std::max(1.0, std::abs(span))) {
        throw ConfigError("GridDomain: weights sum to " + std::to_string(sum) +
                          ", expected " + std::to_string(span));
    }
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i] > points[i - 1])) throw ConfigError("GridDomain: nodes must be ascending");
    }
}

std::vector<double> make_scan_grid(double lo, double hi, double step) {
    if (!(lo < hi)) throw ConfigError("make_scan_grid: lo must be < hi");
    if (!(step > 0.0)) throw ConfigError("make_scan_grid: step must be > 0");
    const auto count = static_cast<std::size_t>(std::llround((hi - lo) / step));
    const std::size_t n = std::max<std::size_t>(count, 1) + 1;
    return blend_nodes(lo, hi, n);
}

} // namespace cstarmod
