#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cstarmod/algebra.hpp"
#include "cstarmod/grid.hpp"
#include "cstarmod/report.hpp"
#include "cstarmod/sampler.hpp"

namespace cstarmod {

using GridFunction = std::vector<double>;

/// Carrier point: a scalar or a sampled function on a grid. All points fed
/// to one metric must share the same variant and shape.
using Point = std::variant<double, GridFunction>;

bool points_equal(const Point& x, const Point& y, double tol = 1e-12);
std::string format_point(const Point& p);
double point_sup_distance(const Point& x, const Point& y);

enum class MetricClass { modular, pseudo, strict, convex_modular };

std::string to_string(MetricClass c);

/// Rate-indexed distance with values in the positive cone of the context
/// algebra. The evaluator must be pure; output positivity is itself checked,
/// not assumed.
struct ModularMetric {
    std::function<AlgebraElement(double, const Point&, const Point&)> evaluator;
    AlgebraContext ctx;
    MetricClass claimed_class = MetricClass::modular;
    std::function<Point(Sampler&)> point_sampler;
    std::string name;

    AlgebraElement operator()(double lambda, const Point& x, const Point& y) const;
};

/// Scalar carrier, 2x2 diagonal |x-y|/rate in both slots, frobenius norm.
ModularMetric make_example_4_1();
/// Carrier {c^-n}, diagonal (|x-y|/rate, alpha |x-y|/rate); 0 < c < 1.
ModularMetric make_example_4_2(double c, double alpha);
/// Grid-function carrier; diagonal multiplication operator |f-g|/rate with
/// operator norm, so the metric norm is the discretized sup norm.
ModularMetric make_multiplication_modular(const GridDomain& grid);

/// Sampling verification of the axioms selected by claimed_class, plus the
/// checked positivity of the evaluator output. Violations carry the witness
/// tuple and the most negative eigenvalue/entry of the defect.
std::vector<CheckResult> check_axioms(const ModularMetric& metric, Sampler& sampler,
                                      std::size_t n_samples);

/// For sampled 0 < mu < lambda, the value at lambda must sit below the value
/// at mu in the context order.
CheckResult check_lambda_monotonicity(const ModularMetric& metric, Sampler& sampler,
                                      std::size_t n_samples);

/// inf{rate > 0 : ||metric(rate, x, y)|| <= rate}, located by bisection.
/// Requires rate-monotonicity of the metric on (x, y).
double d0_distance(const ModularMetric& metric, const Point& x, const Point& y);
/// inf{rate > 0 : ||metric(rate, x, y)|| <= 1}.
double dstar_distance(const ModularMetric& metric, const Point& x, const Point& y);

struct SequenceReport {
    bool convergent = false;
    bool cauchy = false;
    double bounded_diameter = 0.0;
};

/// Tail behaviour of a sequence: convergence to a supplied limit, the Cauchy
/// property on tail pairs, and the diameter sup over the whole sequence.
/// tail = 0 examines the full sequence.
SequenceReport check_sequence(const ModularMetric& metric, const std::vector<Point>& seq,
                              const std::optional<Point>& limit,
                              const std::vector<double>& lambda_set, double tol,
                              std::size_t tail = 0);

/// Approximate membership in the modular space around base: probes the
/// rate -> infinity limit at the single rate 1e6.
bool in_modular_space(const ModularMetric& metric, const Point& x, const Point& base,
                      double tol = 1e-4);

} // namespace cstarmod
