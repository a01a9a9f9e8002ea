#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cstarmod/cstar_class.hpp"
#include "cstarmod/modular_metric.hpp"

namespace cstarmod {

struct SelfMap {
    std::function<Point(const Point&)> evaluator;
    std::string name;

    Point operator()(const Point& p) const { return evaluator(p); }
};

SelfMap identity_map();
SelfMap constant_map(double value);
/// x -> slope * x + offset on scalar carriers.
SelfMap affine_map(double slope, double offset);
SelfMap compose(const SelfMap& outer, const SelfMap& inner);

/// The hypotheses bundle: six self-maps, three coefficients, a monotone
/// triple, and the metric everything is measured in. The coefficient budget
/// 0 < ||a||^2 + ||b||^2 + ||c||^2 <= 1 is enforced at construction in the
/// metric's own norm mode.
class MappingSystem {
public:
    MappingSystem(SelfMap i, SelfMap j, SelfMap r, SelfMap s, SelfMap t, SelfMap u,
                  AlgebraElement a, AlgebraElement b, AlgebraElement c,
                  MonotoneTriple triple, ModularMetric metric);

    const SelfMap& map_i() const { return i_; }
    const SelfMap& map_j() const { return j_; }
    const SelfMap& map_r() const { return r_; }
    const SelfMap& map_s() const { return s_; }
    const SelfMap& map_t() const { return t_; }
    const SelfMap& map_u() const { return u_; }
    const AlgebraElement& coeff_a() const { return a_; }
    const AlgebraElement& coeff_b() const { return b_; }
    const AlgebraElement& coeff_c() const { return c_; }
    const MonotoneTriple& triple() const { return triple_; }
    const ModularMetric& metric() const { return metric_; }
    double coefficient_budget() const { return budget_; }

    Point sr(const Point& x) const { return s_(r_(x)); }
    Point tu(const Point& x) const { return t_(u_(x)); }

private:
    SelfMap i_, j_, r_, s_, t_, u_;
    AlgebraElement a_, b_, c_;
    MonotoneTriple triple_;
    ModularMetric metric_;
    double budget_ = 0.0;
};

/// a* w_rate(Ix, Jy) a + b* w_rate(SRx, Jy) b + c* w_{2 rate}(TUy, Ix) c.
/// Extended metric values propagate to an extended result.
AlgebraElement m_value(const MappingSystem& sys, const Point& x, const Point& y, double rate);

/// Samples the displacement inequality psi(w(SRx, TUy)) <= F(psi(M), phi(M))
/// together with finiteness of the displacement norm.
Report check_contraction(const MappingSystem& sys, Sampler& sampler, std::size_t n_samples);

/// Residual scale between carrier points: the metric norm at rate 1.
double point_distance(const ModularMetric& metric, const Point& a, const Point& b);

/// Either a finite point list or a scalar interval scan grid.
struct SearchDomain {
    std::vector<Point> points;
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;

    static SearchDomain interval(double lo, double hi, double step);
    static SearchDomain finite(std::vector<Point> pts);
    bool is_interval() const { return points.empty(); }
};

/// Grid scan for points where f and g agree within tol, refined by bisection
/// on sign changes of the scalar residual and deduplicated within one step.
std::vector<Point> find_coincidence_points(const ModularMetric& metric, const SelfMap& f,
                                           const SelfMap& g, const SearchDomain& dom, double tol);

struct OwcReport {
    bool owc = false;
    std::optional<Point> witness;
    std::vector<Point> coincidence_points;
};

/// Occasionally weakly compatible: some coincidence point at which the two
/// maps commute within tol.
OwcReport check_owc(const ModularMetric& metric, const SelfMap& f, const SelfMap& g,
                    const SearchDomain& dom, double tol);

struct FixedPointSearch {
    double tol = 1e-10;
    std::size_t gate_samples = 200;
    std::uint64_t gate_seed = 0;
    bool commuting_pairs = false;
};

struct FixedPointResult {
    std::optional<Point> point;
    bool unique_in_domain = false;
    std::size_t domain_matches = 0;
    std::map<std::string, double> residuals;
    std::vector<std::string> warnings;
    std::vector<Point> candidates;
};

/// Locate w with max residual over {SR, TU, I, J} at most tol. The
/// contraction and owc gates are sampled first and demote the search to
/// best-effort (with warnings) when they fail. Uniqueness is certified only
/// within the domain at its scan resolution.
FixedPointResult find_common_fixed_point(const MappingSystem& sys, const SearchDomain& dom,
                                         const FixedPointSearch& options = {});

/// Specialization with both outer maps set to the identity.
MappingSystem build_system_c3_2(SelfMap s, SelfMap t, SelfMap i, SelfMap j, AlgebraElement a,
                                AlgebraElement b, AlgebraElement c, MonotoneTriple triple,
                                ModularMetric metric);
/// Two-map specialization: the anchor map feeds both pointwise slots.
MappingSystem build_system_c3_3(SelfMap s, SelfMap t, AlgebraElement a, AlgebraElement b,
                                AlgebraElement c, MonotoneTriple triple, ModularMetric metric);
/// Two-map specialization with the second and third coefficients zeroed.
MappingSystem build_system_c3_4(SelfMap s, SelfMap t, AlgebraElement a, MonotoneTriple triple,
                                ModularMetric metric);

} // namespace cstarmod
