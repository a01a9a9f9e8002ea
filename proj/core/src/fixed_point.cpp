#include "cstarmod/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace cstarmod {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double scalar_of(const Point& p) {
    if (!std::holds_alternative<double>(p)) {
        throw ShapeError("interval search domains require a scalar carrier");
    }
    return std::get<double>(p);
}

} // namespace

SelfMap identity_map() {
    return SelfMap{[](const Point& p) { return p; }, "identity"};
}

SelfMap constant_map(double value) {
    return SelfMap{[value](const Point&) { return Point(value); }, "const:" + fmt(value)};
}

SelfMap affine_map(double slope, double offset) {
    return SelfMap{[slope, offset](const Point& p) {
                       return Point(slope * std::get<double>(p) + offset);
                   },
                   "affine:" + fmt(slope) + "," + fmt(offset)};
}

SelfMap compose(const SelfMap& outer, const SelfMap& inner) {
    return SelfMap{[outer, inner](const Point& p) { return outer(inner(p)); },
                   outer.name + "." + inner.name};
}

MappingSystem::MappingSystem(SelfMap i, SelfMap j, SelfMap r, SelfMap s, SelfMap t, SelfMap u,
                             AlgebraElement a, AlgebraElement b, AlgebraElement c,
                             MonotoneTriple triple, ModularMetric metric)
    : i_(std::move(i)), j_(std::move(j)), r_(std::move(r)), s_(std::move(s)), t_(std::move(t)),
      u_(std::move(u)), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)),
      triple_(std::move(triple)), metric_(std::move(metric)) {
    const int dim = metric_.ctx.dim;
    for (const AlgebraElement* coeff : {&a_, &b_, &c_}) {
        if (coeff->is_infinite() || coeff->dim() != dim) {
            throw ConfigError("MappingSystem: coefficients must be finite elements of dim " +
                              std::to_string(dim));
        }
    }
    const double na = norm(a_, metric_.ctx);
    const double nb = norm(b_, metric_.ctx);
    const double nc = norm(c_, metric_.ctx);
    budget_ = na * na + nb * nb + nc * nc;
    if (!(budget_ > 0.0) || budget_ > 1.0 + 1e-12) {
        throw ConfigError("MappingSystem: coefficient budget ||a||^2+||b||^2+||c||^2 = " +
                          fmt(budget_) + " must lie in (0, 1]");
    }
}

AlgebraElement m_value(const MappingSystem& sys, const Point& x, const Point& y, double rate) {
    const ModularMetric& metric = sys.metric();
    const AlgebraElement term_ij = congruence(sys.coeff_a(), metric(rate, sys.map_i()(x), sys.map_j()(y)));
    const AlgebraElement term_sj = congruence(sys.coeff_b(), metric(rate, sys.sr(x), sys.map_j()(y)));
    const AlgebraElement term_ti = congruence(sys.coeff_c(), metric(2.0 * rate, sys.tu(y), sys.map_i()(x)));
    return term_ij + term_sj + term_ti;
}

Report check_contraction(const MappingSystem& sys, Sampler& sampler, std::size_t n_samples) {
    Report report;
    report.subject = "contraction";
    const ModularMetric& metric = sys.metric();
    const double tol = metric.ctx.positivity_tol;

    CheckResult order("displacement_bound");
    order.samples = n_samples;
    CheckResult finite("finite_displacement");
    finite.samples = n_samples;

    for (std::size_t i = 0; i < n_samples; ++i) {
        const Point x = metric.point_sampler(sampler);
        const Point y = metric.point_sampler(sampler);
        const double rate = sampler.rate();

        const std::string witness = "x=" + format_point(x) + " y=" + format_point(y) +
                                    " lambda=" + fmt(rate);

        const AlgebraElement displacement = metric(rate, sys.sr(x), sys.tu(y));
        if (displacement.is_infinite()) {
            finite.add_violation(witness, kInf);
            order.add_violation(witness + " (extended displacement)", kInf);
            continue;
        }

        const AlgebraElement lhs = sys.triple().psi(displacement);
        const AlgebraElement m = m_value(sys, x, y, rate);
        double defect;
        if (m.is_infinite()) {
            defect = kInf; // dominated vacuously
        } else {
            const AlgebraElement rhs = sys.triple().f(sys.triple().psi(m), sys.triple().phi(m));
            defect = order_defect(lhs, rhs, metric.ctx);
        }
        if (defect < -tol) {
            order.add_violation(witness, -defect);
        }
    }

    report.checks.push_back(std::move(order));
    report.checks.push_back(std::move(finite));
    return report;
}

double point_distance(const ModularMetric& metric, const Point& a, const Point& b) {
    const AlgebraElement w = metric(1.0, a, b);
    return w.is_infinite() ? kInf : norm(w, metric.ctx);
}

SearchDomain SearchDomain::interval(double lo, double hi, double step) {
    if (!(lo < hi)) throw ConfigError("SearchDomain: lo must be < hi");
    if (!(step > 0.0)) throw ConfigError("SearchDomain: step must be > 0");
    SearchDomain d;
    d.lo = lo;
    d.hi = hi;
    d.step = step;
    return d;
}

SearchDomain SearchDomain::finite(std::vector<Point> pts) {
    if (pts.empty()) throw ConfigError("SearchDomain: finite domain must be nonempty");
    SearchDomain d;
    d.points = std::move(pts);
    return d;
}

namespace {

/// Cluster ascending (value, residual) pairs whose gaps stay within
/// 1.5 * step; representative is the member with the smallest residual.
std::vector<std::pair<double, double>> cluster_by_adjacency(
    std::vector<std::pair<double, double>> hits, double step) {
    std::sort(hits.begin(), hits.end());
    std::vector<std::pair<double, double>> reps;
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= hits.size(); ++i) {
        if (i == hits.size() || hits[i].first - hits[i - 1].first > 1.5 * step) {
            auto best = hits[begin];
            for (std::size_t k = begin; k < i; ++k) {
                if (hits[k].second < best.second) best = hits[k];
            }
            reps.push_back(best);
            begin = i;
        }
    }
    return reps;
}

} // namespace

std::vector<Point> find_coincidence_points(const ModularMetric& metric, const SelfMap& f,
                                           const SelfMap& g, const SearchDomain& dom,
                                           double tol) {
    const auto residual = [&](const Point& p) { return point_distance(metric, f(p), g(p)); };

    if (!dom.is_interval()) {
        std::vector<Point> found;
        for (const Point& p : dom.points) {
            if (residual(p) <= tol) found.push_back(p);
        }
        return found;
    }

    const std::vector<double> grid = make_scan_grid(dom.lo, dom.hi, dom.step);
    const double actual_step = grid.size() > 1 ? grid[1] - grid[0] : dom.step;

    std::vector<std::pair<double, double>> hits;
    std::vector<double> signed_residual(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Point p(grid[i]);
        const double r = residual(p);
        if (r <= tol) hits.push_back({grid[i], r});
        signed_residual[i] = scalar_of(f(p)) - scalar_of(g(p));
    }

    // Local bisection on sign changes of the scalar residual.
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (!(signed_residual[i] * signed_residual[i + 1] < 0.0)) continue;
        double lo = grid[i], hi = grid[i + 1];
        double s_lo = signed_residual[i];
        for (int iter = 0; iter < 80 && hi - lo > 0.0; ++iter) {
            const double mid = 0.5 * (lo + hi);
            const double s_mid = scalar_of(f(Point(mid))) - scalar_of(g(Point(mid)));
            if (s_mid == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((s_lo < 0.0) == (s_mid < 0.0)) {
                lo = mid;
                s_lo = s_mid;
            } else {
                hi = mid;
            }
        }
        const double root = 0.5 * (lo + hi);
        const double r = residual(Point(root));
        if (r <= tol) hits.push_back({root, r});
    }

    std::vector<Point> found;
    for (const auto& [value, r] : cluster_by_adjacency(std::move(hits), actual_step)) {
        found.push_back(Point(value));
    }
    return found;
}

OwcReport check_owc(const ModularMetric& metric, const SelfMap& f, const SelfMap& g,
                    const SearchDomain& dom, double tol) {
    OwcReport report;
    report.coincidence_points = find_coincidence_points(metric, f, g, dom, tol);
    for (const Point& u : report.coincidence_points) {
        if (point_distance(metric, f(g(u)), g(f(u))) <= tol) {
            report.owc = true;
            report.witness = u;
            break;
        }
    }
    return report;
}

namespace {

double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double seed_x, double seed_value, int iterations, double* best_x) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double best_v = seed_value;
    *best_x = seed_x;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iterations; ++i) {
        if (f1 < best_v) { best_v = f1; *best_x = x1; }
        if (f2 < best_v) { best_v = f2; *best_x = x2; }
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return best_v;
}

} // namespace

FixedPointResult find_common_fixed_point(const MappingSystem& sys, const SearchDomain& dom,
                                         const FixedPointSearch& options) {
    FixedPointResult result;
    const ModularMetric& metric = sys.metric();

    // Hypothesis gates; failures demote the search to best-effort.
    {
        Sampler gate_sampler(options.gate_seed);
        const Report contraction = check_contraction(sys, gate_sampler, options.gate_samples);
        if (!contraction.all_passed()) {
            result.warnings.push_back(
                "contraction condition violated on sampled inputs; search is best-effort");
        }
        const SelfMap sr_map = compose(sys.map_s(), sys.map_r());
        const SelfMap tu_map = compose(sys.map_t(), sys.map_u());
        if (!check_owc(metric, sr_map, sys.map_i(), dom, options.tol).owc) {
            result.warnings.push_back("pair (SR, I) not verified occasionally weakly compatible");
        }
        if (!check_owc(metric, tu_map, sys.map_j(), dom, options.tol).owc) {
            result.warnings.push_back("pair (TU, J) not verified occasionally weakly compatible");
        }
    }

    const auto residual = [&](const Point& p) {
        double r = point_distance(metric, sys.sr(p), p);
        r = std::max(r, point_distance(metric, sys.tu(p), p));
        r = std::max(r, point_distance(metric, sys.map_i()(p), p));
        return std::max(r, point_distance(metric, sys.map_j()(p), p));
    };

    std::vector<std::pair<double, double>> scalar_hits;
    std::vector<Point> finite_hits;

    if (dom.is_interval()) {
        const std::vector<double> grid = make_scan_grid(dom.lo, dom.hi, dom.step);
        const double actual_step = grid.size() > 1 ? grid[1] - grid[0] : dom.step;
        std::vector<double> rho(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) rho[i] = residual(Point(grid[i]));

        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (rho[i] <= options.tol) scalar_hits.push_back({grid[i], rho[i]});
        }
        result.domain_matches = scalar_hits.size();

        // Refine interior local minima that sit near the acceptance band.
        const double refine_gate = std::max(options.tol, actual_step);
        const auto rho_fn = [&](double x) { return residual(Point(x)); };
        for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
            if (rho[i] > refine_gate) continue;
            if (rho[i] > rho[i - 1] || rho[i] > rho[i + 1]) continue;
            double best_x = grid[i];
            const double best_v = golden_section_min(rho_fn, grid[i - 1], grid[i + 1], grid[i],
                                                     rho[i], 60, &best_x);
            if (best_v <= options.tol) scalar_hits.push_back({best_x, best_v});
        }

        auto reps = cluster_by_adjacency(std::move(scalar_hits), actual_step);
        for (const auto& [value, r] : reps) result.candidates.push_back(Point(value));
        if (!reps.empty()) {
            auto best = reps.front();
            for (const auto& rep : reps) {
                if (rep.second < best.second) best = rep;
            }
            result.point = Point(best.first);
        }
    } else {
        for (const Point& p : dom.points) {
            if (residual(p) <= options.tol) finite_hits.push_back(p);
        }
        result.domain_matches = finite_hits.size();
        result.candidates = finite_hits;
        if (!finite_hits.empty()) {
            Point best = finite_hits.front();
            double best_r = residual(best);
            for (const Point& p : finite_hits) {
                const double r = residual(p);
                if (r < best_r) {
                    best_r = r;
                    best = p;
                }
            }
            result.point = best;
        }
    }

    result.unique_in_domain = result.domain_matches == 1;

    if (result.point.has_value()) {
        const Point& w = *result.point;
        result.residuals["SR"] = point_distance(metric, sys.sr(w), w);
        result.residuals["TU"] = point_distance(metric, sys.tu(w), w);
        result.residuals["I"] = point_distance(metric, sys.map_i()(w), w);
        result.residuals["J"] = point_distance(metric, sys.map_j()(w), w);
        if (options.commuting_pairs) {
            result.residuals["S"] = point_distance(metric, sys.map_s()(w), w);
            result.residuals["R"] = point_distance(metric, sys.map_r()(w), w);
            result.residuals["T"] = point_distance(metric, sys.map_t()(w), w);
            result.residuals["U"] = point_distance(metric, sys.map_u()(w), w);
            for (const char* key : {"S", "R", "T", "U"}) {
                if (result.residuals[key] > options.tol) {
                    result.warnings.push_back(std::string("commuting-pair residual ") + key +
                                              " exceeds tolerance");
                }
            }
        }
    }

    return result;
}

MappingSystem build_system_c3_2(SelfMap s, SelfMap t, SelfMap i, SelfMap j, AlgebraElement a,
                                AlgebraElement b, AlgebraElement c, MonotoneTriple triple,
                                ModularMetric metric) {
    return MappingSystem(std::move(i), std::move(j), identity_map(), std::move(s), std::move(t),
                         identity_map(), std::move(a), std::move(b), std::move(c),
                         std::move(triple), std::move(metric));
}

MappingSystem build_system_c3_3(SelfMap s, SelfMap t, AlgebraElement a, AlgebraElement b,
                                AlgebraElement c, MonotoneTriple triple, ModularMetric metric) {
    SelfMap anchor = std::move(s);
    return build_system_c3_2(t, t, anchor, anchor, std::move(a), std::move(b), std::move(c),
                             std::move(triple), std::move(metric));
}

MappingSystem build_system_c3_4(SelfMap s, SelfMap t, AlgebraElement a, MonotoneTriple triple,
                                ModularMetric metric) {
    const AlgebraElement theta = AlgebraElement::zero(metric.ctx.dim);
    return build_system_c3_3(std::move(s), std::move(t), std::move(a), theta, theta,
                             std::move(triple), std::move(metric));
}

} // namespace cstarmod
