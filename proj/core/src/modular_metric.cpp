#include "cstarmod/modular_metric.hpp"

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

std::string witness_tuple(double lambda, double mu, const Point& x, const Point& y,
                          const Point* z = nullptr) {
    std::ostringstream out;
    out << "lambda=" << fmt(lambda);
    if (mu > 0.0) out << " mu=" << fmt(mu);
    out << " x=" << format_point(x) << " y=" << format_point(y);
    if (z) out << " z=" << format_point(*z);
    return out.str();
}

double metric_norm(const ModularMetric& m, const AlgebraElement& value) {
    return value.is_infinite() ? kInf : norm(value, m.ctx);
}

} // namespace

bool points_equal(const Point& x, const Point& y, double tol) {
    if (x.index() != y.index()) return false;
    return point_sup_distance(x, y) <= tol;
}

double point_sup_distance(const Point& x, const Point& y) {
    if (std::holds_alternative<double>(x)) {
        return std::abs(std::get<double>(x) - std::get<double>(y));
    }
    const auto& fx = std::get<GridFunction>(x);
    const auto& fy = std::get<GridFunction>(y);
    if (fx.size() != fy.size()) {
        throw ShapeError("point_sup_distance: grid functions of sizes " +
                         std::to_string(fx.size()) + " and " + std::to_string(fy.size()));
    }
    double sup = 0.0;
    for (std::size_t i = 0; i < fx.size(); ++i) sup = std::max(sup, std::abs(fx[i] - fy[i]));
    return sup;
}

std::string format_point(const Point& p) {
    if (std::holds_alternative<double>(p)) return fmt(std::get<double>(p));
    const auto& f = std::get<GridFunction>(p);
    std::ostringstream out;
    out << "(";
    const std::size_t shown = std::min<std::size_t>(f.size(), 4);
    for (std::size_t i = 0; i < shown; ++i) out << fmt(f[i]) << (i + 1 < shown ? "," : "");
    if (f.size() > shown) out << ",...[" << f.size() << "]";
    out << ")";
    return out.str();
}

std::string to_string(MetricClass c) {
    switch (c) {
        case MetricClass::modular: return "modular";
        case MetricClass::pseudo: return "pseudo";
        case MetricClass::strict: return "strict";
        case MetricClass::convex_modular: return "convex_modular";
    }
    return "unknown";
}

AlgebraElement ModularMetric::operator()(double lambda, const Point& x, const Point& y) const {
    if (!(lambda > 0.0)) throw ConfigError("ModularMetric: rate must be > 0");
    return evaluator(lambda, x, y);
}

ModularMetric make_example_4_1() {
    ModularMetric m;
    m.ctx = AlgebraContext(2, NormMode::frobenius, OrderMode::entrywise);
    m.claimed_class = MetricClass::modular;
    m.name = "example_4_1";
    m.evaluator = [](double lambda, const Point& x, const Point& y) {
        const double d = std::abs(std::get<double>(x) - std::get<double>(y)) / lambda;
        Eigen::VectorXd diag(2);
        diag << d, d;
        return AlgebraElement::diagonal(diag);
    };
    m.point_sampler = [](Sampler& s) { return Point(s.scalar()); };
    return m;
}

ModularMetric make_example_4_2(double c, double alpha) {
    if (!(c > 0.0 && c < 1.0)) throw ConfigError("make_example_4_2: need 0 < c < 1");
    if (!(alpha >= 0.0)) throw ConfigError("make_example_4_2: need alpha >= 0");
    ModularMetric m;
    m.ctx = AlgebraContext(2, NormMode::frobenius, OrderMode::entrywise);
    m.claimed_class = MetricClass::modular;
    m.name = "example_4_2";
    m.evaluator = [alpha](double lambda, const Point& x, const Point& y) {
        const double d = std::abs(std::get<double>(x) - std::get<double>(y)) / lambda;
        Eigen::VectorXd diag(2);
        diag << d, alpha * d;
        return AlgebraElement::diagonal(diag);
    };
    // Carrier {c^-n}; exponents capped to keep magnitudes desk-scale.
    m.point_sampler = [c](Sampler& s) {
        return Point(std::pow(c, -static_cast<double>(s.uniform_int(1, 12))));
    };
    return m;
}

ModularMetric make_multiplication_modular(const GridDomain& grid) {
    grid.validate();
    const std::size_t n = grid.size();
    ModularMetric m;
    m.ctx = AlgebraContext(static_cast<int>(n), NormMode::operator_norm, OrderMode::loewner);
    m.claimed_class = MetricClass::modular;
    m.name = "multiplication";
    m.evaluator = [n](double lambda, const Point& x, const Point& y) {
        const auto& f = std::get<GridFunction>(x);
        const auto& g = std::get<GridFunction>(y);
        if (f.size() != n || g.size() != n) {
            throw ShapeError("multiplication metric: grid function size mismatch");
        }
        Eigen::VectorXd diag(n);
        for (std::size_t i = 0; i < n; ++i) diag(i) = std::abs(f[i] - g[i]) / lambda;
        return AlgebraElement::diagonal(diag);
    };
    m.point_sampler = [n](Sampler& s) { return Point(s.grid_function(n)); };
    return m;
}

std::vector<CheckResult> check_axioms(const ModularMetric& metric, Sampler& sampler,
                                      std::size_t n_samples) {
    if (n_samples < 1) throw ConfigError("check_axioms: n_samples must be >= 1");
    const AlgebraContext& ctx = metric.ctx;
    const double tol = ctx.positivity_tol;
    const MetricClass cls = metric.claimed_class;

    const bool want_separation = cls == MetricClass::modular || cls == MetricClass::convex_modular;
    const bool want_strict = cls == MetricClass::strict;
    const bool want_symmetry = cls != MetricClass::strict;
    const bool want_triangle = cls != MetricClass::convex_modular;
    const bool want_convex = cls == MetricClass::convex_modular;

    CheckResult positivity("positivity");
    CheckResult identity("self_distance_zero");
    CheckResult separation("separation");
    separation.applicable = want_separation;
    CheckResult strict_sep("strict_separation");
    strict_sep.applicable = want_strict;
    CheckResult symmetry("symmetry");
    symmetry.applicable = want_symmetry;
    CheckResult triangle("triangle_two_rate");
    triangle.applicable = want_triangle;
    CheckResult convex("convex_combination");
    convex.applicable = want_convex;

    // Probe ladder for the existential direction of separation.
    const double probe_rates[] = {1e-3, 1e-1, 1.0, 1e1, 1e3};

    for (std::size_t i = 0; i < n_samples; ++i) {
        const Point x = metric.point_sampler(sampler);
        const Point y = metric.point_sampler(sampler);
        const Point z = metric.point_sampler(sampler);
        const double lam = sampler.rate();
        const double mu = sampler.rate();

        const AlgebraElement w_xy = metric(lam, x, y);

        {
            const double defect = positivity_defect(w_xy, ctx);
            if (defect < -tol) {
                positivity.add_violation(witness_tuple(lam, 0.0, x, y), -defect);
            }
        }

        {
            const AlgebraElement w_xx = metric(lam, x, x);
            const double nv = metric_norm(metric, w_xx);
            if (nv > tol) {
                identity.add_violation(witness_tuple(lam, 0.0, x, x), nv);
            }
        }

        if (want_symmetry) {
            const AlgebraElement w_yx = metric(lam, y, x);
            if (w_xy.is_infinite() != w_yx.is_infinite()) {
                symmetry.add_violation(witness_tuple(lam, 0.0, x, y), kInf);
            } else if (!w_xy.is_infinite()) {
                const double diff = norm(w_xy - w_yx, ctx);
                if (diff > tol) symmetry.add_violation(witness_tuple(lam, 0.0, x, y), diff);
            }
        }

        if (want_separation && !points_equal(x, y)) {
            bool vanish_everywhere = metric_norm(metric, w_xy) <= tol;
            for (double r : probe_rates) {
                if (!vanish_everywhere) break;
                vanish_everywhere = metric_norm(metric, metric(r, x, y)) <= tol;
            }
            if (vanish_everywhere) {
                separation.add_violation(witness_tuple(lam, 0.0, x, y), 0.0);
            }
        }

        if (want_strict && !points_equal(x, y)) {
            if (metric_norm(metric, w_xy) <= tol) {
                strict_sep.add_violation(witness_tuple(lam, 0.0, x, y), 0.0);
            }
        }

        if (want_triangle) {
            const AlgebraElement lhs = metric(lam + mu, x, y);
            const AlgebraElement rhs = metric(lam, x, z) + metric(mu, z, y);
            const double defect = order_defect(lhs, rhs, ctx);
            if (defect < -tol) {
                triangle.add_violation(witness_tuple(lam, mu, x, y, &z), -defect);
            }
        }

        if (want_convex) {
            const double total = lam + mu;
            const AlgebraElement lhs = metric(total, x, y);
            const AlgebraElement rhs =
                (lam / total) * metric(lam, x, z) + (mu / total) * metric(mu, z, y);
            const double defect = order_defect(lhs, rhs, ctx);
            if (defect < -tol) {
                convex.add_violation(witness_tuple(lam, mu, x, y, &z), -defect);
            }
        }
    }

    for (CheckResult* c : {&positivity, &identity, &separation, &strict_sep, &symmetry,
                           &triangle, &convex}) {
        c->samples = n_samples;
    }

    std::vector<CheckResult> out;
    out.push_back(std::move(positivity));
    out.push_back(std::move(identity));
    if (want_separation) out.push_back(std::move(separation));
    if (want_strict) out.push_back(std::move(strict_sep));
    if (want_symmetry) out.push_back(std::move(symmetry));
    if (want_triangle) out.push_back(std::move(triangle));
    if (want_convex) out.push_back(std::move(convex));
    return out;
}

CheckResult check_lambda_monotonicity(const ModularMetric& metric, Sampler& sampler,
                                      std::size_t n_samples) {
    CheckResult result("rate_monotonicity");
    result.samples = n_samples;
    const double tol = metric.ctx.positivity_tol;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const Point x = metric.point_sampler(sampler);
        const Point y = metric.point_sampler(sampler);
        const double r1 = sampler.rate();
        const double r2 = sampler.rate();
        const double mu = std::min(r1, r2);
        const double lam = std::max(r1, r2);
        if (mu == lam) continue;
        const double defect = order_defect(metric(lam, x, y), metric(mu, x, y), metric.ctx);
        if (defect < -tol) {
            result.add_violation(witness_tuple(lam, mu, x, y), -defect);
        }
    }
    return result;
}

namespace {

double infimum_rate(const ModularMetric& metric, const Point& x, const Point& y,
                    bool threshold_is_rate) {
    const auto predicate = [&](double rate) {
        const AlgebraElement w = metric(rate, x, y);
        if (w.is_infinite()) return false;
        const double nv = norm(w, metric.ctx);
        return threshold_is_rate ? nv <= rate : nv <= 1.0;
    };

    constexpr double rate_floor = 1e-12;
    constexpr double rate_ceiling = 1e12;
    if (predicate(rate_floor)) return 0.0;

    double hi = 1.0;
    while (!predicate(hi)) {
        hi *= 2.0;
        if (hi > rate_ceiling) {
            throw DivergenceError("rate infimum: predicate not satisfied up to rate 1e12");
        }
    }
    double lo = hi > 1.0 ? hi / 2.0 : rate_floor;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (predicate(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

double d0_distance(const ModularMetric& metric, const Point& x, const Point& y) {
    return infimum_rate(metric, x, y, /*threshold_is_rate=*/true);
}

double dstar_distance(const ModularMetric& metric, const Point& x, const Point& y) {
    return infimum_rate(metric, x, y, /*threshold_is_rate=*/false);
}

SequenceReport check_sequence(const ModularMetric& metric, const std::vector<Point>& seq,
                              const std::optional<Point>& limit,
                              const std::vector<double>& lambda_set, double tol,
                              std::size_t tail) {
    if (seq.empty()) throw ConfigError("check_sequence: sequence must be nonempty");
    if (lambda_set.empty()) throw ConfigError("check_sequence: lambda_set must be nonempty");

    const std::size_t start = (tail == 0 || tail >= seq.size()) ? 0 : seq.size() - tail;

    SequenceReport report;
    report.convergent = limit.has_value();
    if (limit.has_value()) {
        for (std::size_t i = start; i < seq.size() && report.convergent; ++i) {
            for (double lam : lambda_set) {
                if (!(metric_norm(metric, metric(lam, seq[i], *limit)) < tol)) {
                    report.convergent = false;
                    break;
                }
            }
        }
    }

    report.cauchy = true;
    for (std::size_t i = start; i < seq.size() && report.cauchy; ++i) {
        for (std::size_t j = i + 1; j < seq.size() && report.cauchy; ++j) {
            for (double lam : lambda_set) {
                if (!(metric_norm(metric, metric(lam, seq[i], seq[j])) < tol)) {
                    report.cauchy = false;
                    break;
                }
            }
        }
    }

    double diameter = 0.0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        for (std::size_t j = i + 1; j < seq.size(); ++j) {
            for (double lam : lambda_set) {
                diameter = std::max(diameter, metric_norm(metric, metric(lam, seq[i], seq[j])));
            }
        }
    }
    report.bounded_diameter = diameter;
    return report;
}

bool in_modular_space(const ModularMetric& metric, const Point& x, const Point& base,
                      double tol) {
    constexpr double probe_rate = 1e6;
    return metric_norm(metric, metric(probe_rate, x, base)) < tol;
}

} // namespace cstarmod
