#include "cstarmod/integral_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace cstarmod {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double real_mu(const IntegralSystem& sys) {
    if (std::abs(sys.mu.imag()) > 0.0) {
        throw ConfigError("integral maps: complex mu is supported in the solvability bound only");
    }
    return sys.mu.real();
}

double sup_diff(const GridFunction& a, const GridFunction& b) {
    double sup = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sup = std::max(sup, std::abs(a[i] - b[i]));
    return sup;
}

const GridFunction& as_grid(const Point& p, std::size_t n) {
    const auto& g = std::get<GridFunction>(p);
    if (g.size() != n) {
        throw ShapeError("integral map: expected grid function of size " + std::to_string(n));
    }
    return g;
}

} // namespace

void IntegralSystem::validate() const {
    grid.validate();
    const std::size_t n = grid.size();
    if (w.size() != n) throw ShapeError("IntegralSystem: offset w must live on the grid");
    if (kernel.rows() != static_cast<Eigen::Index>(n) ||
        kernel.cols() != static_cast<Eigen::Index>(n)) {
        throw ShapeError("IntegralSystem: kernel must be sampled on the full grid");
    }
    if (!k1 || !k2 || !h1 || !h2) throw ConfigError("IntegralSystem: all four functions required");
    if (L1.has_value() && !(*L1 > 1.0)) throw ConfigError("IntegralSystem: L1 must exceed 1");
    if (L2.has_value() && !(*L2 > 0.0)) throw ConfigError("IntegralSystem: L2 must be positive");
}

double estimate_m1(const IntegralSystem& sys) {
    sys.validate();
    const std::size_t n = sys.grid.size();
    double sup = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double column = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            column += std::abs(sys.kernel(i, j)) * sys.grid.weights[i];
        }
        sup = std::max(sup, column);
    }
    return sup;
}

Report verify_lipschitz_conditions(const IntegralSystem& sys, Sampler& sampler,
                                   std::size_t n_samples) {
    sys.validate();
    if (!sys.L1.has_value() || !sys.L2.has_value()) {
        throw ConfigError("verify_lipschitz_conditions: L1 and L2 must be supplied or estimated");
    }
    const double L1 = *sys.L1;
    const double L2 = *sys.L2;
    const double root_two = std::sqrt(2.0);

    Report report;
    report.subject = "integral_instance_conditions";
    CheckResult expansive("k_expansive_bound");
    expansive.samples = n_samples;
    CheckResult lipschitz("h_lipschitz_bound");
    lipschitz.samples = n_samples;

    for (std::size_t i = 0; i < n_samples; ++i) {
        const double s = sampler.uniform(sys.grid.lo, sys.grid.hi);
        const double x = sampler.scalar();
        const double y = sampler.scalar();
        const double gap = std::abs(x - y);
        const std::string witness = "s=" + fmt(s) + " x=" + fmt(x) + " y=" + fmt(y);

        const double lhs_k = std::abs(sys.k1(s, x) - sys.k2(s, y)) / root_two;
        const double rhs_k = L1 * gap;
        if (lhs_k < rhs_k - 1e-9 * (1.0 + rhs_k)) {
            expansive.add_violation(witness, rhs_k - lhs_k);
        }

        const double lhs_h = std::abs(sys.h1(s, x) - sys.h2(s, y));
        const double rhs_h = L2 * gap;
        if (lhs_h > rhs_h + 1e-9 * (1.0 + rhs_h)) {
            lipschitz.add_violation(witness, lhs_h - rhs_h);
        }
    }

    report.checks.push_back(std::move(expansive));
    report.checks.push_back(std::move(lipschitz));
    return report;
}

SolvabilityReport check_solvability(std::complex<double> mu, double L1, double L2, double M1,
                                    int dim) {
    if (!(L1 > 1.0)) throw ConfigError("check_solvability: L1 must exceed 1");
    if (!(L2 > 0.0)) throw ConfigError("check_solvability: L2 must be positive");
    if (!(M1 >= 0.0)) throw ConfigError("check_solvability: M1 must be nonnegative");
    SolvabilityReport report;
    report.bound = (1.0 + std::abs(mu) * L2 * M1) / L1;
    report.ok = report.bound <= 1.0 + 1e-12;
    report.coefficient = AlgebraElement::scaled_identity(dim, std::sqrt(report.bound));
    AlgebraContext op_ctx(dim, NormMode::operator_norm, OrderMode::loewner);
    const double coeff_norm = norm(report.coefficient, op_ctx);
    report.coefficient_norm_sq = coeff_norm * coeff_norm;
    return report;
}

BuiltMaps build_maps(const IntegralSystem& sys) {
    sys.validate();
    const double mu = real_mu(sys);
    const std::size_t n = sys.grid.size();
    const GridDomain grid = sys.grid;
    const Eigen::MatrixXd kernel = sys.kernel;
    const GridFunction w = sys.w;

    const auto integral_map = [grid, kernel, w, mu, n](const PointwiseFn& h, std::string name) {
        return SelfMap{[grid, kernel, w, mu, n, h](const Point& p) {
                           const GridFunction& x = as_grid(p, n);
                           GridFunction out(n);
                           for (std::size_t i = 0; i < n; ++i) {
                               double integral = 0.0;
                               for (std::size_t j = 0; j < n; ++j) {
                                   integral += kernel(i, j) * h(grid.points[j], x[j]) *
                                               grid.weights[j];
                               }
                               out[i] = x[i] - w[i] - mu * integral;
                           }
                           return Point(std::move(out));
                       },
                       std::move(name)};
    };
    const auto pointwise_map = [grid, n](const PointwiseFn& k, std::string name) {
        return SelfMap{[grid, n, k](const Point& p) {
                           const GridFunction& x = as_grid(p, n);
                           GridFunction out(n);
                           for (std::size_t i = 0; i < n; ++i) out[i] = k(grid.points[i], x[i]);
                           return Point(std::move(out));
                       },
                       std::move(name)};
    };

    BuiltMaps maps;
    maps.S = integral_map(sys.h1, "integral_S");
    maps.T = integral_map(sys.h2, "integral_T");
    maps.I = pointwise_map(sys.k1, "pointwise_I");
    maps.J = pointwise_map(sys.k2, "pointwise_J");
    return maps;
}

Report verify_owc_conditions(const IntegralSystem& sys, const GridFunction& candidate,
                             double tol) {
    sys.validate();
    const std::size_t n = sys.grid.size();
    if (candidate.size() != n) throw ShapeError("verify_owc_conditions: candidate off the grid");
    const BuiltMaps maps = build_maps(sys);
    const Point cand(candidate);

    const GridFunction s_cand = std::get<GridFunction>(maps.S(cand));
    const GridFunction i_cand = std::get<GridFunction>(maps.I(cand));
    const double si_gap = sup_diff(s_cand, i_cand);
    if (si_gap > tol) {
        throw PreconditionError("verify_owc_conditions: candidate is not a coincidence point of "
                                "(S, I); sup residual " + fmt(si_gap));
    }

    Report report;
    report.subject = "integral_commutation_conditions";

    CheckResult first_pair("pair_si_commutation");
    first_pair.samples = 1;
    {
        const GridFunction lhs = std::get<GridFunction>(maps.I(Point(s_cand)));
        const GridFunction rhs = std::get<GridFunction>(maps.S(Point(i_cand)));
        const double gap = sup_diff(lhs, rhs);
        if (gap > tol) first_pair.add_violation("sup residual " + fmt(gap), gap);
    }
    report.checks.push_back(std::move(first_pair));

    CheckResult second_pair("pair_tj_commutation");
    second_pair.samples = 1;
    const GridFunction t_cand = std::get<GridFunction>(maps.T(cand));
    const GridFunction j_cand = std::get<GridFunction>(maps.J(cand));
    if (sup_diff(t_cand, j_cand) > tol) {
        second_pair.applicable = false;
        second_pair.note = "candidate is not a coincidence point of (T, J); skipped";
    } else {
        const GridFunction lhs = std::get<GridFunction>(maps.J(Point(t_cand)));
        const GridFunction rhs = std::get<GridFunction>(maps.T(Point(j_cand)));
        const double gap = sup_diff(lhs, rhs);
        if (gap > tol) second_pair.add_violation("sup residual " + fmt(gap), gap);
    }
    report.checks.push_back(std::move(second_pair));
    return report;
}

namespace {

/// Root of k1(t, xi) - xi = 0, bracket-expanded around center then bisected.
double pointwise_root(const PointwiseFn& k1, double t, double center, std::size_t max_iter) {
    const auto residual = [&](double xi) { return k1(t, xi) - xi; };

    const double r_center = residual(center);
    if (r_center == 0.0) return center;

    double delta = 1.0;
    double lo = center - delta, hi = center + delta;
    double r_lo = residual(lo), r_hi = residual(hi);
    std::size_t expansions = 0;
    while ((r_lo < 0.0) == (r_hi < 0.0)) {
        if (r_lo == 0.0) return lo;
        if (r_hi == 0.0) return hi;
        delta *= 2.0;
        if (delta > 1e6 || ++expansions > max_iter) {
            throw DivergenceError("pointwise root: bracket expansion exceeded 1e6 at t=" + fmt(t));
        }
        lo = center - delta;
        hi = center + delta;
        r_lo = residual(lo);
        r_hi = residual(hi);
    }

    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double r_mid = residual(mid);
        if (r_mid == 0.0) return mid;
        if ((r_lo < 0.0) == (r_mid < 0.0)) {
            lo = mid;
            r_lo = r_mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(mid))) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace

SolveReport solve(const IntegralSystem& sys, const std::vector<GridFunction>& inits,
                  const SolveParams& params) {
    sys.validate();
    if (inits.empty()) throw ConfigError("solve: at least one initial guess required");
    const std::size_t n = sys.grid.size();
    for (const auto& init : inits) {
        if (init.size() != n) throw ShapeError("solve: initial guess off the grid");
    }

    SolveReport report;
    if (sys.L1.has_value() && sys.L2.has_value()) {
        const double m1 = sys.M1.value_or(estimate_m1(sys));
        const auto solvability = check_solvability(sys.mu, *sys.L1, *sys.L2, m1, 1);
        if (!solvability.ok) {
            report.warnings.push_back("solvability bound " + fmt(solvability.bound) +
                                      " exceeds 1; proceeding best-effort");
        }
    } else {
        report.warnings.push_back("L1/L2 not supplied; solvability bound unchecked");
    }

    std::vector<GridFunction> solutions;
    solutions.reserve(inits.size());
    for (const auto& init : inits) {
        GridFunction x(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = pointwise_root(sys.k1, sys.grid.points[i], init[i], params.max_iter);
        }
        solutions.push_back(std::move(x));
    }

    double disagreement = 0.0;
    for (std::size_t a = 0; a < solutions.size(); ++a) {
        for (std::size_t b = a + 1; b < solutions.size(); ++b) {
            disagreement = std::max(disagreement, sup_diff(solutions[a], solutions[b]));
        }
    }
    report.max_init_disagreement = disagreement;
    report.agreed_across_inits = disagreement <= params.tol;

    report.solution = solutions.front();
    const Point x_star(report.solution);
    const BuiltMaps maps = build_maps(sys);
    report.residuals["S"] = sup_diff(std::get<GridFunction>(maps.S(x_star)), report.solution);
    report.residuals["T"] = sup_diff(std::get<GridFunction>(maps.T(x_star)), report.solution);
    report.residuals["I"] = sup_diff(std::get<GridFunction>(maps.I(x_star)), report.solution);
    report.residuals["J"] = sup_diff(std::get<GridFunction>(maps.J(x_star)), report.solution);

    {
        const double mu = real_mu(sys);
        double equation = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double integral = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                integral += sys.kernel(i, j) * sys.h1(sys.grid.points[j], report.solution[j]) *
                            sys.grid.weights[j];
            }
            const double defect = report.solution[i] - sys.w[i] -
                                  sys.k1(sys.grid.points[i], report.solution[i]) - mu * integral;
            equation = std::max(equation, std::abs(defect));
        }
        report.residuals["equation"] = equation;
    }

    for (const auto& [key, value] : report.residuals) {
        if (value > params.tol) {
            throw InconsistentInstanceError(
                "solve: residual '" + key + "' = " + fmt(value) +
                " exceeds tolerance; the instance violates its consistency identities");
        }
    }
    return report;
}

double interpolate_solution(const IntegralSystem& sys, const GridFunction& solution, double t) {
    sys.validate();
    const std::size_t n = sys.grid.size();
    if (solution.size() != n) throw ShapeError("interpolate_solution: solution off the grid");
    const auto& pts = sys.grid.points;
    const auto it = std::lower_bound(pts.begin(), pts.end(), t);
    double center;
    if (it == pts.begin()) {
        center = solution.front();
    } else if (it == pts.end()) {
        center = solution.back();
    } else {
        const std::size_t hi = static_cast<std::size_t>(it - pts.begin());
        const std::size_t lo = hi - 1;
        const double weight = (t - pts[lo]) / (pts[hi] - pts[lo]);
        center = (1.0 - weight) * solution[lo] + weight * solution[hi];
    }
    return pointwise_root(sys.k1, t, center, 200);
}

IntegralSystem make_canonical_instance(std::size_t n_points) {
    IntegralSystem sys;
    sys.grid = GridDomain::uniform_trapezoid(0.0, 1.0, n_points);
    const std::size_t n = sys.grid.size();
    const auto profile = [](double t) { return std::sin(std::numbers::pi * t); };

    sys.kernel.resize(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            sys.kernel(i, j) = sys.grid.points[i] * sys.grid.points[j];
        }
    }
    sys.k1 = sys.k2 = [profile](double s, double x) { return 2.0 * x - profile(s); };
    sys.h1 = sys.h2 = [](double, double x) { return x; };
    sys.mu = 0.2;
    sys.L1 = std::sqrt(2.0);
    sys.L2 = 1.0;

    // Offset chosen to cancel the discretized integral term at the profile,
    // which makes the profile a grid-exact common fixed point.
    sys.w.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double integral = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            integral += sys.kernel(i, j) * profile(sys.grid.points[j]) * sys.grid.weights[j];
        }
        sys.w[i] = -sys.mu.real() * integral;
    }
    return sys;
}

IntegralSystem make_all_zero_instance(std::size_t n_points) {
    IntegralSystem sys = make_canonical_instance(n_points);
    const std::size_t n = sys.grid.size();
    sys.k1 = sys.k2 = [](double, double x) { return 2.0 * x; };
    sys.w.assign(n, 0.0);
    return sys;
}

MappingSystem wrap_two_pair_system(const IntegralSystem& sys, const GridFunction& center) {
    sys.validate();
    if (!sys.L1.has_value() || !sys.L2.has_value()) {
        throw ConfigError("wrap_two_pair_system: L1 and L2 required");
    }
    const double m1 = sys.M1.value_or(estimate_m1(sys));
    const std::size_t n = sys.grid.size();
    const auto solvability = check_solvability(sys.mu, *sys.L1, *sys.L2, m1, static_cast<int>(n));

    ModularMetric metric = make_multiplication_modular(sys.grid);
    metric.point_sampler = [center](Sampler& sampler) {
        const double shift = sampler.uniform(-2.0, 2.0);
        GridFunction g = center;
        for (auto& v : g) v += shift;
        return Point(std::move(g));
    };

    MonotoneTriple triple{linear_map(0.5), linear_map(0.25),
                          builtin_scale(1.0 / std::sqrt(2.0))};
    const AlgebraElement theta = AlgebraElement::zero(static_cast<int>(n));
    const BuiltMaps maps = build_maps(sys);
    return build_system_c3_2(maps.S, maps.T, maps.I, maps.J, solvability.coefficient, theta,
                             theta, triple, metric);
}

} // namespace cstarmod
