#include "catalog.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace cstarmod::harness {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream stream(text);
    std::string part;
    while (std::getline(stream, part, sep)) parts.push_back(part);
    return parts;
}

double parse_number(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw ConfigError(what + ": cannot parse number '" + text + "'");
    }
}

json require_field(const json& spec, const std::string& field, const std::string& where) {
    if (!spec.contains(field)) {
        throw ConfigError(where + ": missing field '" + field + "'");
    }
    return spec.at(field);
}

GridDomain grid_from_config(const json& spec) {
    const double lo = require_field(spec, "lo", "grid").get<double>();
    const double hi = require_field(spec, "hi", "grid").get<double>();
    const auto n = require_field(spec, "n", "grid").get<std::size_t>();
    return GridDomain::uniform_trapezoid(lo, hi, n);
}

} // namespace

ModularMetric metric_from_config(const json& spec) {
    const std::string name = spec.is_string()
                                 ? spec.get<std::string>()
                                 : require_field(spec, "name", "metric").get<std::string>();
    if (name == "example_4_1") return make_example_4_1();
    if (name == "example_4_2") {
        const double c = spec.is_object() && spec.contains("c") ? spec["c"].get<double>() : 0.5;
        const double alpha =
            spec.is_object() && spec.contains("alpha") ? spec["alpha"].get<double>() : 2.0;
        return make_example_4_2(c, alpha);
    }
    if (name == "multiplication") {
        if (!spec.is_object() || !spec.contains("grid")) {
            throw ConfigError("metric 'multiplication': missing field 'grid'");
        }
        return make_multiplication_modular(grid_from_config(spec["grid"]));
    }
    if (name == "broken_asymmetric") {
        ModularMetric m = make_example_4_1();
        m.name = "broken_asymmetric";
        m.evaluator = [](double lambda, const Point& x, const Point& y) {
            const double d = (std::get<double>(x) - std::get<double>(y)) / lambda;
            Eigen::VectorXd diag(2);
            diag << d, 0.0;
            return AlgebraElement::diagonal(diag);
        };
        return m;
    }
    throw ConfigError("metric: unknown name '" + name + "'");
}

SelfMap example_4_4_I() {
    return SelfMap{[](const Point& p) {
                       const double x = std::get<double>(p);
                       if (x < 2.0) return Point(2.0 * x / 3.0);
                       if (x > 2.0) return Point(0.0);
                       return Point(2.0);
                   },
                   "example_4_4_I"};
}

SelfMap map_from_name(const std::string& spec) {
    if (spec == "identity") return identity_map();
    if (spec == "example_4_4_I") return example_4_4_I();
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        const std::string head = spec.substr(0, colon);
        const std::string args = spec.substr(colon + 1);
        if (head == "const") return constant_map(parse_number(args, "map const"));
        if (head == "affine") {
            const auto parts = split(args, ',');
            if (parts.size() != 2) throw ConfigError("map affine: expected 'affine:slope,offset'");
            return affine_map(parse_number(parts[0], "map affine"),
                              parse_number(parts[1], "map affine"));
        }
    }
    throw ConfigError("map: unknown spec '" + spec + "'");
}

ElementFunction element_function_from_name(const std::string& spec) {
    double slope = 1.0;
    bool seen = false;
    for (const std::string& part : split(spec, '|')) {
        const auto colon = part.find(':');
        if (colon == std::string::npos || part.substr(0, colon) != "linear") {
            throw ConfigError("element function: unknown spec '" + part + "'");
        }
        slope *= parse_number(part.substr(colon + 1), "element function linear");
        seen = true;
    }
    if (!seen) throw ConfigError("element function: empty spec");
    return linear_map(slope);
}

CStarFunction cstar_function_from_name(const std::string& spec) {
    if (spec == "subtract") return builtin_subtract();
    if (spec == "add") {
        // Deliberately invalid fixture for checker-sensitivity runs.
        CStarFunction f;
        f.name = "add";
        f.evaluator = [](const AlgebraElement& a, const AlgebraElement& b) { return a + b; };
        return f;
    }
    if (spec == "phi_subtract") return builtin_phi_subtract(linear_map(0.5));
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        const std::string head = spec.substr(0, colon);
        const std::string args = spec.substr(colon + 1);
        if (head == "scale") return builtin_scale(parse_number(args, "class function scale"));
        if (head == "phi_subtract") {
            return builtin_phi_subtract(linear_map(parse_number(args, "class function phi_subtract")));
        }
    }
    throw ConfigError("class function: unknown spec '" + spec + "'");
}

MonotoneTriple triple_from_config(const json& spec) {
    return MonotoneTriple{
        element_function_from_name(require_field(spec, "psi", "triple").get<std::string>()),
        element_function_from_name(require_field(spec, "phi", "triple").get<std::string>()),
        cstar_function_from_name(require_field(spec, "f", "triple").get<std::string>())};
}

AlgebraContext context_from_config(const json& spec) {
    const int dim = spec.contains("dim") ? spec["dim"].get<int>() : 2;
    NormMode norm = NormMode::operator_norm;
    if (spec.contains("norm")) {
        const auto text = spec["norm"].get<std::string>();
        if (text == "operator") {
            norm = NormMode::operator_norm;
        } else if (text == "frobenius") {
            norm = NormMode::frobenius;
        } else {
            throw ConfigError("ctx: unknown norm '" + text + "'");
        }
    }
    OrderMode order = OrderMode::loewner;
    if (spec.contains("order")) {
        const auto text = spec["order"].get<std::string>();
        if (text == "loewner") {
            order = OrderMode::loewner;
        } else if (text == "entrywise") {
            order = OrderMode::entrywise;
        } else {
            throw ConfigError("ctx: unknown order '" + text + "'");
        }
    }
    const double tol = spec.contains("positivity_tol") ? spec["positivity_tol"].get<double>()
                                                       : 1e-10;
    return AlgebraContext(dim, norm, order, tol);
}

AlgebraElement element_from_config(const json& spec, int dim) {
    if (spec.is_number()) {
        return AlgebraElement::scaled_identity(dim, spec.get<double>());
    }
    if (spec.is_array() && spec.size() == 2 && spec[0].is_number() && spec[1].is_number()) {
        return AlgebraElement::scaled_identity(
            dim, std::complex<double>(spec[0].get<double>(), spec[1].get<double>()));
    }
    if (spec.is_array()) {
        const auto n = spec.size();
        if (static_cast<int>(n) != dim) {
            throw ConfigError("element: matrix of size " + std::to_string(n) +
                              " does not match context dim " + std::to_string(dim));
        }
        Eigen::MatrixXcd m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& row = spec[i];
            if (!row.is_array() || row.size() != n) throw ConfigError("element: ragged matrix");
            for (std::size_t j = 0; j < n; ++j) {
                const auto& entry = row[j];
                if (entry.is_number()) {
                    m(i, j) = entry.get<double>();
                } else if (entry.is_array() && entry.size() == 2) {
                    m(i, j) = std::complex<double>(entry[0].get<double>(), entry[1].get<double>());
                } else {
                    throw ConfigError("element: entries must be numbers or [re, im] pairs");
                }
            }
        }
        return AlgebraElement(std::move(m));
    }
    throw ConfigError("element: expected number, [re, im], or matrix");
}

MappingSystem system_from_config(const json& spec) {
    if (spec.contains("integral_instance")) {
        const IntegralSystem instance = integral_from_config(spec["integral_instance"]);
        return wrap_two_pair_system(instance, integral_anchor(instance));
    }
    const ModularMetric metric = metric_from_config(require_field(spec, "metric", "system"));
    const MonotoneTriple triple = triple_from_config(require_field(spec, "triple", "system"));
    const json maps = require_field(spec, "maps", "system");
    const json coeffs = require_field(spec, "coeffs", "system");
    const int dim = metric.ctx.dim;

    const auto map_field = [&](const char* key) {
        return map_from_name(require_field(maps, key, "system maps").get<std::string>());
    };
    const auto coeff_field = [&](const char* key) {
        if (!coeffs.contains(key)) return AlgebraElement::zero(dim);
        return element_from_config(coeffs.at(key), dim);
    };

    const std::string level = spec.contains("level") ? spec["level"].get<std::string>() : "general";
    if (level == "general") {
        return MappingSystem(map_field("I"), map_field("J"), map_field("R"), map_field("S"),
                             map_field("T"), map_field("U"), coeff_field("a"), coeff_field("b"),
                             coeff_field("c"), triple, metric);
    }
    if (level == "c3_2") {
        return build_system_c3_2(map_field("S"), map_field("T"), map_field("I"), map_field("J"),
                                 coeff_field("a"), coeff_field("b"), coeff_field("c"), triple,
                                 metric);
    }
    if (level == "c3_3") {
        return build_system_c3_3(map_field("S"), map_field("T"), coeff_field("a"),
                                 coeff_field("b"), coeff_field("c"), triple, metric);
    }
    if (level == "c3_4") {
        return build_system_c3_4(map_field("S"), map_field("T"), coeff_field("a"), triple,
                                 metric);
    }
    throw ConfigError("system: unknown level '" + level + "'");
}

MappingSystem example_4_4_system() {
    const AlgebraElement coeff = AlgebraElement::scaled_identity(2, 0.4);
    const MonotoneTriple triple{linear_map(2.0), linear_map(1.0), builtin_subtract()};
    return build_system_c3_2(constant_map(2.0), constant_map(2.0), example_4_4_I(),
                             affine_map(-1.0, 4.0), coeff, coeff, coeff, triple,
                             make_example_4_1());
}

SearchDomain domain_from_config(const json& spec) {
    if (spec.contains("points")) {
        std::vector<Point> points;
        for (const auto& p : spec["points"]) {
            if (p.is_number()) {
                points.push_back(Point(p.get<double>()));
            } else {
                points.push_back(Point(p.get<GridFunction>()));
            }
        }
        return SearchDomain::finite(std::move(points));
    }
    return SearchDomain::interval(require_field(spec, "lo", "domain").get<double>(),
                                  require_field(spec, "hi", "domain").get<double>(),
                                  require_field(spec, "step", "domain").get<double>());
}

namespace {

PointwiseFn pointwise_from_name(const std::string& spec, const std::string& what) {
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        const std::string head = spec.substr(0, colon);
        const std::string args = spec.substr(colon + 1);
        if (head == "linear") {
            const auto parts = split(args, ',');
            const double a = parse_number(parts[0], what);
            const double b = parts.size() > 1 ? parse_number(parts[1], what) : 0.0;
            return [a, b](double, double x) { return a * x + b; };
        }
        if (head == "profile_affine") {
            const double a = parse_number(args, what);
            return [a](double s, double x) { return a * x - std::sin(std::numbers::pi * s); };
        }
    }
    throw ConfigError(what + ": unknown spec '" + spec + "'");
}

double pointwise_fixed_value(const PointwiseFn& k, double t) {
    // Root of k(t, xi) = xi by bracket expansion and bisection.
    const auto residual = [&](double xi) { return k(t, xi) - xi; };
    double delta = 1.0, lo = -1.0, hi = 1.0;
    double r_lo = residual(lo), r_hi = residual(hi);
    while ((r_lo < 0.0) == (r_hi < 0.0)) {
        if (r_lo == 0.0) return lo;
        if (r_hi == 0.0) return hi;
        delta *= 2.0;
        if (delta > 1e6) throw DivergenceError("instance offset: pointwise equation has no root");
        lo = -delta;
        hi = delta;
        r_lo = residual(lo);
        r_hi = residual(hi);
    }
    for (int i = 0; i < 200; ++i) {
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
    }
    return 0.5 * (lo + hi);
}

} // namespace

GridFunction integral_anchor(const IntegralSystem& sys) {
    sys.validate();
    GridFunction anchor(sys.grid.size());
    for (std::size_t i = 0; i < anchor.size(); ++i) {
        anchor[i] = pointwise_fixed_value(sys.k1, sys.grid.points[i]);
    }
    return anchor;
}

IntegralSystem integral_from_config(const json& spec) {
    IntegralSystem sys;
    if (spec.contains("instance")) {
        const auto name = spec["instance"].get<std::string>();
        const auto n = spec.contains("n") ? spec["n"].get<std::size_t>() : 64;
        if (name == "canonical") {
            sys = make_canonical_instance(n);
        } else if (name == "all_zero") {
            sys = make_all_zero_instance(n);
        } else {
            throw ConfigError("integral: unknown instance '" + name + "'");
        }
    } else {
        sys.grid = grid_from_config(require_field(spec, "grid", "integral"));
        const std::size_t n = sys.grid.size();

        const auto kernel_spec = require_field(spec, "kernel", "integral").get<std::string>();
        sys.kernel.resize(n, n);
        if (kernel_spec == "product") {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    sys.kernel(i, j) = sys.grid.points[i] * sys.grid.points[j];
                }
            }
        } else if (kernel_spec.rfind("constant:", 0) == 0) {
            sys.kernel.setConstant(parse_number(kernel_spec.substr(9), "integral kernel"));
        } else {
            throw ConfigError("integral kernel: unknown spec '" + kernel_spec + "'");
        }

        sys.k1 = sys.k2 = pointwise_from_name(require_field(spec, "k", "integral").get<std::string>(),
                                              "integral k");
        sys.h1 = sys.h2 = pointwise_from_name(require_field(spec, "h", "integral").get<std::string>(),
                                              "integral h");
        sys.mu = spec.contains("mu") ? spec["mu"].get<double>() : 0.0;
        if (spec.contains("L1")) sys.L1 = spec["L1"].get<double>();
        if (spec.contains("L2")) sys.L2 = spec["L2"].get<double>();

        const std::string w_spec = spec.contains("w") ? spec["w"].get<std::string>() : "zero";
        sys.w.assign(n, 0.0);
        if (w_spec == "cancel_integral") {
            GridFunction anchor(n);
            for (std::size_t i = 0; i < n; ++i) {
                anchor[i] = pointwise_fixed_value(sys.k1, sys.grid.points[i]);
            }
            for (std::size_t i = 0; i < n; ++i) {
                double integral = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    integral += sys.kernel(i, j) * sys.h1(sys.grid.points[j], anchor[j]) *
                                sys.grid.weights[j];
                }
                sys.w[i] = -sys.mu.real() * integral;
            }
        } else if (w_spec != "zero") {
            throw ConfigError("integral w: unknown spec '" + w_spec + "'");
        }
    }

    if (spec.contains("mu") && spec.contains("instance")) {
        throw ConfigError("integral: named instances fix mu; override not supported");
    }
    if (spec.contains("w_shift")) {
        const double shift = spec["w_shift"].get<double>();
        for (auto& v : sys.w) v += shift;
    }
    sys.validate();
    return sys;
}

} // namespace cstarmod::harness
