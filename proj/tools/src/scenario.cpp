#include "scenario.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>

#include "catalog.hpp"
#include "cstarmod/version.hpp"

namespace cstarmod::harness {

namespace {

double clamp_finite(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? 1e308 : -1e308;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

struct EffectiveOptions {
    std::uint64_t seed = 0;
    std::size_t samples = 1000;
    double tol = 1e-10;
};

EffectiveOptions effective(const json& config, const RunOptions& options) {
    EffectiveOptions eff;
    if (config.contains("seed")) eff.seed = config["seed"].get<std::uint64_t>();
    if (config.contains("samples")) eff.samples = config["samples"].get<std::size_t>();
    if (config.contains("tol")) eff.tol = config["tol"].get<double>();
    if (options.seed) eff.seed = *options.seed;
    if (options.samples) eff.samples = *options.samples;
    if (options.tol) eff.tol = *options.tol;
    return eff;
}

json scenario_echo(const json& config, const EffectiveOptions& eff) {
    json echo = config;
    echo["seed"] = eff.seed;
    echo["samples"] = eff.samples;
    echo["tol"] = eff.tol;
    return echo;
}

const json& target_of(const json& config) {
    if (!config.contains("target")) throw ConfigError("config: missing field 'target'");
    return config.at("target");
}

json run_axioms(const json& target, const EffectiveOptions& eff) {
    ModularMetric metric = metric_from_config(target.contains("metric") ? target["metric"]
                                                                        : target);
    metric.ctx.positivity_tol = eff.tol;
    Sampler sampler(eff.seed);
    json results = json::array();
    for (const auto& check : check_axioms(metric, sampler, eff.samples)) {
        results.push_back(check_to_json(check));
    }
    results.push_back(check_to_json(check_lambda_monotonicity(metric, sampler, eff.samples)));
    return results;
}

json run_cstar_class(const json& target, const EffectiveOptions& eff) {
    const AlgebraContext ctx = context_from_config(
        target.contains("ctx") ? target["ctx"] : json::object());
    Sampler sampler(eff.seed);
    json results = json::array();

    const auto each = [&](const char* key, const auto& runner) {
        if (!target.contains(key)) return;
        const json& field = target[key];
        if (field.is_string()) {
            runner(field.get<std::string>());
        } else if (field.is_array()) {
            for (const auto& entry : field) runner(entry.get<std::string>());
        } else {
            throw ConfigError(std::string("cstar_class: field '") + key +
                              "' must be a name or list of names");
        }
    };

    each("f", [&](const std::string& name) {
        const auto report = verify_cstar_class(cstar_function_from_name(name), ctx, sampler,
                                               eff.samples);
        for (const auto& check : report.checks) {
            json item = check_to_json(check);
            item["subject"] = report.subject;
            results.push_back(item);
        }
    });
    each("psi", [&](const std::string& name) {
        const auto report = verify_psi(element_function_from_name(name), ctx, sampler,
                                       eff.samples);
        for (const auto& check : report.checks) {
            json item = check_to_json(check);
            item["subject"] = "psi " + report.subject;
            results.push_back(item);
        }
    });
    each("phi", [&](const std::string& name) {
        const auto report = verify_phi(element_function_from_name(name), ctx, sampler,
                                       eff.samples);
        for (const auto& check : report.checks) {
            json item = check_to_json(check);
            item["subject"] = "phi " + report.subject;
            results.push_back(item);
        }
    });
    if (target.contains("triple")) {
        const auto report = verify_monotone_triple(triple_from_config(target["triple"]), ctx,
                                                   sampler, eff.samples);
        for (const auto& check : report.checks) {
            json item = check_to_json(check);
            item["subject"] = report.subject;
            results.push_back(item);
        }
    }
    if (results.empty()) {
        throw ConfigError("cstar_class: nothing to verify; supply f, psi, phi, or triple");
    }
    return results;
}

json run_contraction(const json& target, const EffectiveOptions& eff) {
    const MappingSystem sys = system_from_config(target.contains("system") ? target["system"]
                                                                           : target);
    Sampler sampler(eff.seed);
    json results = json::array();
    for (const auto& check : check_contraction(sys, sampler, eff.samples).checks) {
        results.push_back(check_to_json(check));
    }
    return results;
}

json point_to_json(const Point& p) {
    if (std::holds_alternative<double>(p)) return std::get<double>(p);
    return std::get<GridFunction>(p);
}

json run_fixed_point(const json& target, const EffectiveOptions& eff) {
    const json& system_spec = target.contains("system") ? target["system"] : target;
    const MappingSystem sys = system_from_config(system_spec);

    SearchDomain dom = SearchDomain::interval(-10.0, 10.0, 1e-3);
    if (target.contains("domain") && target["domain"].contains("shifts")) {
        // Finite domain of anchor translates for instance-backed systems.
        if (!system_spec.contains("integral_instance")) {
            throw ConfigError("fixed_point domain: 'shifts' needs an integral_instance system");
        }
        const GridFunction anchor =
            integral_anchor(integral_from_config(system_spec["integral_instance"]));
        std::vector<Point> points;
        for (const double shift : target["domain"]["shifts"].get<std::vector<double>>()) {
            GridFunction g = anchor;
            for (auto& v : g) v += shift;
            points.push_back(Point(std::move(g)));
        }
        dom = SearchDomain::finite(std::move(points));
    } else if (target.contains("domain")) {
        dom = domain_from_config(target["domain"]);
    }
    FixedPointSearch search;
    search.tol = eff.tol;
    search.gate_seed = eff.seed;
    search.gate_samples = std::min<std::size_t>(eff.samples, 200);
    search.commuting_pairs = target.contains("commuting_pairs") &&
                             target["commuting_pairs"].get<bool>();

    const auto result = find_common_fixed_point(sys, dom, search);

    json results = json::array();
    results.push_back(value_item("fixed_point_found", result.point.has_value(),
                                 result.point ? point_to_json(*result.point) : json(nullptr)));
    results.push_back(value_item("unique_in_domain", true, result.unique_in_domain));
    results.push_back(value_item("domain_matches", true, result.domain_matches));
    bool residuals_ok = result.point.has_value();
    json residuals = json::object();
    for (const auto& [key, value] : result.residuals) {
        residuals[key] = clamp_finite(value);
        if (value > eff.tol) residuals_ok = false;
    }
    results.push_back(value_item("residuals", residuals_ok, residuals,
                                 "max residual must stay at or below tol"));
    for (const auto& warning : result.warnings) {
        results.push_back(value_item("warning", true, warning,
                                     "hypothesis gate; search result is best-effort"));
    }
    return results;
}

json grid_function_to_json(const GridFunction& g) {
    return json(g);
}

json run_integral(const json& target, const EffectiveOptions& eff, const RunOptions& options) {
    IntegralSystem sys = integral_from_config(target);
    Sampler sampler(eff.seed);
    json results = json::array();

    const double m1 = estimate_m1(sys);
    results.push_back(value_item("kernel_column_bound", true, m1));
    if (!sys.M1.has_value()) sys.M1 = m1;

    if (sys.L1 && sys.L2) {
        for (const auto& check : verify_lipschitz_conditions(sys, sampler, eff.samples).checks) {
            results.push_back(check_to_json(check));
        }
        const auto solvability = check_solvability(sys.mu, *sys.L1, *sys.L2, *sys.M1);
        results.push_back(value_item("solvability_bound", solvability.ok, solvability.bound,
                                     "(1 + |mu| L2 M1) / L1 must stay at or below 1"));
    } else {
        results.push_back(value_item("solvability_bound", true, nullptr,
                                     "L1/L2 not supplied; bound unchecked"));
    }

    const std::size_t init_count =
        target.contains("inits") ? target["inits"].get<std::size_t>() : 5;
    std::vector<GridFunction> inits;
    for (std::size_t i = 0; i < std::max<std::size_t>(init_count, 1); ++i) {
        inits.push_back(GridFunction(sys.grid.size(), sampler.uniform(-5.0, 5.0)));
    }

    SolveParams params;
    params.tol = eff.tol;
    try {
        const auto report = solve(sys, inits, params);
        json residuals = json::object();
        bool residuals_ok = true;
        for (const auto& [key, value] : report.residuals) {
            residuals[key] = clamp_finite(value);
            if (value > params.tol) residuals_ok = false;
        }
        results.push_back(value_item("solve_residuals", residuals_ok, residuals));
        results.push_back(value_item("agreed_across_inits", report.agreed_across_inits,
                                     report.max_init_disagreement));
        results.push_back(value_item("solution", true, grid_function_to_json(report.solution)));

        if (!options.csv_path.empty()) {
            std::ofstream csv(options.csv_path);
            if (!csv) throw ConfigError("cannot open csv path '" + options.csv_path + "'");
            csv << "t,x\n";
            char line[80];
            for (std::size_t i = 0; i < sys.grid.size(); ++i) {
                std::snprintf(line, sizeof(line), "%.17g,%.17g\n", sys.grid.points[i],
                              report.solution[i]);
                csv << line;
            }
        }

        if (target.contains("wrap_check") && target["wrap_check"].get<bool>()) {
            const auto wrapped = wrap_two_pair_system(sys, report.solution);
            Sampler wrap_sampler(eff.seed);
            for (const auto& check : check_contraction(wrapped, wrap_sampler, eff.samples).checks) {
                json item = check_to_json(check);
                item["subject"] = "wrapped_two_pair_system";
                results.push_back(item);
            }
        }
    } catch (const InconsistentInstanceError& err) {
        results.push_back(value_item("solve", false, nullptr, err.what()));
    } catch (const DivergenceError& err) {
        results.push_back(value_item("solve", false, nullptr, err.what()));
    }
    return results;
}

json run_positivity(const json& target, const EffectiveOptions&) {
    const int dim = target.contains("dim") ? target["dim"].get<int>() : 2;
    AlgebraContext ctx(dim, NormMode::operator_norm, OrderMode::loewner);
    if (!target.contains("a") || !target.contains("b")) {
        throw ConfigError("positivity: fields 'a' and 'b' are required");
    }
    const AlgebraElement a = element_from_config(target["a"], dim);
    const AlgebraElement b = element_from_config(target["b"], dim);
    const AlgebraElement product = a * b;

    json results = json::array();
    results.push_back(value_item("first_factor_positive", is_positive(a, ctx), true));
    results.push_back(value_item("second_factor_positive", is_positive(b, ctx), true));
    results.push_back(value_item("product_not_positive", !is_positive(product, ctx), true,
                                 "positivity is not closed under products"));
    json product_entries = json::array();
    for (int i = 0; i < dim; ++i) {
        json row = json::array();
        for (int j = 0; j < dim; ++j) {
            row.push_back(json::array(
                {product.entries()(i, j).real(), product.entries()(i, j).imag()}));
        }
        product_entries.push_back(row);
    }
    results.push_back(value_item("product_entries", true, product_entries));
    return results;
}

bool results_passed(const json& results) {
    for (const auto& item : results) {
        if (item.contains("passed") && !item["passed"].get<bool>()) return false;
    }
    return true;
}

} // namespace

json check_to_json(const CheckResult& check) {
    json violations = json::array();
    for (const auto& violation : check.violations) {
        violations.push_back(
            {{"witness", violation.witness}, {"magnitude", clamp_finite(violation.magnitude)}});
    }
    return json{{"id", check.id},
                {"applicable", check.applicable},
                {"passed", check.passed()},
                {"samples", check.samples},
                {"total_violations", check.total_violations},
                {"violations", violations},
                {"note", check.note}};
}

json value_item(const std::string& id, bool passed, const json& value, const std::string& note) {
    return json{{"id", id}, {"passed", passed}, {"value", value}, {"note", note}};
}

json assemble_report(const json& echo, json results, bool passed, const RunOptions& options,
                     double wall_ms) {
    json report;
    report["schema_version"] = kReportSchemaVersion;
    report["version"] = kVersionString;
    report["scenario"] = echo;
    report["results"] = std::move(results);
    report["passed"] = passed;
    if (!options.no_timestamp) {
        report["timestamp"] = iso_timestamp();
        report["wall_clock_ms"] = wall_ms;
    }
    return report;
}

RunOutcome run_config(const json& config, const RunOptions& options) {
    if (!config.is_object()) throw ConfigError("config: expected a JSON object");
    if (config.contains("schema_version") && config["schema_version"].get<int>() != 1) {
        throw ConfigError("config: unsupported schema_version");
    }
    if (!config.contains("kind")) throw ConfigError("config: missing field 'kind'");
    const std::string kind = config["kind"].get<std::string>();
    const EffectiveOptions eff = effective(config, options);

    const auto started = std::chrono::steady_clock::now();
    json results;
    if (kind == "axioms") {
        results = run_axioms(target_of(config), eff);
    } else if (kind == "cstar_class") {
        results = run_cstar_class(target_of(config), eff);
    } else if (kind == "contraction") {
        results = run_contraction(target_of(config), eff);
    } else if (kind == "fixed_point") {
        results = run_fixed_point(target_of(config), eff);
    } else if (kind == "integral") {
        results = run_integral(target_of(config), eff, options);
    } else if (kind == "positivity") {
        results = run_positivity(target_of(config), eff);
    } else {
        throw ConfigError("config: unknown kind '" + kind + "'");
    }
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();

    RunOutcome outcome;
    outcome.passed = results_passed(results);
    outcome.report = assemble_report(scenario_echo(config, eff), std::move(results),
                                     outcome.passed, options, wall_ms);
    return outcome;
}

} // namespace cstarmod::harness
