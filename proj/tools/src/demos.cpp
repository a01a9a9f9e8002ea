#include "demos.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "catalog.hpp"

namespace cstarmod::harness {

namespace {

constexpr std::uint64_t kDemoSeed = 0;

json expectation(const std::string& id, bool ok, const std::string& statement) {
    return json{{"id", "expected_" + id}, {"passed", ok}, {"value", ok}, {"note", statement}};
}

void append_expectations(RunOutcome& outcome, const json& expectations) {
    for (const auto& item : expectations) {
        outcome.report["results"].push_back(item);
        if (!item["passed"].get<bool>()) outcome.passed = false;
    }
    outcome.report["passed"] = outcome.passed;
}

RunOutcome from_config(json config, const std::string& name, const std::string& anchor,
                       const RunOptions& options) {
    config["demo"] = name;
    config["anchor"] = anchor;
    if (!config.contains("seed")) config["seed"] = kDemoSeed;
    return run_config(config, options);
}

const json* find_item(const RunOutcome& outcome, const std::string& id) {
    for (const auto& item : outcome.report["results"]) {
        if (item["id"] == id) return &item;
    }
    return nullptr;
}

RunOutcome demo_example_3_2(const RunOptions& options) {
    json config{{"schema_version", 1},
                {"kind", "cstar_class"},
                {"samples", 1000},
                {"target",
                 {{"ctx", {{"dim", 2}, {"norm", "frobenius"}, {"order", "entrywise"}}},
                  {"f", json::array({"subtract", "scale:0.5"})}}}};
    RunOutcome outcome = from_config(std::move(config), "example_3_2",
                                     "entrywise difference and fractional scaling class functions",
                                     options);
    append_expectations(outcome,
                        json::array({expectation("class_membership", outcome.passed,
                                                 "both built-ins verify as class functions")}));
    return outcome;
}

RunOutcome demo_positivity_counterexample(const RunOptions& options) {
    json config{{"schema_version", 1},
                {"kind", "positivity"},
                {"target",
                 {{"a", json::array({json::array({3, 2}), json::array({2, 3})})},
                  {"b", json::array({json::array({1, -2}), json::array({-2, 4})})}}}};
    RunOutcome outcome = from_config(std::move(config), "positivity_counterexample",
                                     "two positive matrices with a non-positive product", options);

    const json* entries = find_item(outcome, "product_entries");
    const json expected_product = json::array(
        {json::array({json::array({-1.0, 0.0}), json::array({2.0, 0.0})}),
         json::array({json::array({-4.0, 0.0}), json::array({8.0, 0.0})})});
    const bool entries_match = entries != nullptr && (*entries)["value"] == expected_product;
    append_expectations(outcome, json::array({expectation(
                                     "product_entries_match", entries_match,
                                     "product reproduced entry for entry")}));
    return outcome;
}

RunOutcome demo_axioms(const std::string& name, json metric_spec, const std::string& anchor,
                       const RunOptions& options) {
    json config{{"schema_version", 1},
                {"kind", "axioms"},
                {"samples", 1000},
                {"tol", 1e-10},
                {"target", {{"metric", std::move(metric_spec)}}}};
    RunOutcome outcome = from_config(std::move(config), name, anchor, options);
    bool zero_violations = true;
    for (const auto& item : outcome.report["results"]) {
        if (item.contains("total_violations") && item["total_violations"].get<std::size_t>() > 0) {
            zero_violations = false;
        }
    }
    append_expectations(outcome,
                        json::array({expectation("zero_violations", zero_violations,
                                                 "every axiom sweep reports zero violations")}));
    return outcome;
}

RunOutcome demo_example_4_3_cauchy(const RunOptions& options) {
    const std::uint64_t seed = options.seed.value_or(kDemoSeed);
    const std::size_t samples = options.samples.value_or(300);
    const double tol = options.tol.value_or(1e-10);
    const auto started = std::chrono::steady_clock::now();

    const auto grid = GridDomain::uniform_trapezoid(0.0, 1.0, 64);
    ModularMetric metric = make_multiplication_modular(grid);
    metric.ctx.positivity_tol = tol;

    json results = json::array();
    Sampler sampler(seed);
    for (const auto& check : check_axioms(metric, sampler, samples)) {
        results.push_back(check_to_json(check));
    }
    results.push_back(check_to_json(check_lambda_monotonicity(metric, sampler, samples)));

    // Scaled-profile sequence: sup distance to zero decays like 1/n.
    std::vector<Point> decaying;
    for (int n = 1; n <= 200; ++n) {
        GridFunction f(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) f[i] = grid.points[i] / n;
        decaying.push_back(Point(std::move(f)));
    }
    const Point zero(GridFunction(grid.size(), 0.0));
    const auto decay_report = check_sequence(metric, decaying, zero, {0.5, 1.0}, 1e-1, 100);
    results.push_back(value_item("decaying_sequence_convergent", decay_report.convergent, true));
    results.push_back(value_item("decaying_sequence_cauchy", decay_report.cauchy, true));

    // Alternating-sign sequence: pairwise distance never decays.
    std::vector<Point> alternating;
    for (int n = 1; n <= 40; ++n) {
        alternating.push_back(Point(GridFunction(grid.size(), n % 2 == 0 ? 1.0 : -1.0)));
    }
    const auto alternating_report =
        check_sequence(metric, alternating, std::nullopt, {0.5, 1.0}, 1e-1, 20);
    results.push_back(
        value_item("alternating_sequence_not_cauchy", !alternating_report.cauchy, true));
    results.push_back(value_item("alternating_sequence_diameter", true,
                                 alternating_report.bounded_diameter));

    bool passed = true;
    for (const auto& item : results) {
        if (item.contains("passed") && !item["passed"].get<bool>()) passed = false;
    }
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();
    const json echo{{"demo", "example_4_3_cauchy"},
                    {"anchor", "sup-norm multiplication metric on a 64-node grid"},
                    {"kind", "sequence"},
                    {"seed", seed},
                    {"samples", samples},
                    {"tol", tol}};
    RunOutcome outcome;
    outcome.passed = passed;
    outcome.report = assemble_report(echo, std::move(results), passed, options, wall_ms);
    return outcome;
}

RunOutcome demo_example_4_4(const RunOptions& options) {
    const std::uint64_t seed = options.seed.value_or(kDemoSeed);
    const std::size_t samples = options.samples.value_or(500);
    const double tol = options.tol.value_or(1e-12);
    const auto started = std::chrono::steady_clock::now();

    const MappingSystem sys = example_4_4_system();
    const SearchDomain dom = SearchDomain::interval(-10.0, 10.0, 1e-3);
    json results = json::array();

    Sampler sampler(seed);
    for (const auto& check : check_contraction(sys, sampler, samples).checks) {
        results.push_back(check_to_json(check));
    }

    const auto owc_si = check_owc(sys.metric(), sys.map_s(), sys.map_i(), dom, 1e-9);
    const auto owc_tj = check_owc(sys.metric(), sys.map_t(), sys.map_j(), dom, 1e-9);
    const bool si_at_two = owc_si.owc && owc_si.witness.has_value() &&
                           std::abs(std::get<double>(*owc_si.witness) - 2.0) <= 1e-6;
    const bool tj_at_two = owc_tj.owc && owc_tj.witness.has_value() &&
                           std::abs(std::get<double>(*owc_tj.witness) - 2.0) <= 1e-6;
    results.push_back(value_item("owc_pair_si", owc_si.owc,
                                 owc_si.witness ? json(std::get<double>(*owc_si.witness))
                                                : json(nullptr)));
    results.push_back(value_item("owc_pair_tj", owc_tj.owc,
                                 owc_tj.witness ? json(std::get<double>(*owc_tj.witness))
                                                : json(nullptr)));

    FixedPointSearch search;
    search.tol = tol;
    search.gate_seed = seed;
    const auto fixed = find_common_fixed_point(sys, dom, search);
    const bool found_two = fixed.point.has_value() &&
                           std::abs(std::get<double>(*fixed.point) - 2.0) <= 1e-9;
    results.push_back(value_item("fixed_point_found", fixed.point.has_value(),
                                 fixed.point ? json(std::get<double>(*fixed.point))
                                             : json(nullptr)));
    results.push_back(value_item("unique_in_domain", fixed.unique_in_domain,
                                 fixed.domain_matches));
    bool residuals_ok = fixed.point.has_value();
    json residuals = json::object();
    for (const auto& [key, value] : fixed.residuals) {
        residuals[key] = value;
        if (value > tol) residuals_ok = false;
    }
    results.push_back(value_item("residuals", residuals_ok, residuals));
    for (const auto& warning : fixed.warnings) {
        results.push_back(value_item("warning", true, warning));
    }

    results.push_back(expectation("fixed_point_two", found_two, "common fixed point sits at 2"));
    results.push_back(expectation("owc_witness_two", si_at_two && tj_at_two,
                                  "both pairs commute at the coincidence point 2"));
    results.push_back(expectation("no_second_fixed_point", fixed.unique_in_domain,
                                  "the scan finds exactly one matching point"));

    bool passed = true;
    for (const auto& item : results) {
        if (item.contains("passed") && !item["passed"].get<bool>()) passed = false;
    }
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();
    const json echo{{"demo", "example_4_4"},
                    {"anchor", "piecewise scalar system with common fixed point 2"},
                    {"kind", "fixed_point"},
                    {"seed", seed},
                    {"samples", samples},
                    {"tol", tol}};
    RunOutcome outcome;
    outcome.passed = passed;
    outcome.report = assemble_report(echo, std::move(results), passed, options, wall_ms);
    return outcome;
}

RunOutcome demo_theorem_5_1(const RunOptions& options) {
    const std::uint64_t seed = options.seed.value_or(kDemoSeed);
    const std::size_t samples = options.samples.value_or(500);
    const double tol = options.tol.value_or(1e-8);
    const auto started = std::chrono::steady_clock::now();

    IntegralSystem sys = make_canonical_instance(64);
    json results = json::array();
    Sampler sampler(seed);

    const double m1 = estimate_m1(sys);
    sys.M1 = m1;
    results.push_back(value_item("kernel_column_bound", true, m1));
    results.push_back(expectation("kernel_column_bound_half", std::abs(m1 - 0.5) <= 1e-3,
                                  "quadrature bound matches the analytic value 1/2"));

    const auto lipschitz = verify_lipschitz_conditions(sys, sampler, samples);
    for (const auto& check : lipschitz.checks) results.push_back(check_to_json(check));

    const auto solvability = check_solvability(sys.mu, *sys.L1, *sys.L2, m1);
    results.push_back(value_item("solvability_bound", solvability.ok, solvability.bound));
    results.push_back(expectation(
        "solvability_bound_value",
        solvability.ok && std::abs(solvability.bound - 1.1 / std::sqrt(2.0)) <= 1e-3,
        "bound evaluates to (1 + 0.2 * 0.5) / sqrt(2)"));

    std::vector<GridFunction> inits;
    for (int k = 0; k < 5; ++k) {
        inits.push_back(GridFunction(sys.grid.size(), sampler.uniform(-5.0, 5.0)));
    }
    SolveParams params;
    params.tol = tol;
    const auto solved = solve(sys, inits, params);

    json residuals = json::object();
    bool residuals_ok = true;
    for (const auto& [key, value] : solved.residuals) {
        residuals[key] = value;
        if (value > tol) residuals_ok = false;
    }
    results.push_back(value_item("solve_residuals", residuals_ok, residuals));
    results.push_back(value_item("agreed_across_inits", solved.agreed_across_inits,
                                 solved.max_init_disagreement));

    double sup_error = 0.0;
    for (std::size_t i = 0; i < sys.grid.size(); ++i) {
        sup_error = std::max(sup_error, std::abs(solved.solution[i] -
                                                 std::sin(std::numbers::pi * sys.grid.points[i])));
    }
    results.push_back(expectation("solution_matches_sine_profile", sup_error <= 1e-8,
                                  "sup error against the sine profile stays within 1e-8"));
    results.push_back(value_item("solution_sup_error", sup_error <= 1e-8, sup_error));

    const auto wrapped = wrap_two_pair_system(sys, solved.solution);
    Sampler wrap_sampler(seed);
    bool wrapped_ok = true;
    for (const auto& check : check_contraction(wrapped, wrap_sampler, samples).checks) {
        json item = check_to_json(check);
        item["subject"] = "wrapped_two_pair_system";
        if (!check.passed()) wrapped_ok = false;
        results.push_back(item);
    }
    results.push_back(expectation("wrapped_system_contracts", wrapped_ok,
                                  "the induced two-pair system passes the displacement bound"));

    bool passed = true;
    for (const auto& item : results) {
        if (item.contains("passed") && !item["passed"].get<bool>()) passed = false;
    }
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();
    const json echo{{"demo", "theorem_5_1_canonical"},
                    {"anchor", "product-kernel integral system with sine-profile solution"},
                    {"kind", "integral"},
                    {"seed", seed},
                    {"samples", samples},
                    {"tol", tol}};
    RunOutcome outcome;
    outcome.passed = passed;
    outcome.report = assemble_report(echo, std::move(results), passed, options, wall_ms);
    return outcome;
}

} // namespace

std::vector<std::string> demo_names() {
    return {"example_3_2",      "positivity_counterexample", "example_4_1_axioms",
            "example_4_2_axioms", "example_4_3_cauchy",        "example_4_4",
            "theorem_5_1_canonical"};
}

RunOutcome run_demo(const std::string& name, const RunOptions& options) {
    if (name == "example_3_2") return demo_example_3_2(options);
    if (name == "positivity_counterexample") return demo_positivity_counterexample(options);
    if (name == "example_4_1_axioms") {
        return demo_axioms(name, "example_4_1", "scalar diagonal metric axiom sweep", options);
    }
    if (name == "example_4_2_axioms") {
        return demo_axioms(name,
                           json{{"name", "example_4_2"}, {"c", 0.5}, {"alpha", 2.0}},
                           "geometric-carrier metric axiom sweep", options);
    }
    if (name == "example_4_3_cauchy") return demo_example_4_3_cauchy(options);
    if (name == "example_4_4") return demo_example_4_4(options);
    if (name == "theorem_5_1_canonical") return demo_theorem_5_1(options);
    throw ConfigError("demo: unknown name '" + name + "'");
}

} // namespace cstarmod::harness
