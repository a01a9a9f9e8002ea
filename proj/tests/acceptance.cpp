// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Usage: acceptance [path-to-cli-binary]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "catalog.hpp"
#include "demos.hpp"
#include "scenario.hpp"

using namespace cstarmod;
using harness::json;

namespace {

int g_failures = 0;

void report_line(const std::string& label, bool ok, const std::string& detail = "") {
    std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", label.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

CommandResult run_command(const std::string& command) {
    CommandResult result;
    FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
    if (!pipe) return result;
    char buffer[4096];
    std::size_t got = 0;
    while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
        result.output.append(buffer, got);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

// --- criterion 1: positivity counterexample -------------------------------

void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    const AlgebraContext ctx(2, NormMode::operator_norm, OrderMode::loewner);
    const auto a = AlgebraElement::from_rows({{3, 2}, {2, 3}});
    const auto b = AlgebraElement::from_rows({{1, -2}, {-2, 4}});
    const auto ab = a * b;
    const bool entries_ok = approx_equal(ab, AlgebraElement::from_rows({{-1, 2}, {-4, 8}}), 0.0);
    const bool classified = is_positive(a, ctx) && is_positive(b, ctx) && !is_positive(ab, ctx);
    const double elapsed = seconds_since(start);
    std::ostringstream detail;
    detail << "entries " << (entries_ok ? "match" : "differ") << ", classification "
           << (classified ? "correct" : "wrong") << ", " << elapsed << "s";
    report_line("criterion 1: positivity cone counterexample", entries_ok && classified &&
                    elapsed < 1.0, detail.str());
}

// --- criterion 2: axiom suites ---------------------------------------------

void criterion_2() {
    const auto start = std::chrono::steady_clock::now();
    bool all_ok = true;
    std::ostringstream detail;

    const std::vector<ModularMetric> metrics = {
        make_example_4_1(), make_example_4_2(0.5, 2.0),
        make_multiplication_modular(GridDomain::uniform_trapezoid(0.0, 1.0, 64))};
    for (const auto& metric : metrics) {
        Sampler sampler(0);
        std::size_t violations = 0;
        for (const auto& check : check_axioms(metric, sampler, 1000)) {
            violations += check.total_violations;
        }
        violations += check_lambda_monotonicity(metric, sampler, 1000).total_violations;
        if (violations != 0) {
            all_ok = false;
            detail << metric.name << " has " << violations << " violations; ";
        }
    }

    Sampler sampler(0);
    const auto broken = harness::metric_from_config("broken_asymmetric");
    bool broken_flagged = false;
    for (const auto& check : check_axioms(broken, sampler, 1000)) {
        if (check.id == "symmetry" && !check.passed()) broken_flagged = true;
    }
    if (!broken_flagged) {
        all_ok = false;
        detail << "asymmetric fixture not flagged; ";
    }

    const double elapsed = seconds_since(start);
    detail << "3 suites + fixture, tol 1e-10, " << elapsed << "s";
    report_line("criterion 2: axiom suites at 1000 seeded samples", all_ok && elapsed < 10.0,
                detail.str());
}

// --- criterion 3: adjoint-square norm identity ------------------------------

void criterion_3() {
    Sampler sampler(0);
    bool identity_ok = true;
    for (int i = 0; i < 1000; ++i) {
        const int dim = 1 + i % 4;
        const AlgebraContext op(dim, NormMode::operator_norm, OrderMode::loewner);
        const AlgebraElement m(sampler.complex_matrix(dim));
        const double lhs = norm(involution(m) * m, op);
        const double sq = norm(m, op) * norm(m, op);
        if (std::abs(lhs - sq) > 1e-10 * (1.0 + sq)) identity_ok = false;
    }

    const AlgebraContext frob(2, NormMode::frobenius, OrderMode::loewner);
    const auto witness = AlgebraElement::from_rows({{1, 1}, {0, 1}});
    const double gram_norm = norm(involution(witness) * witness, frob);
    const double norm_sq = norm(witness, frob) * norm(witness, frob);
    const bool witness_ok = std::abs(gram_norm - std::sqrt(7.0)) < 1e-12 &&
                            std::abs(norm_sq - 3.0) < 1e-12 &&
                            std::abs(gram_norm - norm_sq) > 0.3;

    std::ostringstream detail;
    detail << "operator identity on 1000 matrices, frobenius witness sqrt(7) vs 3";
    report_line("criterion 3: adjoint-square norm identity and its frobenius failure",
                identity_ok && witness_ok, detail.str());
}

// --- criterion 4: class functions and monotone triples ----------------------

void criterion_4() {
    bool ok = true;
    std::ostringstream detail;
    const AlgebraContext entry(2, NormMode::frobenius, OrderMode::entrywise);
    const AlgebraContext loewner(2, NormMode::operator_norm, OrderMode::loewner);

    {
        Sampler sampler(0);
        if (!verify_cstar_class(builtin_subtract(), entry, sampler, 1000).all_passed() ||
            !verify_cstar_class(builtin_scale(0.5), entry, sampler, 1000).all_passed() ||
            !verify_cstar_class(builtin_phi_subtract(linear_map(0.5)), entry, sampler, 1000)
                 .all_passed()) {
            ok = false;
            detail << "built-in class checks failed; ";
        }
    }
    {
        Sampler sampler(1);
        const MonotoneTriple doubling{linear_map(2.0), linear_map(1.0), builtin_subtract()};
        const MonotoneTriple halving{linear_map(0.5), linear_map(0.25),
                                     builtin_scale(1.0 / std::sqrt(2.0))};
        if (!verify_monotone_triple(doubling, entry, sampler, 1000).all_passed() ||
            !verify_monotone_triple(halving, loewner, sampler, 1000).all_passed()) {
            ok = false;
            detail << "monotone triples failed; ";
        }
    }
    {
        Sampler sampler(2);
        CStarFunction add{[](const AlgebraElement& a, const AlgebraElement& b) { return a + b; },
                          "add"};
        if (verify_cstar_class(add, loewner, sampler, 1000).all_passed()) {
            ok = false;
            detail << "additive fixture not rejected; ";
        }
    }
    detail << "built-ins, both reference triples, additive rejection";
    report_line("criterion 4: class-function and triple verification", ok, detail.str());
}

// --- criterion 5: scalar reference system end to end ------------------------

void criterion_5() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::ostringstream detail;

    const MappingSystem sys = harness::example_4_4_system();
    {
        Sampler sampler(0);
        if (!check_contraction(sys, sampler, 500).all_passed()) {
            ok = false;
            detail << "contraction violated; ";
        }
    }

    const SearchDomain dom = SearchDomain::interval(-10.0, 10.0, 1e-3);
    const auto owc_si = check_owc(sys.metric(), sys.map_s(), sys.map_i(), dom, 1e-9);
    const auto owc_tj = check_owc(sys.metric(), sys.map_t(), sys.map_j(), dom, 1e-9);
    const auto witness_is_two = [](const OwcReport& r) {
        return r.owc && r.witness.has_value() &&
               std::abs(std::get<double>(*r.witness) - 2.0) <= 1e-6;
    };
    if (!witness_is_two(owc_si) || !witness_is_two(owc_tj)) {
        ok = false;
        detail << "owc witness not at 2; ";
    }

    FixedPointSearch options;
    options.tol = 1e-12;
    const auto fixed = find_common_fixed_point(sys, dom, options);
    if (!fixed.point.has_value() ||
        std::abs(std::get<double>(*fixed.point) - 2.0) > 1e-9) {
        ok = false;
        detail << "fixed point missed; ";
    } else {
        for (const auto& [key, value] : fixed.residuals) {
            if (value > 1e-12) {
                ok = false;
                detail << "residual " << key << " = " << value << "; ";
            }
        }
    }
    if (!fixed.unique_in_domain || fixed.domain_matches != 1) {
        ok = false;
        detail << "scan found " << fixed.domain_matches << " matches; ";
    }

    const double elapsed = seconds_since(start);
    detail << "witness 2, residuals <= 1e-12, unique at step 1e-3, " << elapsed << "s";
    report_line("criterion 5: scalar reference system end to end", ok && elapsed < 30.0,
                detail.str());
}

// --- criterion 6: canonical integral instance ------------------------------

void criterion_6() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::ostringstream detail;

    IntegralSystem sys = make_canonical_instance(64);
    const double m1 = estimate_m1(sys);
    sys.M1 = m1;
    if (std::abs(m1 - 0.5) > 1e-3) {
        ok = false;
        detail << "kernel bound " << m1 << "; ";
    }
    const auto solvability = check_solvability(sys.mu, *sys.L1, *sys.L2, m1);
    const double expected_bound = (1.0 + 0.2 * 1.0 * m1) / std::sqrt(2.0);
    if (!solvability.ok || std::abs(solvability.bound - expected_bound) > 1e-12) {
        ok = false;
        detail << "solvability bound " << solvability.bound << "; ";
    }

    Sampler sampler(0);
    std::vector<GridFunction> inits;
    for (int k = 0; k < 5; ++k) {
        inits.push_back(GridFunction(sys.grid.size(), sampler.uniform(-5.0, 5.0)));
    }
    SolveParams params;
    params.tol = 1e-8;
    try {
        const auto solved = solve(sys, inits, params);
        double sup_error = 0.0;
        for (std::size_t i = 0; i < sys.grid.size(); ++i) {
            sup_error = std::max(sup_error,
                                 std::abs(solved.solution[i] -
                                          std::sin(std::numbers::pi * sys.grid.points[i])));
        }
        if (sup_error > 1e-8) {
            ok = false;
            detail << "sup error " << sup_error << "; ";
        }
        if (!solved.agreed_across_inits) {
            ok = false;
            detail << "inits disagree by " << solved.max_init_disagreement << "; ";
        }
        for (const char* key : {"S", "T", "I", "J"}) {
            if (solved.residuals.at(key) > 1e-8) {
                ok = false;
                detail << "residual " << key << "; ";
            }
        }
        const auto wrapped = wrap_two_pair_system(sys, solved.solution);
        Sampler wrap_sampler(0);
        if (!check_contraction(wrapped, wrap_sampler, 500).all_passed()) {
            ok = false;
            detail << "wrapped system contraction violated; ";
        }
    } catch (const std::exception& err) {
        ok = false;
        detail << "solve raised: " << err.what() << "; ";
    }

    const double elapsed = seconds_since(start);
    detail << "bound " << solvability.bound << ", 5 inits, " << elapsed << "s";
    report_line("criterion 6: canonical integral instance", ok && elapsed < 30.0, detail.str());
}

// --- criterion 7: infimum distances vs closed forms --------------------------

void criterion_7() {
    const auto metric = make_example_4_1();
    Sampler sampler(0);
    bool ok = true;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double x = sampler.scalar(), y = sampler.scalar();
        const double gap = std::abs(x - y);
        const double d0_err =
            std::abs(d0_distance(metric, Point(x), Point(y)) - std::sqrt(std::sqrt(2.0) * gap));
        const double dstar_err =
            std::abs(dstar_distance(metric, Point(x), Point(y)) - std::sqrt(2.0) * gap);
        worst = std::max({worst, d0_err, dstar_err});
        if (d0_err > 1e-8 || dstar_err > 1e-8) ok = false;
    }
    std::ostringstream detail;
    detail << "100 pairs, worst gap " << worst;
    report_line("criterion 7: infimum distances match analytic closed forms", ok, detail.str());
}

// --- criterion 8: deterministic reports -------------------------------------

void criterion_8(const std::string& cli_path) {
    if (cli_path.empty()) {
        report_line("criterion 8: byte-identical demo reports", false,
                    "pass the CLI binary path as argv[1]");
        return;
    }
    bool ok = true;
    std::ostringstream detail;
    for (const auto& name : harness::demo_names()) {
        const auto first = run_command(cli_path + " demo " + name + " --no-timestamp --seed 0");
        const auto second = run_command(cli_path + " demo " + name + " --no-timestamp --seed 0");
        if (first.exit_code != 0 || second.exit_code != 0) {
            ok = false;
            detail << name << " exit codes " << first.exit_code << "/" << second.exit_code << "; ";
        } else if (first.output != second.output) {
            ok = false;
            detail << name << " output differs; ";
        }
    }
    detail << harness::demo_names().size() << " demos, two runs each";
    report_line("criterion 8: byte-identical demo reports", ok, detail.str());
}

// --- supplementary: process exit-code contract -------------------------------

void exit_code_contract(const std::string& cli_path) {
    if (cli_path.empty()) {
        report_line("extra: exit-code contract", false, "pass the CLI binary path as argv[1]");
        return;
    }
    bool ok = true;
    std::ostringstream detail;

    {
        std::ofstream bad("/tmp/cstarmod_bad_config.json");
        bad << "{not json";
    }
    const auto malformed =
        run_command(cli_path + " check-axioms --config /tmp/cstarmod_bad_config.json");
    if (malformed.exit_code != 2) {
        ok = false;
        detail << "malformed config exit " << malformed.exit_code << "; ";
    }

    {
        std::ofstream broken("/tmp/cstarmod_broken_fixture.json");
        broken << R"({"kind":"axioms","samples":200,)"
               << R"("target":{"metric":"broken_asymmetric"}})";
    }
    const auto failing =
        run_command(cli_path + " check-axioms --config /tmp/cstarmod_broken_fixture.json");
    if (failing.exit_code != 1) {
        ok = false;
        detail << "failing fixture exit " << failing.exit_code << "; ";
    }

    const auto unknown = run_command(cli_path + " demo no_such_scenario");
    if (unknown.exit_code != 2) {
        ok = false;
        detail << "unknown demo exit " << unknown.exit_code << "; ";
    }

    detail << "0 on pass, 1 on check failure, 2 on config error";
    report_line("extra: exit-code contract", ok, detail.str());
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli_path = argc > 1 ? argv[1] : "";

    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8(cli_path);
    exit_code_contract(cli_path);

    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return 1;
}
