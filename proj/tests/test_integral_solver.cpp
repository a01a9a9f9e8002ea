#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cstarmod/integral_solver.hpp"

using namespace cstarmod;

namespace {

IntegralSystem product_kernel_instance(std::size_t n) {
    IntegralSystem sys = make_canonical_instance(n);
    return sys;
}

IntegralSystem kernel_only(std::size_t n, const std::function<double(double, double)>& kernel_fn) {
    IntegralSystem sys = make_canonical_instance(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            sys.kernel(i, j) = kernel_fn(sys.grid.points[i], sys.grid.points[j]);
        }
    }
    return sys;
}

double sup_error_vs(const GridFunction& values, const GridDomain& grid,
                    const std::function<double(double)>& reference) {
    double sup = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        sup = std::max(sup, std::abs(values[i] - reference(grid.points[i])));
    }
    return sup;
}

} // namespace

TEST_CASE("kernel column bound") {
    const auto sys = product_kernel_instance(64);
    // Analytic: sup_s integral t s dt = 1/2 at s = 1; trapezoid is exact for
    // a linear integrand.
    CHECK(estimate_m1(sys) == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(std::abs(estimate_m1(sys) - 0.5) < 1e-12);

    auto zero = kernel_only(16, [](double, double) { return 0.0; });
    CHECK(estimate_m1(zero) == 0.0);
    auto ones = kernel_only(16, [](double, double) { return 1.0; });
    CHECK(estimate_m1(ones) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("quadrature error contracts under grid refinement") {
    // Curved kernel so the trapezoid error is visible; analytic bound 2/pi.
    const double exact = 2.0 / std::numbers::pi;
    double previous_error = -1.0;
    for (std::size_t n : {17u, 33u, 65u}) {
        auto sys = kernel_only(n, [](double t, double s) {
            return std::sin(std::numbers::pi * t) * s;
        });
        const double error = std::abs(estimate_m1(sys) - exact);
        if (previous_error > 0.0) CHECK(error <= 0.6 * previous_error);
        previous_error = error;
    }
}

TEST_CASE("sampled expansivity and Lipschitz bounds") {
    auto sys = make_canonical_instance(16);
    Sampler sampler(0);
    CHECK(verify_lipschitz_conditions(sys, sampler, 500).all_passed());

    // Equality case: h identical with slope exactly L2.
    auto equality = make_canonical_instance(16);
    equality.h1 = equality.h2 = [](double, double x) { return x; };
    equality.L2 = 1.0;
    CHECK(verify_lipschitz_conditions(equality, sampler, 500).all_passed());

    // Quadratic growth breaks the linear bound away from small arguments.
    auto broken = make_canonical_instance(16);
    broken.h1 = broken.h2 = [](double, double x) { return x * x; };
    const auto report = verify_lipschitz_conditions(broken, sampler, 500);
    CHECK_FALSE(report.all_passed());
    CHECK_FALSE(report.find("h_lipschitz_bound")->passed());

    auto missing = make_canonical_instance(16);
    missing.L1.reset();
    CHECK_THROWS_AS(verify_lipschitz_conditions(missing, sampler, 10), ConfigError);
}

TEST_CASE("solvability bound") {
    const auto report = check_solvability(0.2, std::sqrt(2.0), 1.0, 0.5, 3);
    CHECK(report.bound == doctest::Approx(1.1 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(report.ok);
    CHECK(report.coefficient_norm_sq == doctest::Approx(report.bound).epsilon(1e-12));
    CHECK(report.coefficient.dim() == 3);

    CHECK(check_solvability(0.0, 1.5, 2.0, 10.0).ok); // mu = 0 always solvable
    CHECK_FALSE(check_solvability(50.0, std::sqrt(2.0), 1.0, 0.5).ok);
    CHECK_THROWS_AS(check_solvability(0.2, 0.9, 1.0, 0.5), ConfigError);
}

TEST_CASE("built maps") {
    // Zero offset and zero mu reduce the integral map to the identity.
    auto sys = make_all_zero_instance(8);
    sys.mu = 0.0;
    const auto maps = build_maps(sys);
    const GridFunction probe{1, -2, 3, 0.5, 0, 4, -1, 2};
    CHECK(std::get<GridFunction>(maps.S(Point(probe))) == probe);

    // Pointwise doubling.
    const auto doubled = std::get<GridFunction>(maps.I(Point(probe)));
    for (std::size_t i = 0; i < probe.size(); ++i) {
        CHECK(doubled[i] == doctest::Approx(2.0 * probe[i]));
    }

    // Canonical instance: the profile is a fixed point of both S and I.
    const auto canonical = make_canonical_instance(64);
    const auto cmaps = build_maps(canonical);
    GridFunction profile(canonical.grid.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
        profile[i] = std::sin(std::numbers::pi * canonical.grid.points[i]);
    }
    const auto s_profile = std::get<GridFunction>(cmaps.S(Point(profile)));
    const auto i_profile = std::get<GridFunction>(cmaps.I(Point(profile)));
    for (std::size_t i = 0; i < profile.size(); ++i) {
        CHECK(std::abs(s_profile[i] - profile[i]) < 1e-12);
        CHECK(std::abs(i_profile[i] - profile[i]) < 1e-12);
    }

    auto complex_mu = make_canonical_instance(8);
    complex_mu.mu = {0.1, 0.3};
    CHECK_THROWS_AS(build_maps(complex_mu), ConfigError);
}

TEST_CASE("commutation conditions at a coincidence candidate") {
    const auto sys = make_canonical_instance(32);
    GridFunction profile(sys.grid.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
        profile[i] = std::sin(std::numbers::pi * sys.grid.points[i]);
    }
    const auto report = verify_owc_conditions(sys, profile, 1e-10);
    CHECK(report.all_passed());
    CHECK(report.find("pair_si_commutation") != nullptr);
    CHECK(report.find("pair_tj_commutation")->applicable);

    // Identity-in-x with zero data: S and I are both the identity.
    auto trivial = make_all_zero_instance(8);
    trivial.mu = 0.0;
    trivial.k1 = trivial.k2 = [](double, double x) { return x; };
    trivial.L1.reset(); // slope 1 is not expansive; keep the instance honest
    const GridFunction anything{1, 2, 3, 4, 5, 6, 7, 8};
    CHECK(verify_owc_conditions(trivial, anything, 1e-10).all_passed());

    // Doubling k with zero data: coincidence only at zero, where the pair
    // commutes; elsewhere the precondition fails.
    auto doubling = make_all_zero_instance(8);
    doubling.mu = 0.0;
    const GridFunction zero(8, 0.0);
    CHECK(verify_owc_conditions(doubling, zero, 1e-10).all_passed());
    CHECK_THROWS_AS(verify_owc_conditions(doubling, anything, 1e-10), PreconditionError);
}

TEST_CASE("solver reproduces the constructed solution") {
    const auto sys = make_canonical_instance(64);
    Sampler sampler(0);
    std::vector<GridFunction> inits;
    for (int k = 0; k < 5; ++k) {
        inits.push_back(GridFunction(sys.grid.size(), sampler.uniform(-5.0, 5.0)));
    }
    const auto report = solve(sys, inits);
    CHECK(report.agreed_across_inits);
    CHECK(report.max_init_disagreement <= 1e-8);
    CHECK(sup_error_vs(report.solution, sys.grid,
                       [](double t) { return std::sin(std::numbers::pi * t); }) <= 1e-8);
    for (const auto& [key, value] : report.residuals) {
        INFO("residual " << key);
        CHECK(value <= 1e-8);
    }

    const auto zero_report = solve(make_all_zero_instance(32), {GridFunction(32, 1.0)});
    CHECK(sup_error_vs(zero_report.solution, make_all_zero_instance(32).grid,
                       [](double) { return 0.0; }) <= 1e-12);
}

TEST_CASE("inconsistent and divergent instances surface as errors") {
    auto perturbed = make_canonical_instance(32);
    for (auto& v : perturbed.w) v += 0.1;
    CHECK_THROWS_AS(solve(perturbed, {GridFunction(32, 0.0)}), InconsistentInstanceError);

    auto rootless = make_canonical_instance(16);
    rootless.k1 = rootless.k2 = [](double, double x) { return x + 1.0; };
    rootless.L1.reset();
    rootless.L2.reset();
    CHECK_THROWS_AS(solve(rootless, {GridFunction(16, 0.0)}), DivergenceError);
}

TEST_CASE("solution is stable under grid refinement via pointwise interpolation") {
    const auto coarse = make_canonical_instance(64);
    const auto fine = make_canonical_instance(128);
    const auto coarse_solution = solve(coarse, {GridFunction(coarse.grid.size(), 0.0)});
    const auto fine_solution = solve(fine, {GridFunction(fine.grid.size(), 0.0)});
    double sup = 0.0;
    for (std::size_t i = 0; i < fine.grid.size(); ++i) {
        const double interpolated =
            interpolate_solution(coarse, coarse_solution.solution, fine.grid.points[i]);
        sup = std::max(sup, std::abs(interpolated - fine_solution.solution[i]));
    }
    CHECK(sup <= 1e-8);
}

TEST_CASE("wrapped two-pair system agrees with the fixed-point machinery") {
    const auto sys = make_canonical_instance(64);
    const auto solved = solve(sys, {GridFunction(sys.grid.size(), 0.0)});
    const auto wrapped = wrap_two_pair_system(sys, solved.solution);

    // Coefficient budget reproduces the solvability bound exactly.
    const double bound = check_solvability(sys.mu, *sys.L1, *sys.L2, estimate_m1(sys)).bound;
    CHECK(wrapped.coefficient_budget() == doctest::Approx(bound).epsilon(1e-12));

    Sampler sampler(0);
    CHECK(check_contraction(wrapped, sampler, 500).all_passed());

    GridFunction shifted_up = solved.solution, shifted_down = solved.solution;
    for (auto& v : shifted_up) v += 0.5;
    for (auto& v : shifted_down) v -= 0.25;
    const auto dom = SearchDomain::finite({Point(solved.solution), Point(shifted_up),
                                           Point(shifted_down)});
    FixedPointSearch options;
    options.tol = 1e-8;
    options.gate_samples = 100;
    const auto result = find_common_fixed_point(wrapped, dom, options);
    REQUIRE(result.point.has_value());
    CHECK(result.unique_in_domain);
    CHECK(point_sup_distance(*result.point, Point(solved.solution)) <= 1e-12);
    for (const auto& [key, value] : result.residuals) {
        INFO("residual " << key);
        CHECK(value <= 1e-8);
    }
    CHECK(result.warnings.empty());
}
