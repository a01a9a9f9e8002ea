#include <benchmark/benchmark.h>

#include "cstarmod/integral_solver.hpp"

using namespace cstarmod;

namespace {

void BM_PositiveSqrt(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const AlgebraContext ctx(dim, NormMode::operator_norm, OrderMode::loewner);
    Sampler sampler(42);
    const AlgebraElement a = sampler.positive_element(ctx);
    for (auto _ : state) {
        benchmark::DoNotOptimize(positive_sqrt(a, ctx));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PositiveSqrt)->RangeMultiplier(2)->Range(2, 64)->Complexity();

void BM_OperatorNormDense(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const AlgebraContext ctx(dim, NormMode::operator_norm, OrderMode::loewner);
    Sampler sampler(42);
    const AlgebraElement a(sampler.complex_matrix(dim));
    for (auto _ : state) {
        benchmark::DoNotOptimize(norm(a, ctx));
    }
}
BENCHMARK(BM_OperatorNormDense)->RangeMultiplier(2)->Range(2, 64);

void BM_AxiomSweep(benchmark::State& state) {
    const auto metric = make_example_4_1();
    for (auto _ : state) {
        Sampler sampler(7);
        benchmark::DoNotOptimize(check_axioms(metric, sampler, state.range(0)));
    }
}
BENCHMARK(BM_AxiomSweep)->Arg(100)->Arg(1000);

void BM_MultiplicationMetricTriangle(benchmark::State& state) {
    const auto metric =
        make_multiplication_modular(GridDomain::uniform_trapezoid(0.0, 1.0, state.range(0)));
    for (auto _ : state) {
        Sampler sampler(7);
        benchmark::DoNotOptimize(check_axioms(metric, sampler, 50));
    }
}
BENCHMARK(BM_MultiplicationMetricTriangle)->Arg(16)->Arg(64)->Arg(128);

void BM_CanonicalSolve(benchmark::State& state) {
    const auto sys = make_canonical_instance(state.range(0));
    const std::vector<GridFunction> inits{GridFunction(sys.grid.size(), 0.0)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve(sys, inits));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CanonicalSolve)->RangeMultiplier(2)->Range(32, 256)->Complexity();

void BM_FixedPointScan(benchmark::State& state) {
    const AlgebraElement coeff = AlgebraElement::scaled_identity(2, 0.4);
    const MonotoneTriple triple{linear_map(2.0), linear_map(1.0), builtin_subtract()};
    SelfMap piecewise{[](const Point& p) {
                          const double x = std::get<double>(p);
                          if (x < 2.0) return Point(2.0 * x / 3.0);
                          if (x > 2.0) return Point(0.0);
                          return Point(2.0);
                      },
                      "piecewise"};
    const auto sys = build_system_c3_2(constant_map(2.0), constant_map(2.0), piecewise,
                                       affine_map(-1.0, 4.0), coeff, coeff, coeff, triple,
                                       make_example_4_1());
    const double step = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) {
        FixedPointSearch options;
        options.tol = 1e-12;
        options.gate_samples = 50;
        benchmark::DoNotOptimize(
            find_common_fixed_point(sys, SearchDomain::interval(-10, 10, step), options));
    }
}
BENCHMARK(BM_FixedPointScan)->Arg(100)->Arg(1000);

} // namespace

BENCHMARK_MAIN();
