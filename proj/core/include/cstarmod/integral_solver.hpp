#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cstarmod/fixed_point.hpp"
#include "cstarmod/grid.hpp"

namespace cstarmod {

using PointwiseFn = std::function<double(double s, double x)>;

/// Discretized instance of the two-pair integral system
///   x(t) = w(t) + k(t, x(t)) + mu * integral n(t, s) h(s, x(s)) ds
/// on a closed interval, with the kernel sampled as kernel(i, j) = n(t_i, s_j).
struct IntegralSystem {
    GridDomain grid;
    GridFunction w;
    Eigen::MatrixXd kernel;
    PointwiseFn k1, k2, h1, h2;
    std::complex<double> mu = 0.0;
    std::optional<double> M1; // sup_s integral |n(t, s)| dt
    std::optional<double> L1; // expansivity constant of the k's, > 1
    std::optional<double> L2; // Lipschitz constant of the h's, > 0

    void validate() const;
};

/// Max over kernel columns of the quadrature sum of |n(t, s)| over t.
double estimate_m1(const IntegralSystem& sys);

/// Samples the expansivity bound |k1(s,x) - k2(s,y)| / sqrt(2) >= L1 |x - y|
/// and the Lipschitz bound |h1(s,x) - h2(s,y)| <= L2 |x - y|.
Report verify_lipschitz_conditions(const IntegralSystem& sys, Sampler& sampler,
                                   std::size_t n_samples);

struct SolvabilityReport {
    double bound = 0.0;
    bool ok = false;
    AlgebraElement coefficient;     // sqrt(bound) * identity
    double coefficient_norm_sq = 0.0;
};

/// bound = (1 + |mu| L2 M1) / L1, solvable iff bound <= 1; also returns the
/// induced coefficient sqrt(bound) * identity of the requested dimension.
SolvabilityReport check_solvability(std::complex<double> mu, double L1, double L2, double M1,
                                    int dim = 1);

struct BuiltMaps {
    SelfMap S, T, I, J;
};

/// The four self-maps on grid functions: S and T subtract the offset and the
/// quadrature integral term (with h1 resp. h2), I and J apply k1 resp. k2
/// pointwise.
BuiltMaps build_maps(const IntegralSystem& sys);

/// At a coincidence candidate of (S, I), asserts the commutation identity
/// I(S x) = S(I x) within tol; analogously for (T, J) when the candidate is
/// also a (T, J) coincidence point.
Report verify_owc_conditions(const IntegralSystem& sys, const GridFunction& candidate,
                             double tol);

struct SolveParams {
    std::size_t max_iter = 200; // bracket-expansion cap per node
    double tol = 1e-8;
    double damping = 1.0; // reserved for a damped fallback iteration
};

struct SolveReport {
    GridFunction solution;
    std::map<std::string, double> residuals; // S, T, I, J, equation (sup norms)
    bool agreed_across_inits = false;
    double max_init_disagreement = 0.0;
    std::vector<std::string> warnings;
};

/// Pointwise root-finding on k1(t, xi) = xi (bracket expansion + bisection,
/// one independent solve per node), followed by verification of all four map
/// residuals and the equation residual. Initial guesses act as bracket
/// centers; disagreement across them is reported.
SolveReport solve(const IntegralSystem& sys, const std::vector<GridFunction>& inits,
                  const SolveParams& params = {});

/// Evaluate the pointwise-defined solution at an arbitrary t by solving
/// k1(t, xi) = xi there, bracket-centered on linear interpolation of the
/// grid solution.
double interpolate_solution(const IntegralSystem& sys, const GridFunction& solution, double t);

/// Reference instance on [0, 1]: product kernel t*s, k(s, x) = 2x - sin(pi s),
/// h(s, x) = x, mu = 0.2, offset chosen to cancel the discretized integral
/// term at the known solution sin(pi t).
IntegralSystem make_canonical_instance(std::size_t n_points = 64);

/// Same shape with all data zero; the solution is identically zero.
IntegralSystem make_all_zero_instance(std::size_t n_points = 64);

/// Wrap the built maps into the identity-outer two-pair system over the
/// multiplication metric, with coefficient sqrt(bound) * identity and the
/// halving/quartering/scale triple. The carrier sampler draws constant
/// vertical translates of the supplied center.
MappingSystem wrap_two_pair_system(const IntegralSystem& sys, const GridFunction& center);

} // namespace cstarmod
