#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cstarmod/algebra.hpp"

namespace cstarmod {

/// Deterministic source of sample values. Every stochastic check draws from a
/// caller-seeded Sampler, so identical seeds reproduce reports byte for byte.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi);
    double log_uniform(double lo, double hi);
    int uniform_int(int lo, int hi);

    /// Carrier scalar on [-10, 10].
    double scalar();
    /// Rate parameter, log-uniform on [1e-3, 1e3].
    double rate();
    std::vector<double> grid_function(std::size_t n, double lo = -10.0, double hi = 10.0);

    Eigen::MatrixXcd complex_matrix(int dim, double scale = 5.0);
    Eigen::MatrixXcd real_matrix(int dim, double scale = 5.0);

    /// Positive element under the context order: m* m for loewner, a matrix
    /// with nonnegative real entries for entrywise.
    AlgebraElement positive_element(const AlgebraContext& ctx, double scale = 2.0);
    /// Positive element bounded away from zero by floor * identity.
    AlgebraElement strictly_positive_element(const AlgebraContext& ctx, double scale = 2.0,
                                             double floor = 1e-3);

private:
    std::mt19937_64 rng_;
};

} // namespace cstarmod
