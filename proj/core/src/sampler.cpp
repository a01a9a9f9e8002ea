#include "cstarmod/sampler.hpp"

#include <cmath>

namespace cstarmod {

double Sampler::uniform(double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(rng_);
}

double Sampler::log_uniform(double lo, double hi) {
    std::uniform_real_distribution<double> dist(std::log(lo), std::log(hi));
    return std::exp(dist(rng_));
}

int Sampler::uniform_int(int lo, int hi) {
    std::uniform_int_distribution<int> dist(lo, hi);
    return dist(rng_);
}

double Sampler::scalar() {
    return uniform(-10.0, 10.0);
}

double Sampler::rate() {
    return log_uniform(1e-3, 1e3);
}

std::vector<double> Sampler::grid_function(std::size_t n, double lo, double hi) {
    std::vector<double> values(n);
    for (auto& v : values) v = uniform(lo, hi);
    return values;
}

Eigen::MatrixXcd Sampler::complex_matrix(int dim, double scale) {
    Eigen::MatrixXcd m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            m(i, j) = std::complex<double>(uniform(-scale, scale), uniform(-scale, scale));
        }
    }
    return m;
}

Eigen::MatrixXcd Sampler::real_matrix(int dim, double scale) {
    Eigen::MatrixXcd m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) m(i, j) = uniform(-scale, scale);
    }
    return m;
}

AlgebraElement Sampler::positive_element(const AlgebraContext& ctx, double scale) {
    if (ctx.order_mode == OrderMode::entrywise) {
        Eigen::MatrixXcd m(ctx.dim, ctx.dim);
        for (int i = 0; i < ctx.dim; ++i) {
            for (int j = 0; j < ctx.dim; ++j) m(i, j) = uniform(0.0, scale);
        }
        return AlgebraElement(std::move(m));
    }
    Eigen::MatrixXcd m = complex_matrix(ctx.dim, scale);
    return AlgebraElement((m.adjoint() * m).eval());
}

AlgebraElement Sampler::strictly_positive_element(const AlgebraContext& ctx, double scale,
                                                  double floor) {
    AlgebraElement base = positive_element(ctx, scale);
    return base + AlgebraElement::scaled_identity(ctx.dim, floor);
}

} // namespace cstarmod
