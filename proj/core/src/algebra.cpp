#include "cstarmod/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace cstarmod {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(const AlgebraElement& a, const char* op) {
    if (a.is_infinite()) {
        throw ExtendedValueError(std::string(op) + ": extended (+inf) element is not admissible here");
    }
}

void require_same_dim(const AlgebraElement& a, const AlgebraElement& b, const char* op) {
    if (a.dim() != b.dim()) {
        throw ShapeError(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) +
                         " vs " + std::to_string(b.dim()) + ")");
    }
}

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& m) {
    return 0.5 * (m + m.adjoint());
}

double max_abs(const Eigen::MatrixXcd& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_diagonal(const Eigen::MatrixXcd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (i != j && m(i, j) != std::complex<double>(0.0, 0.0)) return false;
        }
    }
    return true;
}

} // namespace

std::string to_string(NormMode mode) {
    return mode == NormMode::operator_norm ? "operator" : "frobenius";
}

std::string to_string(OrderMode mode) {
    return mode == OrderMode::loewner ? "loewner" : "entrywise";
}

AlgebraContext::AlgebraContext(int dim_, NormMode norm, OrderMode order, double tol)
    : dim(dim_), norm_mode(norm), order_mode(order), positivity_tol(tol) {
    if (dim < 1) throw ConfigError("AlgebraContext: dim must be >= 1");
    if (!(positivity_tol >= 0.0)) throw ConfigError("AlgebraContext: positivity_tol must be >= 0");
}

AlgebraElement::AlgebraElement(Eigen::MatrixXcd m) : entries_(std::move(m)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
        throw ShapeError("AlgebraElement: entries must form a nonempty square matrix");
    }
}

AlgebraElement AlgebraElement::zero(int dim) {
    return AlgebraElement(Eigen::MatrixXcd::Zero(dim, dim));
}

AlgebraElement AlgebraElement::identity(int dim) {
    return AlgebraElement(Eigen::MatrixXcd::Identity(dim, dim));
}

AlgebraElement AlgebraElement::scaled_identity(int dim, std::complex<double> s) {
    return AlgebraElement(s * Eigen::MatrixXcd::Identity(dim, dim));
}

AlgebraElement AlgebraElement::diagonal(const Eigen::VectorXd& d) {
    if (d.size() < 1) throw ShapeError("AlgebraElement::diagonal: empty diagonal");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d.size(), d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) m(i, i) = d(i);
    return AlgebraElement(std::move(m));
}

AlgebraElement AlgebraElement::infinite(int dim) {
    AlgebraElement a = zero(dim);
    a.infinite_ = true;
    return a;
}

AlgebraElement AlgebraElement::from_rows(const std::vector<std::vector<double>>& rows) {
    const auto n = rows.size();
    if (n == 0) throw ShapeError("AlgebraElement::from_rows: empty matrix");
    Eigen::MatrixXcd m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw ShapeError("AlgebraElement::from_rows: ragged rows");
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
    }
    return AlgebraElement(std::move(m));
}

int AlgebraElement::dim() const {
    return static_cast<int>(entries_.rows());
}

const Eigen::MatrixXcd& AlgebraElement::entries() const {
    require_finite(*this, "entries");
    return entries_;
}

bool AlgebraElement::is_exact_zero() const {
    if (infinite_) return false;
    return max_abs(entries_) == 0.0;
}

double AlgebraElement::max_abs_entry() const {
    require_finite(*this, "max_abs_entry");
    return max_abs(entries_);
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_dim(a, b, "operator+");
    if (a.infinite_ || b.infinite_) return AlgebraElement::infinite(a.dim());
    return AlgebraElement(a.entries_ + b.entries_);
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_dim(a, b, "operator-");
    require_finite(a, "operator-");
    require_finite(b, "operator-");
    return AlgebraElement(a.entries_ - b.entries_);
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_dim(a, b, "operator*");
    // Multiplication by an exact zero annihilates even the extended element.
    if (a.is_exact_zero() || b.is_exact_zero()) return AlgebraElement::zero(a.dim());
    if (a.infinite_ || b.infinite_) return AlgebraElement::infinite(a.dim());
    return AlgebraElement(a.entries_ * b.entries_);
}

AlgebraElement operator*(double s, const AlgebraElement& a) {
    if (s == 0.0) return AlgebraElement::zero(a.dim());
    if (a.infinite_) return AlgebraElement::infinite(a.dim());
    return AlgebraElement(s * a.entries_);
}

AlgebraElement AlgebraElement::operator-() const {
    require_finite(*this, "unary -");
    return AlgebraElement(-entries_);
}

AlgebraElement involution(const AlgebraElement& a) {
    require_finite(a, "involution");
    return AlgebraElement(a.entries().adjoint().eval());
}

double norm(const AlgebraElement& a, const AlgebraContext& ctx) {
    require_finite(a, "norm");
    if (ctx.norm_mode == NormMode::frobenius) return a.entries().norm();
    if (a.is_exact_zero()) return 0.0;
    // Largest singular value of a diagonal matrix is its max entry modulus.
    if (is_diagonal(a.entries())) {
        return a.entries().diagonal().cwiseAbs().maxCoeff();
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.entries());
    return svd.singularValues()(0);
}

std::vector<std::complex<double>> spectrum(const AlgebraElement& a) {
    require_finite(a, "spectrum");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a.entries(), /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("spectrum: eigenvalue computation failed");
    }
    std::vector<std::complex<double>> eigs(solver.eigenvalues().data(),
                                           solver.eigenvalues().data() + a.dim());
    std::sort(eigs.begin(), eigs.end(), [](const auto& x, const auto& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return eigs;
}

double positivity_defect(const AlgebraElement& a, const AlgebraContext& ctx) {
    if (a.is_infinite()) return kInf;
    const Eigen::MatrixXcd& m = a.entries();
    if (ctx.order_mode == OrderMode::entrywise) {
        double min_real = m.real().minCoeff();
        double max_imag = m.imag().cwiseAbs().maxCoeff();
        return std::min(min_real, -max_imag);
    }
    if (is_diagonal(m)) {
        // Hermitian-part eigenvalues are the real parts; the departure from
        // self-adjointness is twice the largest imaginary magnitude.
        const double min_real = m.diagonal().real().minCoeff();
        const double asym = 2.0 * m.diagonal().imag().cwiseAbs().maxCoeff();
        return std::min(min_real, -asym);
    }
    const double asym = max_abs(m - m.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian_part(m),
                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("positivity_defect: eigenvalue computation failed");
    }
    return std::min(solver.eigenvalues().minCoeff(), -asym);
}

bool is_positive(const AlgebraElement& a, const AlgebraContext& ctx) {
    return positivity_defect(a, ctx) >= -ctx.positivity_tol;
}

double order_defect(const AlgebraElement& a, const AlgebraElement& b, const AlgebraContext& ctx) {
    if (b.is_infinite()) return kInf;
    if (a.is_infinite()) return -kInf;
    return positivity_defect(b - a, ctx);
}

bool leq(const AlgebraElement& a, const AlgebraElement& b, const AlgebraContext& ctx) {
    return order_defect(a, b, ctx) >= -ctx.positivity_tol;
}

AlgebraElement positive_sqrt(const AlgebraElement& a, const AlgebraContext& ctx) {
    require_finite(a, "positive_sqrt");
    const Eigen::MatrixXcd& m = a.entries();
    const double asym = max_abs(m - m.adjoint().eval());
    if (asym > ctx.positivity_tol) {
        throw std::domain_error("positive_sqrt: input departs from self-adjointness by " +
                                std::to_string(asym));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian_part(m));
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("positive_sqrt: eigendecomposition failed");
    }
    Eigen::VectorXd eigs = solver.eigenvalues();
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        if (eigs(i) < -ctx.positivity_tol) {
            throw std::domain_error("positive_sqrt: input has negative eigenvalue " +
                                    std::to_string(eigs(i)));
        }
        eigs(i) = std::sqrt(std::max(eigs(i), 0.0));
    }
    Eigen::MatrixXcd root = solver.eigenvectors() * eigs.asDiagonal() *
                            solver.eigenvectors().adjoint();
    return AlgebraElement(std::move(root));
}

AlgebraElement abs_element(const AlgebraElement& a, const AlgebraContext& ctx) {
    require_finite(a, "abs_element");
    return positive_sqrt(involution(a) * a, ctx);
}

AlgebraElement congruence(const AlgebraElement& a, const AlgebraElement& x) {
    return involution(a) * x * a;
}

bool approx_equal(const AlgebraElement& a, const AlgebraElement& b, double tol) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
    if (a.dim() != b.dim()) return false;
    return (a - b).max_abs_entry() <= tol;
}

Report check_lemma_2_2(const AlgebraElement& a, const AlgebraContext& ctx,
                       const std::optional<AlgebraElement>& commuting_partner) {
    AlgebraContext op_ctx(ctx.dim, NormMode::operator_norm, OrderMode::loewner, ctx.positivity_tol);
    if (!is_positive(a, op_ctx)) {
        throw PreconditionError("check_lemma_2_2: input must be positive in the loewner order");
    }

    Report report;
    report.subject = "unit_ball_order_lemma";
    const AlgebraElement unit = AlgebraElement::identity(a.dim());

    CheckResult unit_ball("unit_ball_equivalence");
    unit_ball.samples = 1;
    {
        const bool below_unit = leq(a, unit, op_ctx);
        const bool norm_at_most_one = norm(a, op_ctx) <= 1.0 + op_ctx.positivity_tol;
        if (below_unit != norm_at_most_one) {
            unit_ball.add_violation("leq(a, 1) = " + std::to_string(below_unit) +
                                        " but ||a|| <= 1 = " + std::to_string(norm_at_most_one),
                                    std::abs(norm(a, op_ctx) - 1.0));
        }
    }
    report.checks.push_back(std::move(unit_ball));

    CheckResult small_norm("small_norm_inverse_bound");
    small_norm.samples = 1;
    if (norm(a, op_ctx) < 0.5) {
        Eigen::MatrixXcd residual = unit.entries() - a.entries();
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(residual);
        if (!lu.isInvertible()) {
            small_norm.add_violation("1 - a is not invertible despite ||a|| < 1/2", 0.0);
        } else {
            const double bound = norm(AlgebraElement(a.entries() * lu.inverse()), op_ctx);
            if (!(bound < 1.0)) {
                small_norm.add_violation("||a (1-a)^{-1}|| = " + std::to_string(bound), bound - 1.0);
            }
        }
    } else {
        small_norm.applicable = false;
        small_norm.note = "||a|| >= 1/2; hypothesis does not apply";
    }
    report.checks.push_back(std::move(small_norm));

    CheckResult commuting("commuting_positive_product");
    commuting.samples = 1;
    if (commuting_partner.has_value()) {
        const AlgebraElement& p = *commuting_partner;
        const bool commutes = approx_equal(a * p, p * a, op_ctx.positivity_tol);
        if (!commutes || !is_positive(p, op_ctx)) {
            commuting.applicable = false;
            commuting.note = "partner does not commute or is not positive; hypothesis does not apply";
        } else if (!is_positive(a * p, op_ctx)) {
            commuting.add_violation("product of commuting positives classified non-positive",
                                    -positivity_defect(a * p, op_ctx));
        }
    } else {
        commuting.applicable = false;
        commuting.note = "no commuting partner supplied";
    }
    report.checks.push_back(std::move(commuting));

    return report;
}

std::string format_element(const AlgebraElement& a) {
    if (a.is_infinite()) return "inf";
    std::ostringstream out;
    out << "[";
    const auto& m = a.entries();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out << (i == 0 ? "[" : " [");
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            char buf[64];
            if (m(i, j).imag() == 0.0) {
                std::snprintf(buf, sizeof(buf), "%.12g", m(i, j).real());
            } else {
                std::snprintf(buf, sizeof(buf), "%.12g%+.12gi", m(i, j).real(), m(i, j).imag());
            }
            out << buf << (j + 1 < m.cols() ? ", " : "");
        }
        out << "]" << (i + 1 < m.rows() ? "," : "");
    }
    out << "]";
    return out.str();
}

} // namespace cstarmod
