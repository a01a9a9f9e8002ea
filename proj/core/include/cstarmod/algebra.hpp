#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "cstarmod/errors.hpp"
#include "cstarmod/report.hpp"

namespace cstarmod {

enum class NormMode { operator_norm, frobenius };
enum class OrderMode { loewner, entrywise };

std::string to_string(NormMode mode);
std::string to_string(OrderMode mode);

/// Fixed setting for one family of computations: matrix size, which norm
/// backs ||.||, which cone backs the partial order, and the positivity slack.
/// Mixing elements computed under different contexts is not supported.
struct AlgebraContext {
    int dim = 2;
    NormMode norm_mode = NormMode::operator_norm;
    OrderMode order_mode = OrderMode::loewner;
    double positivity_tol = 1e-10;

    AlgebraContext() = default;
    AlgebraContext(int dim_, NormMode norm, OrderMode order, double tol = 1e-10);
};

/// Element of the finite-dimensional model algebra: a square complex matrix,
/// or the extended value that dominates every finite element. Extended values
/// are absorbing under addition; multiplication by an exact zero yields zero.
class AlgebraElement {
public:
    AlgebraElement() = default;
    explicit AlgebraElement(Eigen::MatrixXcd m);

    static AlgebraElement zero(int dim);
    static AlgebraElement identity(int dim);
    static AlgebraElement scaled_identity(int dim, std::complex<double> s);
    static AlgebraElement diagonal(const Eigen::VectorXd& d);
    static AlgebraElement infinite(int dim);
    /// Row-major real entries, e.g. {{3, 2}, {2, 3}}.
    static AlgebraElement from_rows(const std::vector<std::vector<double>>& rows);

    bool is_infinite() const { return infinite_; }
    int dim() const;
    /// Throws ExtendedValueError for the extended element.
    const Eigen::MatrixXcd& entries() const;

    bool is_exact_zero() const;
    double max_abs_entry() const;

    friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
    friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
    friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
    friend AlgebraElement operator*(double s, const AlgebraElement& a);
    AlgebraElement operator-() const;

private:
    Eigen::MatrixXcd entries_{0, 0};
    bool infinite_ = false;
};

/// Conjugate transpose. Applying it twice returns the input exactly.
AlgebraElement involution(const AlgebraElement& a);

/// Operator mode: largest singular value. Frobenius mode: root of the sum of
/// squared entry moduli.
double norm(const AlgebraElement& a, const AlgebraContext& ctx);

/// Eigenvalues with multiplicity, sorted by (re, im) for determinism.
std::vector<std::complex<double>> spectrum(const AlgebraElement& a);

/// Signed violation measure of membership in the positive cone; >= -tol means
/// positive. Loewner mode: min of the smallest eigenvalue of the hermitian
/// part and -(max departure from self-adjointness). Entrywise mode: min of
/// the smallest real part and -(max imaginary magnitude). Extended elements
/// measure +infinity.
double positivity_defect(const AlgebraElement& a, const AlgebraContext& ctx);

bool is_positive(const AlgebraElement& a, const AlgebraContext& ctx);

/// a <= b in the context order; an extended b dominates everything.
bool leq(const AlgebraElement& a, const AlgebraElement& b, const AlgebraContext& ctx);

/// Violation measure of a <= b (positivity_defect of b - a, with extended
/// values mapped to +/-infinity).
double order_defect(const AlgebraElement& a, const AlgebraElement& b, const AlgebraContext& ctx);

/// Unique positive square root via eigendecomposition. Eigenvalues in
/// [-positivity_tol, 0) are clamped to zero; anything more negative is a
/// domain error naming the offending eigenvalue.
AlgebraElement positive_sqrt(const AlgebraElement& a, const AlgebraContext& ctx);

/// positive_sqrt(involution(a) * a).
AlgebraElement abs_element(const AlgebraElement& a, const AlgebraContext& ctx);

/// involution(a) * x * a
AlgebraElement congruence(const AlgebraElement& a, const AlgebraElement& x);

/// Max-abs-entry comparison; two extended elements compare equal.
bool approx_equal(const AlgebraElement& a, const AlgebraElement& b, double tol);

/// Clause-by-clause report for the unit-ball characterization of the order,
/// the small-norm inverse bound, and commuting positive products. Clauses
/// whose hypotheses fail are marked inapplicable. Uses operator norm and the
/// loewner order regardless of ctx.norm_mode defaults; requires positive a.
Report check_lemma_2_2(const AlgebraElement& a, const AlgebraContext& ctx,
                       const std::optional<AlgebraElement>& commuting_partner = std::nullopt);

std::string format_element(const AlgebraElement& a);

} // namespace cstarmod
