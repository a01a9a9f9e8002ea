#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "cstarmod/algebra.hpp"
#include "cstarmod/sampler.hpp"

using namespace cstarmod;

namespace {

const AlgebraContext kOp(2, NormMode::operator_norm, OrderMode::loewner);
const AlgebraContext kFrob(2, NormMode::frobenius, OrderMode::loewner);
const AlgebraContext kEntry(2, NormMode::frobenius, OrderMode::entrywise);

// Independent oracle for 2x2 real symmetric spectra: sign-change scan of the
// characteristic polynomial det(lambda I - A), refined by bisection. Stays
// clear of the eigensolver path under test.
std::vector<double> char_poly_roots_2x2(double a, double b, double c, double d) {
    const auto poly = [&](double lam) { return (lam - a) * (lam - d) - b * c; };
    std::vector<double> roots;
    const double scan_lo = -50.0, scan_hi = 50.0, step = 1e-3;
    double prev_x = scan_lo, prev_v = poly(scan_lo);
    for (double x = scan_lo + step; x <= scan_hi; x += step) {
        const double v = poly(x);
        if (prev_v == 0.0) roots.push_back(prev_x);
        if (prev_v * v < 0.0) {
            double lo = prev_x, hi = x, f_lo = prev_v;
            for (int i = 0; i < 80; ++i) {
                const double mid = 0.5 * (lo + hi);
                const double f_mid = poly(mid);
                if ((f_lo < 0.0) == (f_mid < 0.0)) {
                    lo = mid;
                    f_lo = f_mid;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_v = v;
    }
    return roots;
}

} // namespace

TEST_CASE("involution is the conjugate transpose and an involution") {
    const auto a = AlgebraElement::from_rows({{3, 2}, {2, 3}});
    CHECK(approx_equal(involution(a), a, 0.0));

    const auto one = AlgebraElement::identity(2);
    CHECK(approx_equal(involution(one), one, 0.0));

    const auto nilpotent = AlgebraElement::from_rows({{0, 1}, {0, 0}});
    CHECK(approx_equal(involution(nilpotent), AlgebraElement::from_rows({{0, 0}, {1, 0}}), 0.0));

    Sampler sampler(7);
    for (int i = 0; i < 50; ++i) {
        const AlgebraElement m(sampler.complex_matrix(3));
        CHECK(approx_equal(involution(involution(m)), m, 0.0));
    }
}

TEST_CASE("norms: diagonal values, zero only at zero, and the adjoint identity") {
    Eigen::VectorXd d(2);
    d << 4.0, 4.0;
    const auto diag = AlgebraElement::diagonal(d);
    CHECK(norm(diag, kOp) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(norm(diag, kFrob) == doctest::Approx(std::sqrt(2.0) * 4.0).epsilon(1e-12));

    CHECK(norm(AlgebraElement::zero(2), kOp) == 0.0);
    CHECK(norm(AlgebraElement::zero(2), kFrob) == 0.0);

    Sampler sampler(11);
    for (int i = 0; i < 200; ++i) {
        const AlgebraElement m(sampler.complex_matrix(2 + i % 3));
        AlgebraContext op(m.dim(), NormMode::operator_norm, OrderMode::loewner);
        AlgebraContext fr(m.dim(), NormMode::frobenius, OrderMode::loewner);
        CHECK(norm(m, op) == doctest::Approx(norm(involution(m), op)).epsilon(1e-10));
        CHECK(norm(m, fr) == doctest::Approx(norm(involution(m), fr)).epsilon(1e-12));
    }
}

TEST_CASE("operator norm satisfies the C*-identity; frobenius exhibits the known failure") {
    Sampler sampler(13);
    for (int i = 0; i < 1000; ++i) {
        const int dim = 1 + i % 4;
        const AlgebraElement m(sampler.complex_matrix(dim));
        AlgebraContext op(dim, NormMode::operator_norm, OrderMode::loewner);
        const double lhs = norm(involution(m) * m, op);
        const double sq = norm(m, op) * norm(m, op);
        CHECK(std::abs(lhs - sq) <= 1e-10 * (1.0 + sq));
    }

    // Hand computation: a = [[1,1],[0,1]] gives a*a = [[1,1],[1,2]], whose
    // frobenius norm is sqrt(7) while ||a||^2 = 3.
    const auto witness = AlgebraElement::from_rows({{1, 1}, {0, 1}});
    const auto gram = involution(witness) * witness;
    CHECK(approx_equal(gram, AlgebraElement::from_rows({{1, 1}, {1, 2}}), 1e-14));
    CHECK(norm(witness, kFrob) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(norm(gram, kFrob) == doctest::Approx(std::sqrt(7.0)).epsilon(1e-12));
    CHECK(std::abs(norm(gram, kFrob) - 3.0) > 0.3);
}

TEST_CASE("spectrum agrees with a characteristic-polynomial root scan") {
    Eigen::VectorXd d(2);
    d << 1.0, 5.0;
    const auto eigs_diag = spectrum(AlgebraElement::diagonal(d));
    CHECK(eigs_diag[0].real() == doctest::Approx(1.0));
    CHECK(eigs_diag[1].real() == doctest::Approx(5.0));

    for (const auto& [rows, unused] :
         {std::pair{std::vector<std::vector<double>>{{3, 2}, {2, 3}}, 0},
          std::pair{std::vector<std::vector<double>>{{2, 1}, {1, 2}}, 0}}) {
        const auto oracle = char_poly_roots_2x2(rows[0][0], rows[0][1], rows[1][0], rows[1][1]);
        const auto eigs = spectrum(AlgebraElement::from_rows(rows));
        REQUIRE(oracle.size() == 2);
        REQUIRE(eigs.size() == 2);
        for (int i = 0; i < 2; ++i) {
            CHECK(eigs[i].real() == doctest::Approx(oracle[i]).epsilon(1e-9));
            CHECK(std::abs(eigs[i].imag()) < 1e-10);
        }
    }
    const auto spread = spectrum(AlgebraElement::from_rows({{3, 2}, {2, 3}}));
    CHECK(spread[0].real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(spread[1].real() == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("positivity: the product of positives need not be positive") {
    const auto a = AlgebraElement::from_rows({{3, 2}, {2, 3}});
    const auto b = AlgebraElement::from_rows({{1, -2}, {-2, 4}});
    const auto ab = a * b;
    CHECK(approx_equal(ab, AlgebraElement::from_rows({{-1, 2}, {-4, 8}}), 1e-14));
    CHECK(is_positive(a, kOp));
    CHECK(is_positive(b, kOp));
    CHECK_FALSE(is_positive(ab, kOp));

    CHECK(is_positive(AlgebraElement::zero(2), kOp));
    CHECK_FALSE(is_positive(-AlgebraElement::identity(2), kOp));
    CHECK_FALSE(is_positive(b, kEntry)); // negative entries
    CHECK(is_positive(a, kEntry));
}

TEST_CASE("leq is a partial order on sampled positives") {
    const auto a = AlgebraElement::from_rows({{3, 2}, {2, 3}});
    CHECK(leq(AlgebraElement::zero(2), a, kOp));
    CHECK(leq(a, a, kOp));
    Eigen::VectorXd lo(2), hi(2);
    lo << 1, 1;
    hi << 2, 3;
    CHECK(leq(AlgebraElement::diagonal(lo), AlgebraElement::diagonal(hi), kOp));

    Sampler sampler(17);
    for (int i = 0; i < 200; ++i) {
        const AlgebraElement x = sampler.positive_element(kOp);
        const AlgebraElement y = x + sampler.positive_element(kOp);
        const AlgebraElement z = y + sampler.positive_element(kOp);
        CHECK(leq(x, x, kOp));          // reflexive
        CHECK(leq(x, y, kOp));
        CHECK(leq(y, z, kOp));
        CHECK(leq(x, z, kOp));          // transitive on constructed chains
        if (leq(y, x, kOp)) {           // antisymmetry up to tolerance
            CHECK((x - y).max_abs_entry() <= 1e-8);
        }
        // Near-equal pairs sit below each other and within the tolerance.
        const AlgebraElement nudged = x + AlgebraElement::scaled_identity(2, 1e-12);
        CHECK(leq(x, nudged, kOp));
        CHECK(leq(nudged, x, kOp));
        CHECK((x - nudged).max_abs_entry() <= 1e-8);
    }
}

TEST_CASE("positive_sqrt squares back and reports offending eigenvalues") {
    Eigen::VectorXd d(2);
    d << 4.0, 9.0;
    Eigen::VectorXd expected(2);
    expected << 2.0, 3.0;
    CHECK(approx_equal(positive_sqrt(AlgebraElement::diagonal(d), kOp),
                       AlgebraElement::diagonal(expected), 1e-12));
    CHECK(approx_equal(positive_sqrt(AlgebraElement::identity(2), kOp),
                       AlgebraElement::identity(2), 1e-12));

    const auto m = AlgebraElement::from_rows({{2, 1}, {1, 2}});
    const auto root = positive_sqrt(m, kOp);
    const auto root_eigs = spectrum(root);
    CHECK(root_eigs[0].real() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(root_eigs[1].real() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-10));
    CHECK(norm(root * root - m, kOp) <= 1e-8 * (1.0 + norm(m, kOp)));

    Sampler sampler(19);
    for (int i = 0; i < 1000; ++i) {
        const int dim = 2 + i % 3;
        AlgebraContext ctx(dim, NormMode::operator_norm, OrderMode::loewner);
        const AlgebraElement p = sampler.positive_element(ctx);
        const AlgebraElement s = positive_sqrt(p, ctx);
        CHECK(is_positive(s, ctx));
        CHECK(norm(s * s - p, ctx) <= 1e-8 * (1.0 + norm(p, ctx)));
    }

    CHECK_THROWS_WITH_AS(positive_sqrt(-AlgebraElement::identity(2), kOp),
                         doctest::Contains("negative eigenvalue"), std::domain_error);
}

TEST_CASE("abs_element") {
    const auto a = AlgebraElement::from_rows({{3, 2}, {2, 3}});
    CHECK(approx_equal(abs_element(a, kOp), a, 1e-10));
    CHECK(approx_equal(abs_element(-AlgebraElement::identity(2), kOp),
                       AlgebraElement::identity(2), 1e-12));
    Eigen::VectorXd d(2);
    d << 0.0, 1.0;
    CHECK(approx_equal(abs_element(AlgebraElement::from_rows({{0, 1}, {0, 0}}), kOp),
                       AlgebraElement::diagonal(d), 1e-12));
}

TEST_CASE("extended elements: absorbing addition, dominated order, annihilating zero") {
    const auto inf = AlgebraElement::infinite(2);
    const auto a = AlgebraElement::from_rows({{3, 2}, {2, 3}});

    CHECK((inf + a).is_infinite());
    CHECK((a + inf).is_infinite());
    CHECK((inf * a).is_infinite());
    CHECK((AlgebraElement::zero(2) * inf).is_exact_zero());
    CHECK((0.0 * inf).is_exact_zero());

    CHECK(is_positive(inf, kOp));
    CHECK(leq(a, inf, kOp));
    CHECK_FALSE(leq(inf, a, kOp));
    CHECK(leq(inf, inf, kOp));

    CHECK_THROWS_AS(norm(inf, kOp), ExtendedValueError);
    CHECK_THROWS_AS(involution(inf), ExtendedValueError);
    CHECK_THROWS_AS(spectrum(inf), ExtendedValueError);
}

TEST_CASE("unit-ball lemma report") {
    const auto near_half = AlgebraElement::scaled_identity(2, 0.4);
    const auto report = check_lemma_2_2(near_half, kOp);
    CHECK(report.all_passed());
    REQUIRE(report.find("small_norm_inverse_bound") != nullptr);
    CHECK(report.find("small_norm_inverse_bound")->applicable);
    // Closed form: a (1 - a)^{-1} = (0.4 / 0.6) identity, norm 2/3 < 1.

    const auto boundary = check_lemma_2_2(AlgebraElement::identity(2), kOp);
    CHECK(boundary.all_passed());
    CHECK_FALSE(boundary.find("small_norm_inverse_bound")->applicable);

    Eigen::VectorXd d1(2), d2(2);
    d1 << 0.1, 0.3;
    d2 << 2.0, 5.0;
    const auto commuting = check_lemma_2_2(AlgebraElement::diagonal(d1), kOp,
                                           AlgebraElement::diagonal(d2));
    CHECK(commuting.all_passed());
    CHECK(commuting.find("commuting_positive_product")->applicable);

    Sampler sampler(23);
    for (int i = 0; i < 100; ++i) {
        AlgebraElement p = sampler.positive_element(kOp, 0.5);
        const auto r = check_lemma_2_2(p, kOp, 2.0 * p); // scaled copies commute
        CHECK(r.all_passed());
    }
}
