#include "cstarmod/cstar_class.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace cstarmod {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string pair_witness(const AlgebraElement& a, const AlgebraElement& b) {
    return "A=" + format_element(a) + " B=" + format_element(b);
}

} // namespace

CStarFunction builtin_subtract() {
    CStarFunction f;
    f.name = "subtract";
    f.equality_witness = EqualityWitness::b_must_vanish;
    f.evaluator = [](const AlgebraElement& a, const AlgebraElement& b) { return a - b; };
    return f;
}

CStarFunction builtin_scale(double m) {
    if (!(m > 0.0 && m < 1.0)) throw ConfigError("builtin_scale: need 0 < m < 1");
    CStarFunction f;
    f.name = "scale:" + fmt(m);
    f.equality_witness = EqualityWitness::a_must_vanish;
    f.evaluator = [m](const AlgebraElement& a, const AlgebraElement&) { return m * a; };
    return f;
}

CStarFunction builtin_phi_subtract(ElementFunction phi) {
    CStarFunction f;
    f.name = "phi_subtract[" + phi.name + "]";
    f.equality_witness = EqualityWitness::a_must_vanish;
    f.evaluator = [phi](const AlgebraElement& a, const AlgebraElement&) { return a - phi(a); };
    return f;
}

ElementFunction linear_map(double k) {
    if (!(k > 0.0)) throw ConfigError("linear_map: need k > 0");
    ElementFunction e;
    e.name = "linear:" + fmt(k);
    e.evaluator = [k](const AlgebraElement& a) { return k * a; };
    return e;
}

Report verify_cstar_class(const CStarFunction& f, const AlgebraContext& ctx, Sampler& sampler,
                          std::size_t n_samples) {
    Report report;
    report.subject = f.name;
    const double tol = ctx.positivity_tol;

    CheckResult upper("value_below_first_argument");
    upper.samples = n_samples;
    CheckResult equality("equality_forces_zero");
    equality.samples = n_samples;
    switch (f.equality_witness) {
        case EqualityWitness::b_must_vanish:
            equality.note = "analytic case: equality holds exactly when B vanishes";
            break;
        case EqualityWitness::a_must_vanish:
            equality.note = "analytic case: equality holds exactly when A vanishes";
            break;
        case EqualityWitness::none:
            equality.note = "heuristic near-equality probe; thresholds 1e-8 / 1e-4";
            break;
    }

    for (std::size_t i = 0; i < n_samples; ++i) {
        const AlgebraElement a = sampler.positive_element(ctx);
        const AlgebraElement b = sampler.positive_element(ctx);
        const AlgebraElement value = f(a, b);

        const double defect = order_defect(value, a, ctx);
        if (defect < -tol) {
            upper.add_violation(pair_witness(a, b), -defect);
        }

        const double na = norm(a, ctx);
        const double nb = norm(b, ctx);
        const double gap = norm(value - a, ctx);
        switch (f.equality_witness) {
            case EqualityWitness::b_must_vanish:
                // Defect A - F(A,B) must reproduce B, so equality <=> B = 0.
                if (norm((a - value) - b, ctx) > 1e-10 * (1.0 + nb)) {
                    equality.add_violation(pair_witness(a, b), norm((a - value) - b, ctx));
                }
                break;
            case EqualityWitness::a_must_vanish:
                if (gap < 1e-8 && na > 1e-4) {
                    equality.add_violation(pair_witness(a, b), gap);
                }
                break;
            case EqualityWitness::none:
                if (gap < 1e-8 && na > 1e-4 && nb > 1e-4) {
                    equality.add_violation(pair_witness(a, b), gap);
                }
                break;
        }
    }

    report.checks.push_back(std::move(upper));
    report.checks.push_back(std::move(equality));

    CheckResult continuity("continuity");
    continuity.applicable = false;
    continuity.note = "assumed, not machine-checked";
    report.checks.push_back(std::move(continuity));
    return report;
}

namespace {

Report verify_cone_map(const ElementFunction& fn, const AlgebraContext& ctx, Sampler& sampler,
                       std::size_t n_samples, bool vanish_only_at_zero,
                       bool strictly_positive_off_zero) {
    Report report;
    report.subject = fn.name;
    const double tol = ctx.positivity_tol;
    const AlgebraElement theta = AlgebraElement::zero(ctx.dim);

    CheckResult at_zero(vanish_only_at_zero ? "vanishes_at_zero" : "nonnegative_at_zero");
    at_zero.samples = 1;
    {
        const AlgebraElement image = fn(theta);
        if (vanish_only_at_zero) {
            const double nv = image.is_infinite() ? 1.0 : norm(image, ctx);
            if (nv > tol) at_zero.add_violation("image of zero has norm " + fmt(nv), nv);
        } else if (!is_positive(image, ctx)) {
            at_zero.add_violation("image of zero lies outside the cone",
                                  -positivity_defect(image, ctx));
        }
    }
    report.checks.push_back(std::move(at_zero));

    CheckResult cone("maps_into_cone");
    cone.samples = n_samples;
    CheckResult monotone("nondecreasing");
    monotone.samples = n_samples;
    CheckResult off_zero(vanish_only_at_zero ? "vanishes_only_at_zero"
                                             : "strictly_positive_off_zero");
    off_zero.samples = n_samples;

    for (std::size_t i = 0; i < n_samples; ++i) {
        const AlgebraElement a = strictly_positive_off_zero
                                     ? sampler.strictly_positive_element(ctx)
                                     : sampler.positive_element(ctx);
        const AlgebraElement image = fn(a);

        if (!is_positive(image, ctx)) {
            cone.add_violation("A=" + format_element(a), -positivity_defect(image, ctx));
        }

        const AlgebraElement increment = sampler.positive_element(ctx);
        const AlgebraElement b = a + increment;
        const double defect = order_defect(image, fn(b), ctx);
        if (defect < -tol) {
            monotone.add_violation(pair_witness(a, b), -defect);
        }

        const double norm_a = norm(a, ctx);
        const double norm_image = image.is_infinite() ? 1.0 : norm(image, ctx);
        if (vanish_only_at_zero) {
            // psi(T) = 0 must force T = 0; probe by near-zero detection.
            if (norm_image <= 1e-12 && norm_a > 1e-4) {
                off_zero.add_violation("A=" + format_element(a) + " maps to zero", norm_a);
            }
        } else {
            if (!(norm_image > 1e-12) || !is_positive(image, ctx)) {
                off_zero.add_violation("A=" + format_element(a), norm_image);
            }
        }
    }

    report.checks.push_back(std::move(cone));
    report.checks.push_back(std::move(monotone));
    report.checks.push_back(std::move(off_zero));

    CheckResult continuity("continuity");
    continuity.applicable = false;
    continuity.note = "assumed, not machine-checked";
    report.checks.push_back(std::move(continuity));
    return report;
}

} // namespace

Report verify_psi(const ElementFunction& psi, const AlgebraContext& ctx, Sampler& sampler,
                  std::size_t n_samples) {
    return verify_cone_map(psi, ctx, sampler, n_samples, /*vanish_only_at_zero=*/true,
                           /*strictly_positive_off_zero=*/false);
}

Report verify_phi(const ElementFunction& phi, const AlgebraContext& ctx, Sampler& sampler,
                  std::size_t n_samples) {
    return verify_cone_map(phi, ctx, sampler, n_samples, /*vanish_only_at_zero=*/false,
                           /*strictly_positive_off_zero=*/true);
}

Report verify_monotone_triple(const MonotoneTriple& triple, const AlgebraContext& ctx,
                              Sampler& sampler, std::size_t n_samples) {
    Report report;
    report.subject = "(" + triple.psi.name + ", " + triple.phi.name + ", " + triple.f.name + ")";
    const double tol = ctx.positivity_tol;

    CheckResult ordered("composite_preserves_order");
    ordered.samples = n_samples;
    const auto composite = [&](const AlgebraElement& a) {
        return triple.f(triple.psi(a), triple.phi(a));
    };
    for (std::size_t i = 0; i < n_samples; ++i) {
        const AlgebraElement a = sampler.positive_element(ctx);
        const AlgebraElement b = a + sampler.positive_element(ctx);
        const double defect = order_defect(composite(a), composite(b), ctx);
        if (defect < -tol) {
            ordered.add_violation(pair_witness(a, b), -defect);
        }
    }
    report.checks.push_back(std::move(ordered));
    return report;
}

} // namespace cstarmod
