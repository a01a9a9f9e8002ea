#pragma once

#include <functional>
#include <string>

#include "cstarmod/algebra.hpp"
#include "cstarmod/report.hpp"
#include "cstarmod/sampler.hpp"

namespace cstarmod {

/// Analytically known resolution of the equality case F(A, B) = A.
enum class EqualityWitness { none, a_must_vanish, b_must_vanish };

/// Two-argument map on the positive cone with F(A, B) below A, where
/// equality forces one argument to vanish.
struct CStarFunction {
    std::function<AlgebraElement(const AlgebraElement&, const AlgebraElement&)> evaluator;
    std::string name;
    EqualityWitness equality_witness = EqualityWitness::none;

    AlgebraElement operator()(const AlgebraElement& a, const AlgebraElement& b) const {
        return evaluator(a, b);
    }
};

/// Self-map of the positive cone (the psi / phi families share this shape).
struct ElementFunction {
    std::function<AlgebraElement(const AlgebraElement&)> evaluator;
    std::string name;

    AlgebraElement operator()(const AlgebraElement& a) const { return evaluator(a); }
};

/// Bundle (psi, phi, F) whose composite A -> F(psi(A), phi(A)) must preserve
/// the partial order.
struct MonotoneTriple {
    ElementFunction psi;
    ElementFunction phi;
    CStarFunction f;
};

/// F(A, B) = A - B.
CStarFunction builtin_subtract();
/// F(A, B) = m A with 0 < m < 1.
CStarFunction builtin_scale(double m);
/// F(U, V) = U - phi(U); phi must vanish exactly at zero.
CStarFunction builtin_phi_subtract(ElementFunction phi);
/// A -> k A with k > 0.
ElementFunction linear_map(double k);

/// Condition (1) sampled on positive pairs; the equality case checked
/// analytically for tagged built-ins and by a near-equality probe otherwise
/// (||F(A,B) - A|| < 1e-8 with ||A||, ||B|| > 1e-4 counts as a violation).
Report verify_cstar_class(const CStarFunction& f, const AlgebraContext& ctx, Sampler& sampler,
                          std::size_t n_samples);

/// Monotone, vanishes exactly at zero and only there, maps into the cone.
/// Continuity is an assumption recorded in the report, not a check.
Report verify_psi(const ElementFunction& psi, const AlgebraContext& ctx, Sampler& sampler,
                  std::size_t n_samples);

/// Monotone, strictly positive off zero, nonnegative at zero, maps into the
/// cone. Continuity is an assumption recorded in the report.
Report verify_phi(const ElementFunction& phi, const AlgebraContext& ctx, Sampler& sampler,
                  std::size_t n_samples);

/// Image ordering of the composite on sampled ordered pairs.
Report verify_monotone_triple(const MonotoneTriple& triple, const AlgebraContext& ctx,
                              Sampler& sampler, std::size_t n_samples);

} // namespace cstarmod
