#pragma once

#include <json.hpp>
#include <string>

#include "cstarmod/fixed_point.hpp"
#include "cstarmod/integral_solver.hpp"

namespace cstarmod::harness {

using nlohmann::json;

/// Built-in metrics addressable by name: example_4_1, example_4_2 (params c,
/// alpha), multiplication (param grid), broken_asymmetric (checker fixture).
ModularMetric metric_from_config(const json& spec);

/// Map catalog: identity, const:v, affine:slope,offset, example_4_4_I.
SelfMap map_from_name(const std::string& spec);

/// The piecewise pointwise map of the scalar reference system.
SelfMap example_4_4_I();

/// linear:k, composable with '|' (composition multiplies the slopes).
ElementFunction element_function_from_name(const std::string& spec);

/// subtract, scale:m, phi_subtract[:k], add (invalid fixture).
CStarFunction cstar_function_from_name(const std::string& spec);

MonotoneTriple triple_from_config(const json& spec);

AlgebraContext context_from_config(const json& spec);

/// Scalar number, [re, im] pair, or row-major matrix of [re, im] pairs.
AlgebraElement element_from_config(const json& spec, int dim);

/// Builds the system for levels general, c3_2, c3_3, c3_4 with per-level
/// map arity. A spec carrying "integral_instance" instead wraps that
/// instance's four maps into the identity-outer two-pair system.
MappingSystem system_from_config(const json& spec);

/// Grid profile solving k1(t, xi) = xi at every node; the natural carrier
/// anchor of an instance-backed system.
GridFunction integral_anchor(const IntegralSystem& sys);

/// The scalar reference system: constant pair, piecewise map, reflection.
MappingSystem example_4_4_system();

SearchDomain domain_from_config(const json& spec);

/// Named instances (canonical, all_zero, sized by n) or a custom build from
/// the kernel/function catalogs. Kernels: product, constant:v. Pointwise k:
/// linear:a,b meaning a*x + b, profile_affine:a meaning a*x - sin(pi s).
/// Pointwise h: linear:c. Offsets: zero, cancel_integral, plus w_shift.
IntegralSystem integral_from_config(const json& spec);

} // namespace cstarmod::harness
