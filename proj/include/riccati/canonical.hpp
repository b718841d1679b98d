// Exact sections of the canonical representation.
//
// For v = g in PSL(2,R) the geodesic through v runs from g(0) to g(inf).
// Under the covering representation the fiber over v is trivialised by the
// map sending sigma-(v) -> 0, Delta(v) = g(i) -> 1, sigma+(v) -> inf, which
// is (z / i) o g^{-1}. Along the flow this coordinate contracts exactly as
// c_t = e^{-t} c_0, so fiber points are attracted to sigma-(v): the section
// of largest expansion of the canonical cocycle is the backward endpoint.
#pragma once

#include "riccati/cocycle.hpp"
#include "riccati/moebius.hpp"
#include "riccati/surface.hpp"

namespace riccati::canonical {

/// Forward ideal endpoint g(inf) of the geodesic through v.
SpherePoint sigma_plus(const UnitTangent& v);
/// Backward ideal endpoint g(0).
SpherePoint sigma_minus(const UnitTangent& v);
/// The base point g(i) as a point of CP^1.
SpherePoint diagonal_section(const UnitTangent& v);

/// Attractor of the forward fiber dynamics (= sigma_minus).
inline SpherePoint expanding_section(const UnitTangent& v) { return sigma_minus(v); }
/// Attractor of the backward fiber dynamics (= sigma_plus).
inline SpherePoint contracting_section(const UnitTangent& v) { return sigma_plus(v); }

/// Map sending sigma-(v) -> 0, Delta(v) -> 1, sigma+(v) -> inf.
ProjectiveMap trivialization(const UnitTangent& v);
SpherePoint trivialization_coordinate(const UnitTangent& v, const SpherePoint& w);

struct ContractionResult {
  SpherePoint lhs;  // c_t
  Complex rhs;      // e^{-t} c_0
  double error;     // |c_t - e^{-t} c_0|
};

/// Flows (v, w) on the surface for time t and compares the trivialised
/// fiber coordinate with the homothety law.
ContractionResult contraction_check(const UnitTangent& v, const SpherePoint& w, double t,
                                    const SurfaceGroup& G, const FlowOptions& opts = {});
/// Same in the universal cover (no side crossings).
ContractionResult contraction_check(const UnitTangent& v, const SpherePoint& w, double t);

}  // namespace riccati::canonical
