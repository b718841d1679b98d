#include "riccati/canonical.hpp"

#include <cmath>
#include <limits>

namespace riccati::canonical {

SpherePoint sigma_plus(const UnitTangent& v) {
  const RealMoebius& g = v.element();
  return {g.a, g.c};
}

SpherePoint sigma_minus(const UnitTangent& v) {
  const RealMoebius& g = v.element();
  return {g.b, g.d};
}

SpherePoint diagonal_section(const UnitTangent& v) { return SpherePoint::affine(v.base_point()); }

ProjectiveMap trivialization(const UnitTangent& v) {
  return map_from_three_points(sigma_minus(v), diagonal_section(v), sigma_plus(v));
}

SpherePoint trivialization_coordinate(const UnitTangent& v, const SpherePoint& w) {
  return apply(trivialization(v), w);
}

namespace {

ContractionResult compare(const SpherePoint& c0, const SpherePoint& ct, double t) {
  if (c0.is_infinity()) {
    const double err = ct.is_infinity() ? 0.0 : std::numeric_limits<double>::infinity();
    return {ct, Complex(std::numeric_limits<double>::infinity(), 0.0), err};
  }
  const Complex rhs = std::exp(-t) * c0.affine_value();
  const double err = ct.is_infinity() ? std::numeric_limits<double>::infinity()
                                      : std::abs(ct.affine_value() - rhs);
  return {ct, rhs, err};
}

}  // namespace

ContractionResult contraction_check(const UnitTangent& v, const SpherePoint& w, double t,
                                    const SurfaceGroup& G, const FlowOptions& opts) {
  const SpherePoint c0 = trivialization_coordinate(v, w);
  const FlowResult r = flow_on_surface(v, t, G, opts);
  const Representation rho = Representation::canonical(G);
  const FiberPoint wt = apply(evaluate_word(rho, r.word), FiberPoint(w));
  return compare(c0, trivialization_coordinate(r.v, wt.as_sphere_point()), t);
}

ContractionResult contraction_check(const UnitTangent& v, const SpherePoint& w, double t) {
  const SpherePoint c0 = trivialization_coordinate(v, w);
  return compare(c0, trivialization_coordinate(geodesic_flow_h(v, t), w), t);
}

}  // namespace riccati::canonical
