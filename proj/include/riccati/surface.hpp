// Finite-area hyperbolic surfaces as quotients of the upper half plane by a
// Fuchsian group, and the geodesic flow on their unit tangent bundle.
//
// A unit tangent vector is an element g of PSL(2,R): its base point is g(i)
// and its direction is g_* of the upward vertical at i. The geodesic flow is
// right multiplication by a_t = diag(e^{t/2}, e^{-t/2}).
//
// On the surface the flow is followed inside a fundamental polygon whose
// sides are complete geodesics. When the base point leaves through a side
// the side's pairing generator is applied to bring it back; the sequence of
// applied generators is the deck word of the segment.
#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "riccati/moebius.hpp"
#include "riccati/random.hpp"

namespace riccati {

inline constexpr double kIdealInfinity = std::numeric_limits<double>::infinity();

/// Orientation-preserving real Moebius map with determinant 1.
struct RealMoebius {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  static RealMoebius identity() { return {}; }
  /// Rescales to determinant 1; throws NumericalError unless det > 0.
  static RealMoebius normalized(double a, double b, double c, double d);

  RealMoebius inverse() const { return {d, -b, -c, a}; }
  Complex apply(Complex z) const { return (a * z + b) / (c * z + d); }
  /// Action on R u {inf}; infinity is kIdealInfinity.
  double apply_ideal(double x) const;
  double trace() const { return a + d; }
  ProjectiveMap to_projective() const { return ProjectiveMap::from_2x2(a, b, c, d); }
};

RealMoebius operator*(const RealMoebius& x, const RealMoebius& y);

/// A point of T^1 H, stored as its PSL(2,R) element.
class UnitTangent {
 public:
  UnitTangent() = default;
  explicit UnitTangent(const RealMoebius& g);

  /// Vector at z (Im z > 0) making angle `angle` counterclockwise from the
  /// upward vertical.
  static UnitTangent at(Complex z, double angle);

  const RealMoebius& element() const { return g_; }
  Complex base_point() const { return g_.apply(Complex(0.0, 1.0)); }
  /// Counterclockwise angle from the upward vertical, in (-pi, pi].
  double direction_angle() const;
  /// Same base point, opposite direction.
  UnitTangent reversed() const;
  ProjectiveMap to_projective() const { return g_.to_projective(); }

 private:
  RealMoebius g_;
};

/// g o v: the pushforward of a unit tangent vector by a real Moebius map.
UnitTangent push(const RealMoebius& g, const UnitTangent& v);

/// Geodesic flow in H: v -> v a_t. Base point moves at unit speed.
UnitTangent geodesic_flow_h(const UnitTangent& v, double t);

/// Reduced word over signed generator indices (+i is generator i, -i its
/// inverse; indices start at 1). The group element of (l_1, ..., l_k) is
/// g_{l_k} ... g_{l_1}: the first letter acts first.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<int> letters);  // freely reduces

  const std::vector<int>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  int operator[](std::size_t i) const { return letters_[i]; }

  /// Appends one letter, cancelling against the last letter if inverse.
  void push_back(int letter);
  void append(const Word& w);
  Word inverse() const;
  bool is_reduced() const;

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<int> letters_;
};

Word concat(const Word& first, const Word& second);
std::string to_string(const Word& w);

/// A side of the fundamental polygon: the complete geodesic with ideal
/// endpoints (p, q). Leaving the polygon through it applies `letter`, which
/// maps the side onto side `partner` (0-based).
struct PolygonSide {
  double p = 0.0;
  double q = kIdealInfinity;
  int letter = 1;
  int partner = 0;
};

/// A cusp vertex of the polygon with a parabolic peripheral word fixing it.
struct CuspVertex {
  double vertex = kIdealInfinity;
  Word peripheral;
};

/// Thrown when a geodesic climbs a cusp beyond the configured height, or
/// exceeds the crossing budget. Carries the deck word built so far.
class CuspCapture : public std::runtime_error {
 public:
  CuspCapture(const std::string& what, Word partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Word& partial_word() const { return partial_; }

 private:
  Word partial_;
};

/// Thrown when a trajectory passes through a polygon vertex (two sides
/// crossed at the same instant).
class VertexHit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FlowOptions {
  std::int64_t max_crossings = 1'000'000;
  double cusp_height_cutoff = 1e8;
  double vertex_tolerance = 1e-12;
};

/// Fuchsian group with a fundamental polygon. Immutable after construction.
class SurfaceGroup {
 public:
  /// Validates the pairing table, generator types, base point and cusp data;
  /// throws std::invalid_argument with the failing item.
  SurfaceGroup(std::string name, std::vector<RealMoebius> generators,
               std::vector<PolygonSide> sides, std::vector<CuspVertex> cusps,
               Complex base_point);

  const std::string& name() const { return name_; }
  const std::vector<RealMoebius>& generators() const { return generators_; }
  const std::vector<PolygonSide>& sides() const { return sides_; }
  const std::vector<CuspVertex>& cusps() const { return cusps_; }
  Complex base_point() const { return base_point_; }
  int rank() const { return static_cast<int>(generators_.size()); }

  /// Generator for a signed letter.
  const RealMoebius& letter(int l) const;
  /// Group element of a word (first letter acts first).
  RealMoebius element(const Word& w) const;

  /// Signed side coordinate Re(S_j z), positive inside the polygon.
  double side_coordinate(int side, Complex z) const;
  /// Chart of side j (p -> 0, q -> inf) and the sign of Re on the inside.
  const RealMoebius& side_chart(int side) const { return side_charts_[side]; }
  double inside_sign(int side) const { return inside_sign_[side]; }
  bool contains(Complex z, double tol = 1e-9) const;

  /// Height of z in the chart of cusp vertex k (peripheral normalised to
  /// z -> z + 1).
  double cusp_height(int k, Complex z) const;
  double max_cusp_height(Complex z) const;
  /// Chart of cusp vertex k: sends the vertex to infinity, peripheral to z -> z + 1.
  const RealMoebius& cusp_chart(int k) const { return cusp_charts_[k]; }

  /// Hyperbolic area, from the vertex count of an ideal polygon; NaN when
  /// the polygon has finite vertices.
  double area() const;
  bool is_ideal() const { return ideal_vertices_.size() == sides_.size(); }
  /// Ideal vertices in cyclic order (empty if the polygon is not ideal).
  const std::vector<double>& ideal_vertices() const { return ideal_vertices_; }

 private:
  std::string name_;
  std::vector<RealMoebius> generators_;
  std::vector<RealMoebius> inverses_;
  std::vector<PolygonSide> sides_;
  std::vector<CuspVertex> cusps_;
  Complex base_point_;
  std::vector<RealMoebius> side_charts_;  // S_j: p -> 0, q -> inf
  std::vector<double> inside_sign_;
  std::vector<RealMoebius> cusp_charts_;
  std::vector<double> ideal_vertices_;
};

struct FlowResult {
  UnitTangent v;
  Word word;
};

/// Flows v (base in the closed polygon) for time t on the surface. Crossing
/// times are the roots of the side coordinate along the geodesic. Negative t
/// flows backward. Throws VertexHit / CuspCapture.
FlowResult flow_on_surface(const UnitTangent& v, double t, const SurfaceGroup& g,
                           const FlowOptions& opts = {});

/// Liouville-distributed unit tangent vector with base point in the polygon.
UnitTangent liouville_sample(const SurfaceGroup& g, Rng& rng);

/// First n signed crossing letters of the geodesic through v.
/// Throws CuspCapture carrying the partial word.
Word itinerary(const UnitTangent& v, int n_crossings, const SurfaceGroup& g,
               const FlowOptions& opts = {});

struct CuspExcursion {
  double time;     // t_u: length of the excursion above Im = 1
  double winding;  // a_u = 2 cos(eta) / sin(eta)
  double eta;      // entry angle from the upward vertical, positive to the right
};

/// Excursion of the geodesic through v (base on Im = 1 in a chart where the
/// peripheral map is z -> z + 1) into the horoball Im > 1. Throws
/// NumericalError("infinite excursion") for a radial vector and
/// std::invalid_argument when v does not point into the cusp.
CuspExcursion cusp_excursion_parameters(const UnitTangent& v, double tol = 1e-12);

}  // namespace riccati
