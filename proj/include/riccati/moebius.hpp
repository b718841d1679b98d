// Projective linear algebra on the Riemann sphere and on CP^{n-1}.
//
// Everything here works in homogeneous coordinates: a point of CP^1 is a
// pair (w0, w1) with z = w0 / w1, so infinity is (1, 0) and needs no chart
// special-casing. Matrices and points are renormalised by their
// largest-magnitude entry after every operation, which keeps long words of
// generators in range without changing projective classes.
#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace riccati {

using Complex = std::complex<double>;

/// Largest fiber dimension supported. Matrices live on the stack.
inline constexpr int kMaxDim = 8;

using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using CVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

/// Raised when a computation leaves the range where its result is meaningful
/// (singular input, collapsed disc, coincident points, overflow).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Points

/// A point of CP^1 in homogeneous coordinates, normalised so that the larger
/// coordinate is exactly 1.
class SpherePoint {
 public:
  SpherePoint();  // the point 0
  SpherePoint(Complex w0, Complex w1);

  static SpherePoint affine(Complex z) { return {z, 1.0}; }
  static SpherePoint infinity() { return {1.0, 0.0}; }

  Complex w0() const { return w0_; }
  Complex w1() const { return w1_; }

  bool is_infinity(double tol = 0.0) const { return std::abs(w1_) <= tol; }
  /// Affine coordinate w0/w1; infinite components when the point is infinity.
  Complex affine_value() const;

 private:
  Complex w0_;
  Complex w1_;
};

/// A point of CP^{n-1}: a nonzero complex n-vector up to scaling, normalised
/// so its largest-magnitude coordinate is exactly 1.
class FiberPoint {
 public:
  explicit FiberPoint(CVector v);
  explicit FiberPoint(const SpherePoint& p);

  int dim() const { return static_cast<int>(v_.size()); }
  const CVector& coords() const { return v_; }
  /// Only valid for dim() == 2.
  SpherePoint as_sphere_point() const;

 private:
  CVector v_;
};

// ---------------------------------------------------------------------------
// Maps

/// An invertible n x n complex matrix modulo nonzero scalars.
class ProjectiveMap {
 public:
  /// Throws NumericalError on a singular or non-finite matrix.
  explicit ProjectiveMap(const CMatrix& m);

  static ProjectiveMap identity(int n);
  static ProjectiveMap from_2x2(Complex a, Complex b, Complex c, Complex d);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

 private:
  CMatrix m_;
};

/// Rescale so the largest-magnitude entry is exactly 1; returns the factor
/// that was divided out.
Complex normalize_in_place(CMatrix& m);

/// a o b (b acts first).
ProjectiveMap compose(const ProjectiveMap& a, const ProjectiveMap& b);
ProjectiveMap inverse(const ProjectiveMap& m);

/// Equality in PGL(n, C): the matrices agree after removing the scalar that
/// best aligns them, with relative tolerance `tol`.
bool projectively_equal(const ProjectiveMap& a, const ProjectiveMap& b, double tol = 1e-9);

SpherePoint apply(const ProjectiveMap& m, const SpherePoint& p);
FiberPoint apply(const ProjectiveMap& m, const FiberPoint& p);

bool projectively_equal(const SpherePoint& p, const SpherePoint& q, double tol = 1e-12);

enum class MapClass { identity, elliptic, parabolic, loxodromic };

std::string to_string(MapClass c);

/// Classification of a 2 x 2 map by the moduli of its (determinant
/// normalised) eigenvalues. `tol` is relative.
MapClass classify(const ProjectiveMap& m, double tol = 1e-9);

/// Isolated fixed points of a 2 x 2 map. Loxodromic maps return
/// {attracting, repelling}; parabolic maps return their single fixed point.
/// Throws NumericalError("no isolated fixed points") for the identity.
std::vector<SpherePoint> fixed_points(const ProjectiveMap& m, double tol = 1e-9);

/// Eigenvalues of the matrix lift (not normalised), any dimension.
std::vector<Complex> eigenvalues(const CMatrix& m);

// ---------------------------------------------------------------------------
// Metric

/// Fubini-Study distance arccos(|<p,q>| / |p||q|), in [0, pi/2]. 0 and
/// infinity are at the maximal distance pi/2.
double fubini_study_distance(const SpherePoint& p, const SpherePoint& q);
double fubini_study_distance(const FiberPoint& p, const FiberPoint& q);

/// Image on the unit sphere (Hopf map); infinity goes to the north pole.
/// Great-circle angle on the unit sphere is twice the Fubini-Study distance.
Eigen::Vector3d to_unit_sphere(const SpherePoint& p);
SpherePoint from_unit_sphere(const Eigen::Vector3d& x);

// ---------------------------------------------------------------------------
// Cross ratio

/// The unique map sending a -> 0, b -> 1, c -> infinity.
/// Throws NumericalError when two of the points coincide.
ProjectiveMap map_from_three_points(const SpherePoint& a, const SpherePoint& b,
                                    const SpherePoint& c);

/// Image of d under map_from_three_points(a, b, c); so cross_ratio(0,1,inf,z) = z.
SpherePoint cross_ratio(const SpherePoint& a, const SpherePoint& b, const SpherePoint& c,
                        const SpherePoint& d);

// ---------------------------------------------------------------------------
// Discs

/// Spherical cap on the unit sphere: all points within angle `radius` of
/// `center_point`. `center`/`height` give the same cap as a half-space.
struct Cap {
  SpherePoint center_point;
  double radius;  // angle on the unit sphere, in [0, pi]
  Eigen::Vector3d center;
  double height;

  double angular_radius() const { return radius; }
  bool contains(const Eigen::Vector3d& x, double margin = 0.0) const;
};

/// A round disc on the Riemann sphere, stored as three boundary points in
/// counterclockwise order (interior on the left) and an interior witness.
/// Moebius maps send discs to discs, so images are computed by mapping the
/// four points.
class Disc {
 public:
  /// Reorders the boundary points if needed so that the witness lies on the
  /// left. Throws NumericalError when boundary points are closer than `tol`
  /// or the witness sits on the boundary circle.
  Disc(const SpherePoint& b0, const SpherePoint& b1, const SpherePoint& b2,
       const SpherePoint& witness, double tol = 1e-12);

  /// Disc {|z - center| < radius} (radius > 0).
  static Disc euclidean(Complex center, double radius);
  /// Disc {|z - center| > radius} together with infinity.
  static Disc euclidean_exterior(Complex center, double radius);

  const SpherePoint& boundary(int i) const { return boundary_[i]; }
  const SpherePoint& witness() const { return witness_; }

  /// The closure of the other side of the boundary circle.
  Disc complement() const;
  Cap cap() const;
  bool contains(const SpherePoint& p) const;

 private:
  SpherePoint boundary_[3];
  SpherePoint witness_;
};

/// Throws NumericalError("disc degenerate") when the image boundary points
/// collapse below `tol`.
Disc disc_image(const ProjectiveMap& m, const Disc& d, double tol = 1e-12);

/// Fubini-Study diameter of the disc, from its spherical cap in closed form:
/// the angular radius for caps up to a hemisphere, pi/2 beyond.
double disc_diameter(const Disc& d);

/// Fubini-Study gap between two discs; negative when they overlap.
double disc_gap(const Disc& a, const Disc& b);

/// How far `inner` sits inside `outer` (Fubini-Study); negative when it
/// sticks out.
double nesting_margin(const Disc& inner, const Disc& outer);

}  // namespace riccati
