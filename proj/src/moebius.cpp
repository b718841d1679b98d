#include "riccati/moebius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace riccati {

namespace {

bool all_finite(const CMatrix& m) {
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) return false;
  return true;
}

// Bracket [p, q] = p0 q1 - p1 q0; zero iff p and q are the same point.
Complex bracket(const SpherePoint& p, const SpherePoint& q) {
  return p.w0() * q.w1() - p.w1() * q.w0();
}

}  // namespace

// ---------------------------------------------------------------------------
// SpherePoint / FiberPoint

SpherePoint::SpherePoint() : w0_(0.0), w1_(1.0) {}

SpherePoint::SpherePoint(Complex w0, Complex w1) {
  const double a0 = std::abs(w0);
  const double a1 = std::abs(w1);
  if (!(a0 > 0.0 || a1 > 0.0) || !std::isfinite(a0) || !std::isfinite(a1))
    throw NumericalError("sphere point: homogeneous coordinates are zero or non-finite");
  if (a0 >= a1) {
    w1_ = w1 / w0;
    w0_ = 1.0;
  } else {
    w0_ = w0 / w1;
    w1_ = 1.0;
  }
}

Complex SpherePoint::affine_value() const {
  if (w1_ == Complex(0.0)) return {std::numeric_limits<double>::infinity(), 0.0};
  return w0_ / w1_;
}

FiberPoint::FiberPoint(CVector v) : v_(std::move(v)) {
  Eigen::Index k = 0;
  const double top = v_.cwiseAbs().maxCoeff(&k);
  if (!(top > 0.0) || !std::isfinite(top))
    throw NumericalError("fiber point: zero or non-finite vector");
  const Complex s = v_(k);
  v_ /= s;
  v_(k) = 1.0;
}

FiberPoint::FiberPoint(const SpherePoint& p) : v_(2) {
  v_(0) = p.w0();
  v_(1) = p.w1();
}

SpherePoint FiberPoint::as_sphere_point() const {
  if (dim() != 2) throw std::invalid_argument("fiber point is not on CP^1");
  return {v_(0), v_(1)};
}

// ---------------------------------------------------------------------------
// ProjectiveMap

Complex normalize_in_place(CMatrix& m) {
  Eigen::Index r = 0, c = 0;
  const double top = m.cwiseAbs().maxCoeff(&r, &c);
  if (!(top > 0.0) || !std::isfinite(top)) throw NumericalError("matrix is zero or non-finite");
  const Complex s = m(r, c);
  m /= s;
  m(r, c) = 1.0;
  return s;
}

ProjectiveMap::ProjectiveMap(const CMatrix& m) : m_(m) {
  if (m_.rows() != m_.cols() || m_.rows() < 2 || m_.rows() > kMaxDim)
    throw std::invalid_argument("projective map needs a square matrix of size 2.." +
                                std::to_string(kMaxDim));
  if (!all_finite(m_)) throw NumericalError("overflow: projective map has non-finite entries");
  normalize_in_place(m_);
  const Complex det = m_.determinant();
  if (!(std::abs(det) > 0.0) || !std::isfinite(std::abs(det)))
    throw NumericalError("projective map is singular");
}

ProjectiveMap ProjectiveMap::identity(int n) {
  return ProjectiveMap(CMatrix::Identity(n, n));
}

ProjectiveMap ProjectiveMap::from_2x2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return ProjectiveMap(m);
}

ProjectiveMap compose(const ProjectiveMap& a, const ProjectiveMap& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("compose: dimension mismatch");
  return ProjectiveMap(a.matrix() * b.matrix());
}

ProjectiveMap inverse(const ProjectiveMap& m) {
  if (m.dim() == 2) {
    const CMatrix& x = m.matrix();
    return ProjectiveMap::from_2x2(x(1, 1), -x(0, 1), -x(1, 0), x(0, 0));
  }
  return ProjectiveMap(m.matrix().inverse());
}

bool projectively_equal(const ProjectiveMap& a, const ProjectiveMap& b, double tol) {
  if (a.dim() != b.dim()) return false;
  Eigen::Index r = 0, c = 0;
  a.matrix().cwiseAbs().maxCoeff(&r, &c);
  const Complex bk = b.matrix()(r, c);
  if (std::abs(bk) == 0.0) return false;
  const Complex s = bk / a.matrix()(r, c);
  const double scale = b.matrix().cwiseAbs().maxCoeff();
  return (a.matrix() * s - b.matrix()).cwiseAbs().maxCoeff() <= tol * scale;
}

SpherePoint apply(const ProjectiveMap& m, const SpherePoint& p) {
  if (m.dim() != 2) throw std::invalid_argument("apply: map is not on CP^1");
  const CMatrix& x = m.matrix();
  return {x(0, 0) * p.w0() + x(0, 1) * p.w1(), x(1, 0) * p.w0() + x(1, 1) * p.w1()};
}

FiberPoint apply(const ProjectiveMap& m, const FiberPoint& p) {
  if (m.dim() != p.dim()) throw std::invalid_argument("apply: dimension mismatch");
  return FiberPoint(CVector(m.matrix() * p.coords()));
}

bool projectively_equal(const SpherePoint& p, const SpherePoint& q, double tol) {
  return std::abs(bracket(p, q)) <= tol;
}

// ---------------------------------------------------------------------------
// Classification and fixed points

std::string to_string(MapClass c) {
  switch (c) {
    case MapClass::identity: return "identity";
    case MapClass::elliptic: return "elliptic";
    case MapClass::parabolic: return "parabolic";
    case MapClass::loxodromic: return "loxodromic";
  }
  return "unknown";
}

namespace {

bool is_scalar_2x2(const CMatrix& x, double tol) {
  const double scale = x.cwiseAbs().maxCoeff();
  return std::abs(x(0, 1)) <= tol * scale && std::abs(x(1, 0)) <= tol * scale &&
         std::abs(x(0, 0) - x(1, 1)) <= tol * scale;
}

// Normalised trace t = tr / sqrt(det); eigenvalues of the SL(2,C) lift are
// the roots of x^2 - t x + 1.
Complex normalized_trace(const CMatrix& x) {
  const Complex det = x(0, 0) * x(1, 1) - x(0, 1) * x(1, 0);
  return (x(0, 0) + x(1, 1)) / std::sqrt(det);
}

}  // namespace

MapClass classify(const ProjectiveMap& m, double tol) {
  if (m.dim() != 2) throw std::invalid_argument("classify: only 2 x 2 maps");
  const CMatrix& x = m.matrix();
  if (is_scalar_2x2(x, tol)) return MapClass::identity;
  const Complex t = normalized_trace(x);
  const Complex disc = t * t - 4.0;
  if (std::abs(disc) <= 4.0 * tol) return MapClass::parabolic;
  const Complex root = std::sqrt(disc);
  const Complex l1 = (t + root) / 2.0;
  const Complex l2 = (t - root) / 2.0;
  const double dev = std::max(std::abs(std::abs(l1) - 1.0), std::abs(std::abs(l2) - 1.0));
  return dev <= tol ? MapClass::elliptic : MapClass::loxodromic;
}

std::vector<SpherePoint> fixed_points(const ProjectiveMap& m, double tol) {
  if (m.dim() != 2) throw std::invalid_argument("fixed_points: only 2 x 2 maps");
  const CMatrix& x = m.matrix();
  if (is_scalar_2x2(x, tol)) throw NumericalError("no isolated fixed points");

  const Complex a = x(0, 0), b = x(0, 1), c = x(1, 0), d = x(1, 1);
  const Complex tr = a + d;
  const Complex det = a * d - b * c;
  const Complex root = std::sqrt(tr * tr - 4.0 * det);
  // Stable quadratic roots.
  const Complex q = (std::abs(tr + root) >= std::abs(tr - root)) ? (tr + root) / 2.0
                                                                  : (tr - root) / 2.0;
  const Complex big = q;
  const Complex small = det / q;

  auto eigvec = [&](Complex lambda) {
    // Rows of (M - lambda) annihilate the eigenvector; take the better one.
    const Complex v0a = b, v1a = lambda - a;
    const Complex v0b = lambda - d, v1b = c;
    if (std::abs(v0a) + std::abs(v1a) >= std::abs(v0b) + std::abs(v1b)) return SpherePoint(v0a, v1a);
    return SpherePoint(v0b, v1b);
  };

  const double scale = std::sqrt(std::abs(det));
  if (std::abs(root) <= 2.0 * std::sqrt(tol) * scale) return {eigvec(tr / 2.0)};
  SpherePoint p_big = eigvec(big);
  SpherePoint p_small = eigvec(small);
  if (std::abs(big) >= std::abs(small)) return {p_big, p_small};
  return {p_small, p_big};
}

std::vector<Complex> eigenvalues(const CMatrix& m) {
  Eigen::ComplexEigenSolver<CMatrix> solver(m, false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue solver did not converge");
  std::vector<Complex> out(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + solver.eigenvalues().size());
  return out;
}

// ---------------------------------------------------------------------------
// Metric

double fubini_study_distance(const SpherePoint& p, const SpherePoint& q) {
  const double wedge = std::abs(bracket(p, q));
  const double dot = std::abs(p.w0() * std::conj(q.w0()) + p.w1() * std::conj(q.w1()));
  return std::atan2(wedge, dot);
}

double fubini_study_distance(const FiberPoint& p, const FiberPoint& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("fubini_study_distance: dimension mismatch");
  const CVector& a = p.coords();
  const CVector& b = q.coords();
  double wedge2 = 0.0;
  for (int i = 0; i < a.size(); ++i)
    for (int j = i + 1; j < a.size(); ++j) wedge2 += std::norm(a(i) * b(j) - a(j) * b(i));
  const double dot = std::abs(a.dot(b));
  return std::atan2(std::sqrt(wedge2), dot);
}

Eigen::Vector3d to_unit_sphere(const SpherePoint& p) {
  const Complex cross = p.w0() * std::conj(p.w1());
  const double n0 = std::norm(p.w0());
  const double n1 = std::norm(p.w1());
  const double s = n0 + n1;
  return {2.0 * cross.real() / s, 2.0 * cross.imag() / s, (n0 - n1) / s};
}

SpherePoint from_unit_sphere(const Eigen::Vector3d& x) {
  if (x.z() >= 0.0) return {1.0 + x.z(), Complex(x.x(), -x.y())};
  return {Complex(x.x(), x.y()), 1.0 - x.z()};
}

// ---------------------------------------------------------------------------
// Cross ratio

ProjectiveMap map_from_three_points(const SpherePoint& a, const SpherePoint& b,
                                    const SpherePoint& c) {
  constexpr double kTol = 1e-14;
  const Complex bc = bracket(b, c);
  const Complex ba = bracket(b, a);
  if (std::abs(bc) <= kTol || std::abs(ba) <= kTol || std::abs(bracket(a, c)) <= kTol)
    throw NumericalError("map_from_three_points: coincident points");
  // z -> [z,a][b,c] / ([z,c][b,a]) with [z,p] = z0 p1 - z1 p0.
  return ProjectiveMap::from_2x2(bc * a.w1(), -bc * a.w0(), ba * c.w1(), -ba * c.w0());
}

SpherePoint cross_ratio(const SpherePoint& a, const SpherePoint& b, const SpherePoint& c,
                        const SpherePoint& d) {
  return apply(map_from_three_points(a, b, c), d);
}

// ---------------------------------------------------------------------------
// Discs

bool Cap::contains(const Eigen::Vector3d& x, double margin) const {
  return center.dot(x) >= height + margin;
}

namespace {

SpherePoint antipode(const SpherePoint& p) { return {-std::conj(p.w1()), std::conj(p.w0())}; }

// Unitary map sending p to 0, together with its inverse.
std::pair<CMatrix, CMatrix> chart_at(const SpherePoint& p) {
  const double s = std::hypot(std::abs(p.w0()), std::abs(p.w1()));
  const Complex a = p.w0() / s, b = p.w1() / s;
  CMatrix u(2, 2);
  u << b, -a, std::conj(a), std::conj(b);
  return {u, u.adjoint()};
}

Complex chart_value(const CMatrix& u, const SpherePoint& p) {
  const Complex w0 = u(0, 0) * p.w0() + u(0, 1) * p.w1();
  const Complex w1 = u(1, 0) * p.w0() + u(1, 1) * p.w1();
  return w0 / w1;
}

SpherePoint from_chart(const CMatrix& uinv, Complex z) {
  return {uinv(0, 0) * z + uinv(0, 1), uinv(1, 0) * z + uinv(1, 1)};
}

// The boundary circle is computed in a unitary chart centred on one of the
// boundary points, where it passes through 0. With c its Euclidean centre
// there, the cap on the chart side has angular radius atan(2|c|) and centre
// on the ray through c; all quantities stay accurate for tiny discs.
Cap cap_through(const SpherePoint& b0, const SpherePoint& b1, const SpherePoint& b2,
                const SpherePoint& witness) {
  const SpherePoint pts[3] = {b0, b1, b2};
  int base = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    const CMatrix u = chart_at(pts[k]).first;
    double worst = 0.0;
    for (int j = 0; j < 3; ++j)
      if (j != k) worst = std::max(worst, std::abs(chart_value(u, pts[j])));
    if (worst < best) {
      best = worst;
      base = k;
    }
  }
  const auto [u, uinv] = chart_at(pts[base]);
  const Complex z1 = chart_value(u, pts[(base + 1) % 3]);
  const Complex z2 = chart_value(u, pts[(base + 2) % 3]);
  if (!std::isfinite(std::abs(z1)) || !std::isfinite(std::abs(z2))) throw NumericalError("disc degenerate");
  const Complex w = chart_value(u, witness);

  const Complex den = std::conj(z1) * z2 - z1 * std::conj(z2);
  double r_in;
  Complex dir;
  bool inside;
  if (std::abs(den) == 0.0) {
    // Boundary is a great circle through 0 in the chart.
    if (z1 == 0.0 && z2 == 0.0) throw NumericalError("disc degenerate");
    const Complex along = std::abs(z1) > 0.0 ? z1 / std::abs(z1) : z2 / std::abs(z2);
    dir = Complex(0.0, 1.0) * along;
    r_in = std::numbers::pi / 2.0;
    inside = std::isfinite(std::abs(w)) && (w * std::conj(dir)).real() > 0.0;
  } else {
    const Complex c = (std::norm(z1) * z2 - std::norm(z2) * z1) / den;
    const double rho = std::abs(c);
    if (!(rho > 0.0)) throw NumericalError("disc degenerate");
    dir = c / rho;
    r_in = std::atan(2.0 * rho);
    inside = std::isfinite(std::abs(w)) && std::abs(w - c) < rho;
  }
  SpherePoint centre = from_chart(uinv, dir * std::tan(0.5 * r_in));
  double radius = r_in;
  if (!inside) {
    centre = antipode(centre);
    radius = std::numbers::pi - r_in;
  }
  return {centre, radius, to_unit_sphere(centre), std::cos(radius)};
}

double centre_angle(const Cap& a, const Cap& b) {
  return 2.0 * fubini_study_distance(a.center_point, b.center_point);
}

}  // namespace

Disc::Disc(const SpherePoint& b0, const SpherePoint& b1, const SpherePoint& b2,
           const SpherePoint& witness, double tol)
    : boundary_{b0, b1, b2}, witness_(witness) {
  if (fubini_study_distance(b0, b1) <= tol || fubini_study_distance(b1, b2) <= tol ||
      fubini_study_distance(b0, b2) <= tol)
    throw NumericalError("disc degenerate");
  const Cap c = cap_through(b0, b1, b2, witness);
  if (c.radius - 2.0 * fubini_study_distance(c.center_point, witness) <= tol)
    throw NumericalError("disc witness lies on the boundary circle");
  // Counterclockwise: the witness maps into the upper half plane under
  // (b0, b1, b2) -> (0, 1, inf).
  const SpherePoint w = cross_ratio(b0, b1, b2, witness);
  if ((w.w0() * std::conj(w.w1())).imag() < 0.0) std::swap(boundary_[1], boundary_[2]);
}

Disc Disc::euclidean(Complex center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("disc radius must be positive");
  return Disc(SpherePoint::affine(center + radius), SpherePoint::affine(center + Complex(0, radius)),
              SpherePoint::affine(center - radius), SpherePoint::affine(center));
}

Disc Disc::euclidean_exterior(Complex center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("disc radius must be positive");
  return Disc(SpherePoint::affine(center + radius), SpherePoint::affine(center - Complex(0, radius)),
              SpherePoint::affine(center - radius), SpherePoint::infinity());
}

Disc Disc::complement() const {
  const ProjectiveMap m = map_from_three_points(boundary_[0], boundary_[1], boundary_[2]);
  const SpherePoint w = apply(m, witness_);
  const SpherePoint reflected(std::conj(w.w0()), std::conj(w.w1()));
  return Disc(boundary_[0], boundary_[2], boundary_[1], apply(inverse(m), reflected));
}

Cap Disc::cap() const { return cap_through(boundary_[0], boundary_[1], boundary_[2], witness_); }

bool Disc::contains(const SpherePoint& p) const {
  const Cap c = cap();
  return 2.0 * fubini_study_distance(c.center_point, p) < c.radius;
}

Disc disc_image(const ProjectiveMap& m, const Disc& d, double tol) {
  return Disc(apply(m, d.boundary(0)), apply(m, d.boundary(1)), apply(m, d.boundary(2)),
              apply(m, d.witness()), tol);
}

double disc_diameter(const Disc& d) {
  return std::min(d.cap().angular_radius(), std::numbers::pi / 2.0);
}

double disc_gap(const Disc& a, const Disc& b) {
  const Cap ca = a.cap();
  const Cap cb = b.cap();
  return 0.5 * (centre_angle(ca, cb) - ca.radius - cb.radius);
}

double nesting_margin(const Disc& inner, const Disc& outer) {
  const Cap ci = inner.cap();
  const Cap co = outer.cap();
  return 0.5 * (co.radius - ci.radius - centre_angle(ci, co));
}

}  // namespace riccati
