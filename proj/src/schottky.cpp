#include "riccati/schottky.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace riccati {

ProjectiveMap PingPongSystem::letter_map(int letter) const {
  const int idx = std::abs(letter) - 1;
  if (letter == 0 || idx >= rank()) throw std::out_of_range("schottky: letter out of range");
  return letter > 0 ? maps[idx] : inverse(maps[idx]);
}

const Disc& PingPongSystem::source(int letter) const {
  const int idx = std::abs(letter) - 1;
  if (letter == 0 || idx >= rank()) throw std::out_of_range("schottky: letter out of range");
  return letter > 0 ? A[idx] : B[idx];
}

const Disc& PingPongSystem::target(int letter) const { return source(-letter); }

namespace {

// Spherical derivative of the map at w, for a determinant-1 lift:
// |w|^2 / |M w|^2.
double spherical_derivative(const CMatrix& m, const CVector& w) {
  return w.squaredNorm() / (m * w).squaredNorm();
}

// Points on the boundary circle of a cap.
std::vector<CVector> boundary_samples(const Cap& cap, int count) {
  const double s = std::hypot(std::abs(cap.center_point.w0()), std::abs(cap.center_point.w1()));
  const Complex a = cap.center_point.w0() / s, b = cap.center_point.w1() / s;
  // Inverse of the unitary chart sending the centre to 0.
  CMatrix uinv(2, 2);
  uinv << b, -a, std::conj(a), std::conj(b);
  uinv.adjointInPlace();
  const double r = std::tan(0.5 * cap.radius);
  std::vector<CVector> out;
  for (int k = 0; k < count; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / count;
    CVector z(2);
    z << r * std::polar(1.0, phi), 1.0;
    out.push_back(uinv * z);
  }
  return out;
}

double letter_contraction(const PingPongSystem& sys, int letter) {
  CMatrix m = sys.letter_map(letter).matrix();
  m /= std::sqrt(m.determinant());
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const CVector weakest = svd.matrixV().col(1);
  const double global = 1.0 / std::pow(svd.singularValues()(1), 2);
  const Disc& src = sys.source(letter);
  // The spherical derivative has a single maximum at the weakest singular
  // direction; when that lies in the excluded source disc the maximum over
  // the rest of the sphere is on the source boundary.
  if (!src.contains(SpherePoint(weakest(0), weakest(1)))) return global;
  double best = 0.0;
  for (const CVector& w : boundary_samples(src.cap(), 720))
    best = std::max(best, spherical_derivative(m, w));
  return best;
}

}  // namespace

PingPongCertificate certify_ping_pong(const PingPongSystem& sys, double tol, bool allow_tangency) {
  PingPongCertificate cert;
  if (sys.rank() < 2 || sys.A.size() != sys.maps.size() || sys.B.size() != sys.maps.size()) {
    cert.failure = "system needs k >= 2 maps with one (A, B) disc pair each";
    return cert;
  }
  for (const auto& m : sys.maps)
    if (m.dim() != 2) {
      cert.failure = "ping-pong maps must act on CP^1";
      return cert;
    }

  std::vector<std::pair<std::string, const Disc*>> discs;
  for (int i = 0; i < sys.rank(); ++i) {
    discs.emplace_back("A" + std::to_string(i + 1), &sys.A[i]);
    discs.emplace_back("B" + std::to_string(i + 1), &sys.B[i]);
  }
  cert.min_gap = std::numeric_limits<double>::infinity();
  std::string worst_pair;
  for (std::size_t i = 0; i < discs.size(); ++i)
    for (std::size_t j = i + 1; j < discs.size(); ++j) {
      const double g = disc_gap(*discs[i].second, *discs[j].second);
      if (g < cert.min_gap) {
        cert.min_gap = g;
        worst_pair = discs[i].first + "/" + discs[j].first;
      }
    }

  cert.min_nesting_margin = std::numeric_limits<double>::infinity();
  std::string worst_letter;
  for (int i = 1; i <= sys.rank(); ++i)
    for (int x : {i, -i}) {
      const Disc image = disc_image(sys.letter_map(x), sys.source(x).complement());
      const double m = nesting_margin(image, sys.target(x));
      if (m < cert.min_nesting_margin) {
        cert.min_nesting_margin = m;
        worst_letter = (x > 0 ? "f" : "f^-1 ") + std::to_string(i);
      }
      cert.contraction = std::max(cert.contraction, letter_contraction(sys, x));
    }

  std::ostringstream why;
  const double floor = allow_tangency ? -tol : tol;
  if (!(cert.min_gap > floor)) {
    why << "discs " << worst_pair << " are not disjoint (gap " << cert.min_gap << ")";
  } else if (!(cert.min_nesting_margin > floor)) {
    why << worst_letter << " does not map the complement of its source disc inside its target (margin "
        << cert.min_nesting_margin << ")";
  }
  cert.failure = why.str();
  cert.certified = cert.failure.empty();
  return cert;
}

PingPongSystem surface_ping_pong(const SurfaceGroup& G) {
  auto point = [](double x) { return std::isinf(x) ? SpherePoint::infinity() : SpherePoint::affine(x); };
  auto beyond = [&](int side) {
    const PolygonSide& s = G.sides()[side];
    SpherePoint top;
    if (std::isinf(s.p) || std::isinf(s.q)) {
      const double x = std::isinf(s.p) ? s.q : s.p;
      top = SpherePoint::affine(Complex(x, 1.0));
    } else {
      top = SpherePoint::affine(Complex(0.5 * (s.p + s.q), 0.5 * std::abs(s.p - s.q)));
    }
    const Complex across = G.letter(s.letter).inverse().apply(G.base_point());
    return Disc(point(s.p), top, point(s.q), SpherePoint::affine(across));
  };
  PingPongSystem sys;
  sys.name = G.name();
  for (int i = 1; i <= G.rank(); ++i) {
    int plus = -1, minus = -1;
    for (int j = 0; j < static_cast<int>(G.sides().size()); ++j) {
      if (G.sides()[j].letter == i) plus = j;
      if (G.sides()[j].letter == -i) minus = j;
    }
    if (plus < 0 || minus < 0)
      throw std::invalid_argument("surface_ping_pong: generator " + std::to_string(i) +
                                  " pairs no sides");
    sys.maps.push_back(G.generators()[i - 1].to_projective());
    sys.A.push_back(beyond(plus));
    sys.B.push_back(beyond(minus));
  }
  return sys;
}

// ---------------------------------------------------------------------------

bool ReducedBiWord::is_reduced() const {
  std::vector<int> seq(past.rbegin(), past.rend());
  seq.insert(seq.end(), future.begin(), future.end());
  for (std::size_t k = 0; k < seq.size(); ++k) {
    if (seq[k] == 0) return false;
    if (k > 0 && seq[k] == -seq[k - 1]) return false;
  }
  return true;
}

ReducedBiWord ReducedBiWord::shifted() const {
  if (future.empty()) throw std::invalid_argument("shift needs a nonempty future");
  ReducedBiWord out;
  out.past.reserve(past.size() + 1);
  out.past.push_back(future.front());
  out.past.insert(out.past.end(), past.begin(), past.end());
  out.future.assign(future.begin() + 1, future.end());
  return out;
}

ReducedBiWord random_biword(int rank, int half_length, Rng& rng) {
  std::vector<int> seq;
  const int n = 2 * half_length;
  seq.reserve(n);
  while (static_cast<int>(seq.size()) < n) {
    const auto pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * rank)));
    const int letter = pick < rank ? pick + 1 : -(pick - rank + 1);
    if (!seq.empty() && letter == -seq.back()) continue;
    seq.push_back(letter);
  }
  ReducedBiWord w;
  w.past.assign(seq.rend() - half_length, seq.rend());  // a_{-1}, a_{-2}, ...
  w.future.assign(seq.begin() + half_length, seq.end());
  return w;
}

// ---------------------------------------------------------------------------

namespace {

// x_1 ... x_n (E \ S(x_n)) for growing n.
SectionPoint nest(const PingPongSystem& sys, const std::vector<int>& letters, double tol,
                  int max_window, std::vector<double>* diameters) {
  ProjectiveMap P = ProjectiveMap::identity(2);
  SectionPoint out{SpherePoint(), std::numbers::pi / 2.0, 0, false};
  const int limit = std::min<int>(max_window, static_cast<int>(letters.size()));
  for (int n = 1; n <= limit; ++n) {
    const int x = letters[n - 1];
    P = compose(P, sys.letter_map(x));
    std::optional<Disc> image;
    try {
      image = disc_image(P, sys.source(x).complement());
    } catch (const NumericalError&) {
      // Below the resolution of the boundary points; only the diagnostic
      // sequence gets this far.
      if (!diameters) throw;
      break;
    }
    const Disc& K = *image;
    const double d = disc_diameter(K);
    if (diameters) diameters->push_back(d);
    out = {K.witness(), d, n, d < tol};
    if (out.reached && !diameters) break;
  }
  return out;
}

}  // namespace

SectionPoint s_plus(const PingPongSystem& sys, const ReducedBiWord& w, double tol, int max_window) {
  if (!w.is_reduced()) throw std::invalid_argument("s_plus: word is not reduced");
  return nest(sys, w.past, tol, max_window, nullptr);
}

SectionPoint s_minus(const PingPongSystem& sys, const ReducedBiWord& w, double tol, int max_window) {
  if (!w.is_reduced()) throw std::invalid_argument("s_minus: word is not reduced");
  std::vector<int> inv(w.future.size());
  std::transform(w.future.begin(), w.future.end(), inv.begin(), [](int l) { return -l; });
  return nest(sys, inv, tol, max_window, nullptr);
}

std::vector<double> nested_diameters(const PingPongSystem& sys, const std::vector<int>& letters) {
  std::vector<double> out;
  nest(sys, letters, 0.0, static_cast<int>(letters.size()), &out);
  return out;
}

std::vector<int> bind_representation(const PingPongSystem& sys, const Representation& rho,
                                     double tol) {
  if (rho.dim() != 2) throw std::invalid_argument("schottky binding needs a 2-dimensional representation");
  std::vector<int> out;
  for (int i = 1; i <= rho.rank(); ++i) {
    const ProjectiveMap image(rho.image(i));
    int found = 0;
    for (int j = 1; j <= sys.rank() && !found; ++j) {
      if (projectively_equal(image, sys.letter_map(j), tol)) found = j;
      else if (projectively_equal(image, sys.letter_map(-j), tol)) found = -j;
    }
    if (!found)
      throw std::invalid_argument("representation image " + std::to_string(i) +
                                  " is not a generator of " + sys.name);
    out.push_back(found);
  }
  return out;
}

GeodesicSections schottky_section_for_geodesic(const PingPongSystem& sys, const Representation& rho,
                                               const SurfaceGroup& G, const UnitTangent& v,
                                               int n_crossings, double tol,
                                               const FlowOptions& opts) {
  const std::vector<int> binding = bind_representation(sys, rho);
  auto map_letter = [&](int l) { return l > 0 ? binding[l - 1] : -binding[-l - 1]; };

  const Word ahead = itinerary(v, n_crossings, G, opts);
  const Word behind = itinerary(v.reversed(), n_crossings, G, opts);
  GeodesicSections out;
  for (int l : ahead.letters()) out.word.future.push_back(map_letter(l));
  for (int l : behind.letters()) out.word.past.push_back(map_letter(-l));
  out.plus = s_plus(sys, out.word, tol, n_crossings);
  out.minus = s_minus(sys, out.word, tol, n_crossings);
  return out;
}

}  // namespace riccati
