#include "riccati/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace riccati {

namespace {

constexpr double kPi = std::numbers::pi;

bool same_ideal(double x, double y, double tol = 1e-9) {
  if (std::isinf(x) || std::isinf(y)) return std::isinf(x) && std::isinf(y);
  return std::abs(x - y) <= tol * std::max(1.0, std::abs(x));
}

std::string ideal_to_string(double x) {
  if (std::isinf(x)) return "inf";
  std::ostringstream os;
  os << x;
  return os.str();
}

RealMoebius diag_flow(double t) {
  const double e = std::exp(0.5 * t);
  return {e, 0.0, 0.0, 1.0 / e};
}

RealMoebius renormalize(const RealMoebius& g) {
  return RealMoebius::normalized(g.a, g.b, g.c, g.d);
}

// Real map sending p -> 0 and q -> inf with positive determinant.
RealMoebius make_side_chart(double p, double q) {
  if (std::isinf(q)) return {1.0, -p, 0.0, 1.0};
  if (std::isinf(p)) return {0.0, 1.0, -1.0, q};
  if (q > p) return RealMoebius::normalized(1.0, -p, -1.0, q);
  return RealMoebius::normalized(1.0, -p, 1.0, -q);
}

// Real map sending the ideal point p to infinity.
RealMoebius to_infinity(double p) {
  if (std::isinf(p)) return RealMoebius::identity();
  return {0.0, 1.0, -1.0, p};
}

}  // namespace

// ---------------------------------------------------------------------------
// RealMoebius / UnitTangent

RealMoebius RealMoebius::normalized(double a, double b, double c, double d) {
  const double det = a * d - b * c;
  if (!(det > 0.0) || !std::isfinite(det))
    throw NumericalError("real Moebius map must have positive finite determinant");
  const double s = 1.0 / std::sqrt(det);
  return {a * s, b * s, c * s, d * s};
}

double RealMoebius::apply_ideal(double x) const {
  if (std::isinf(x)) return c == 0.0 ? kIdealInfinity : a / c;
  const double den = c * x + d;
  if (den == 0.0) return kIdealInfinity;
  return (a * x + b) / den;
}

RealMoebius operator*(const RealMoebius& x, const RealMoebius& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
          x.c * y.b + x.d * y.d};
}

UnitTangent::UnitTangent(const RealMoebius& g) : g_(renormalize(g)) {}

UnitTangent UnitTangent::at(Complex z, double angle) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("unit tangent base point must lie in H");
  const double sy = std::sqrt(z.imag());
  const RealMoebius na{sy, z.real() / sy, 0.0, 1.0 / sy};
  const double phi = -0.5 * angle;
  const RealMoebius k{std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi)};
  return UnitTangent(na * k);
}

double UnitTangent::direction_angle() const {
  const Complex den = g_.c * Complex(0.0, 1.0) + g_.d;
  const Complex dir = Complex(0.0, 1.0) / (den * den);
  double a = std::arg(dir) - kPi / 2.0;
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

UnitTangent UnitTangent::reversed() const {
  return UnitTangent(g_ * RealMoebius{0.0, -1.0, 1.0, 0.0});
}

UnitTangent push(const RealMoebius& g, const UnitTangent& v) {
  return UnitTangent(g * v.element());
}

UnitTangent geodesic_flow_h(const UnitTangent& v, double t) {
  return UnitTangent(v.element() * diag_flow(t));
}

// ---------------------------------------------------------------------------
// Word

Word::Word(std::vector<int> letters) {
  letters_.reserve(letters.size());
  for (int l : letters) push_back(l);
}

void Word::push_back(int letter) {
  if (letter == 0) throw std::invalid_argument("word letters are nonzero signed indices");
  if (!letters_.empty() && letters_.back() == -letter)
    letters_.pop_back();
  else
    letters_.push_back(letter);
}

void Word::append(const Word& w) {
  for (int l : w.letters_) push_back(l);
}

Word Word::inverse() const {
  Word out;
  out.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.letters_.push_back(-*it);
  return out;
}

bool Word::is_reduced() const {
  for (std::size_t i = 1; i < letters_.size(); ++i)
    if (letters_[i] == -letters_[i - 1]) return false;
  return true;
}

Word concat(const Word& first, const Word& second) {
  Word out = first;
  out.append(second);
  return out;
}

std::string to_string(const Word& w) {
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ' ';
    os << (w[i] > 0 ? "+" : "") << w[i];
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// SurfaceGroup

SurfaceGroup::SurfaceGroup(std::string name, std::vector<RealMoebius> generators,
                           std::vector<PolygonSide> sides, std::vector<CuspVertex> cusps,
                           Complex base_point)
    : name_(std::move(name)),
      generators_(std::move(generators)),
      sides_(std::move(sides)),
      cusps_(std::move(cusps)),
      base_point_(base_point) {
  if (generators_.empty()) throw std::invalid_argument("surface: no generators");
  if (sides_.size() < 3) throw std::invalid_argument("surface: polygon needs at least 3 sides");
  for (auto& g : generators_) {
    g = renormalize(g);
    if (std::abs(g.trace()) < 2.0 - 1e-9)
      throw std::invalid_argument("surface: generator is elliptic");
    inverses_.push_back(g.inverse());
  }
  if (!(base_point_.imag() > 0.0)) throw std::invalid_argument("surface: base point not in H");

  const int n = static_cast<int>(sides_.size());
  for (int j = 0; j < n; ++j) {
    const PolygonSide& s = sides_[j];
    if (same_ideal(s.p, s.q)) throw std::invalid_argument("surface: degenerate side " + std::to_string(j));
    side_charts_.push_back(make_side_chart(s.p, s.q));
    const double x = side_charts_.back().apply(base_point_).real();
    if (x == 0.0) throw std::invalid_argument("surface: base point on side " + std::to_string(j));
    inside_sign_.push_back(x > 0.0 ? 1.0 : -1.0);
  }
  for (int j = 0; j < n; ++j) {
    const PolygonSide& s = sides_[j];
    if (s.partner < 0 || s.partner >= n)
      throw std::invalid_argument("surface: side " + std::to_string(j) + " has no partner");
    const PolygonSide& t = sides_[s.partner];
    if (t.partner != j || t.letter != -s.letter)
      throw std::invalid_argument("surface: pairing of side " + std::to_string(j) + " is not involutive");
    const RealMoebius& g = letter(s.letter);
    const double gp = g.apply_ideal(s.p), gq = g.apply_ideal(s.q);
    const bool match = (same_ideal(gp, t.p) && same_ideal(gq, t.q)) ||
                       (same_ideal(gp, t.q) && same_ideal(gq, t.p));
    if (!match)
      throw std::invalid_argument("surface: generator " + std::to_string(s.letter) +
                                  " does not map side " + std::to_string(j) + " onto its partner (" +
                                  ideal_to_string(gp) + ", " + ideal_to_string(gq) + ")");
    // The neighbouring tile across side j is g^{-1}(polygon).
    const Complex across = g.inverse().apply(base_point_);
    if (side_coordinate(j, across) >= 0.0)
      throw std::invalid_argument("surface: generator " + std::to_string(s.letter) +
                                  " does not carry the tile across side " + std::to_string(j) +
                                  " into the polygon");
  }
  if (!contains(base_point_, 0.0)) throw std::invalid_argument("surface: base point outside polygon");

  bool chained = true;
  for (int j = 0; j < n; ++j)
    if (!same_ideal(sides_[j].q, sides_[(j + 1) % n].p)) chained = false;
  if (chained)
    for (const auto& s : sides_) ideal_vertices_.push_back(s.p);

  for (const auto& cusp : cusps_) {
    const RealMoebius p = element(cusp.peripheral);
    if (std::abs(std::abs(p.trace()) - 2.0) > 1e-9)
      throw std::invalid_argument("surface: peripheral word " + to_string(cusp.peripheral) +
                                  " is not parabolic");
    if (!same_ideal(p.apply_ideal(cusp.vertex), cusp.vertex))
      throw std::invalid_argument("surface: peripheral word " + to_string(cusp.peripheral) +
                                  " does not fix " + ideal_to_string(cusp.vertex));
    const RealMoebius s = to_infinity(cusp.vertex);
    const RealMoebius conj = s * p * s.inverse();
    // conj = +-[[1, tau], [0, 1]]
    const double tau = conj.b / conj.d;
    if (!(std::abs(tau) > 0.0) || !std::isfinite(tau))
      throw std::invalid_argument("surface: peripheral word is trivial");
    const double w = std::sqrt(std::abs(tau));
    cusp_charts_.push_back(RealMoebius{1.0 / w, 0.0, 0.0, w} * s);
  }
}

const RealMoebius& SurfaceGroup::letter(int l) const {
  const int idx = std::abs(l) - 1;
  if (l == 0 || idx >= rank()) throw std::out_of_range("letter " + std::to_string(l) + " out of range");
  return l > 0 ? generators_[idx] : inverses_[idx];
}

RealMoebius SurfaceGroup::element(const Word& w) const {
  RealMoebius g = RealMoebius::identity();
  for (int l : w.letters()) g = renormalize(letter(l) * g);
  return g;
}

double SurfaceGroup::side_coordinate(int side, Complex z) const {
  return inside_sign_[side] * side_charts_[side].apply(z).real();
}

bool SurfaceGroup::contains(Complex z, double tol) const {
  if (!(z.imag() > 0.0)) return false;
  for (int j = 0; j < static_cast<int>(sides_.size()); ++j)
    if (side_coordinate(j, z) < -tol) return false;
  return true;
}

double SurfaceGroup::cusp_height(int k, Complex z) const {
  return cusp_charts_[k].apply(z).imag();
}

double SurfaceGroup::max_cusp_height(Complex z) const {
  double h = 0.0;
  for (int k = 0; k < static_cast<int>(cusp_charts_.size()); ++k) h = std::max(h, cusp_height(k, z));
  return h;
}

double SurfaceGroup::area() const {
  if (!is_ideal()) return std::numeric_limits<double>::quiet_NaN();
  return (static_cast<double>(sides_.size()) - 2.0) * kPi;
}

// ---------------------------------------------------------------------------
// Flow

namespace {

struct Crossing {
  double time;
  int side;
};

// Earliest outward crossing of the geodesic g a_t i (t >= 0) through a
// polygon side. Along the geodesic Re(S g a_t i) has the sign of
// A e^{2t} + B with [a b; c d] = S g, A = a c, B = b d.
std::optional<Crossing> next_crossing(const RealMoebius& g,
                                      const std::vector<RealMoebius>& charts,
                                      const std::vector<double>& inside, double vertex_tol) {
  double best = kIdealInfinity, second = kIdealInfinity;
  int best_side = -1;
  const int n = static_cast<int>(charts.size());
  for (int j = 0; j < n; ++j) {
    const RealMoebius h = charts[j] * g;
    const double A = h.a * h.c;
    const double B = h.b * h.d;
    if (A == 0.0) continue;  // asymptotic to the side
    // Outward means the coordinate heads to the outside sign.
    if ((A > 0.0 ? 1.0 : -1.0) != -inside[j]) continue;
    const double ratio = -B / A;
    double t = ratio > 0.0 ? 0.5 * std::log(ratio) : 0.0;
    t = std::max(t, 0.0);
    if (t < best) {
      second = best;
      best = t;
      best_side = j;
    } else if (t < second) {
      second = t;
    }
  }
  if (best_side < 0) return std::nullopt;
  if (second - best < vertex_tol)
    throw VertexHit("vertex hit, perturb seed");
  return Crossing{best, best_side};
}

// Shared state for following a geodesic crossing by crossing.
class Tracker {
 public:
  Tracker(const SurfaceGroup& G, const FlowOptions& opts) : G_(G), opts_(opts) {
    for (int j = 0; j < static_cast<int>(G.sides().size()); ++j) {
      charts_.push_back(G.side_chart(j));
      inside_.push_back(G.inside_sign(j));
    }
  }

  std::optional<Crossing> next(const RealMoebius& g) const {
    return next_crossing(g, charts_, inside_, opts_.vertex_tolerance);
  }

  // Apply the deck transformation of a crossing at time `c.time`.
  RealMoebius cross(const RealMoebius& g, const Crossing& c, Word& word) {
    const int l = G_.sides()[c.side].letter;
    RealMoebius out = renormalize(G_.letter(l) * (g * diag_flow(c.time)));
    word.push_back(l);
    if (++crossings_ > opts_.max_crossings)
      throw CuspCapture("cusp capture: crossing budget exhausted", word);
    check_height(out, word);
    return out;
  }

  void check_height(const RealMoebius& g, const Word& word) const {
    if (G_.max_cusp_height(g.apply(Complex(0.0, 1.0))) > opts_.cusp_height_cutoff)
      throw CuspCapture("cusp capture: geodesic climbed above the cusp cutoff", word);
  }

 private:
  const SurfaceGroup& G_;
  const FlowOptions& opts_;
  std::vector<RealMoebius> charts_;
  std::vector<double> inside_;
  std::int64_t crossings_ = 0;
};

FlowResult flow_forward(const UnitTangent& v, double t, const SurfaceGroup& G,
                        const FlowOptions& opts) {
  Tracker tracker(G, opts);
  RealMoebius g = v.element();
  Word word;
  double remaining = t;
  while (true) {
    const auto c = tracker.next(g);
    if (!c || c->time > remaining) {
      g = g * diag_flow(remaining);
      break;
    }
    g = tracker.cross(g, *c, word);
    remaining -= c->time;
  }
  tracker.check_height(g, word);
  return {UnitTangent(g), std::move(word)};
}

}  // namespace

FlowResult flow_on_surface(const UnitTangent& v, double t, const SurfaceGroup& G,
                           const FlowOptions& opts) {
  if (!std::isfinite(t)) throw std::invalid_argument("flow_on_surface: time must be finite");
  if (t == 0.0) return {v, Word{}};
  if (t > 0.0) return flow_forward(v, t, G, opts);
  FlowResult r = flow_forward(v.reversed(), -t, G, opts);
  r.v = r.v.reversed();
  return r;
}

Word itinerary(const UnitTangent& v, int n_crossings, const SurfaceGroup& G,
               const FlowOptions& opts) {
  Tracker tracker(G, opts);
  RealMoebius g = v.element();
  Word word;
  while (static_cast<int>(word.size()) < n_crossings) {
    const auto c = tracker.next(g);
    if (!c) throw CuspCapture("cusp capture: geodesic ends in a cusp", word);
    g = tracker.cross(g, *c, word);
  }
  return word;
}

// ---------------------------------------------------------------------------
// Liouville sampling

namespace {

// Orientation-preserving real map sending (-1, 1, inf) to (x1, x2, x3).
RealMoebius standard_triangle_map(double x1, double x2, double x3) {
  auto pt = [](double x) {
    return std::isinf(x) ? SpherePoint::infinity() : SpherePoint::affine(x);
  };
  const ProjectiveMap from = map_from_three_points(pt(-1.0), pt(1.0), SpherePoint::infinity());
  const ProjectiveMap to = map_from_three_points(pt(x1), pt(x2), pt(x3));
  const ProjectiveMap m = compose(inverse(to), from);
  // Real up to a complex scalar: remove the phase of the largest entry.
  const CMatrix& x = m.matrix();
  return RealMoebius::normalized(x(0, 0).real(), x(0, 1).real(), x(1, 0).real(), x(1, 1).real());
}

// Hyperbolic-area sample from the ideal triangle {|x| <= 1, |z| >= 1}.
Complex sample_standard_triangle(Rng& rng) {
  const double x = std::sin(rng.uniform(-kPi / 2.0, kPi / 2.0));
  const double y = std::sqrt(std::max(0.0, 1.0 - x * x)) / rng.uniform_open_left();
  return {x, y};
}

std::optional<Complex> geodesic_intersection(const PolygonSide& s1, const PolygonSide& s2) {
  struct Geo {
    bool vertical;
    double x;  // line position or circle centre
    double r;
  };
  auto make = [](const PolygonSide& s) {
    if (std::isinf(s.p)) return Geo{true, s.q, 0.0};
    if (std::isinf(s.q)) return Geo{true, s.p, 0.0};
    return Geo{false, 0.5 * (s.p + s.q), 0.5 * std::abs(s.p - s.q)};
  };
  const Geo a = make(s1), b = make(s2);
  if (a.vertical && b.vertical) return std::nullopt;
  if (a.vertical || b.vertical) {
    const Geo& line = a.vertical ? a : b;
    const Geo& circ = a.vertical ? b : a;
    const double h2 = circ.r * circ.r - (line.x - circ.x) * (line.x - circ.x);
    if (h2 <= 0.0) return std::nullopt;
    return Complex(line.x, std::sqrt(h2));
  }
  if (a.x == b.x) return std::nullopt;
  const double x = (a.r * a.r - b.r * b.r - a.x * a.x + b.x * b.x) / (2.0 * (b.x - a.x));
  const double h2 = a.r * a.r - (x - a.x) * (x - a.x);
  if (h2 <= 0.0) return std::nullopt;
  return Complex(x, std::sqrt(h2));
}

UnitTangent sample_compact(const SurfaceGroup& G, Rng& rng) {
  // Bounding box of the polygon from its vertices and side arcs.
  const auto& sides = G.sides();
  const int n = static_cast<int>(sides.size());
  std::vector<Complex> vertices;
  for (int j = 0; j < n; ++j) {
    const auto v = geodesic_intersection(sides[j], sides[(j + 1) % n]);
    if (!v) throw NumericalError("polygon/bounding-box mismatch: consecutive sides do not meet");
    vertices.push_back(*v);
  }
  double x0 = kIdealInfinity, x1 = -kIdealInfinity, y0 = kIdealInfinity, y1 = 0.0;
  for (const auto& v : vertices) {
    x0 = std::min(x0, v.real());
    x1 = std::max(x1, v.real());
    y0 = std::min(y0, v.imag());
    y1 = std::max(y1, v.imag());
  }
  for (const auto& s : sides)
    if (!std::isinf(s.p) && !std::isinf(s.q)) y1 = std::max(y1, 0.5 * std::abs(s.p - s.q));
  constexpr int kMaxProposals = 1'000'000;
  for (int k = 0; k < kMaxProposals; ++k) {
    const double x = rng.uniform(x0, x1);
    const double u = rng.uniform();
    const double y = 1.0 / (1.0 / y0 - u * (1.0 / y0 - 1.0 / y1));
    if (G.contains({x, y}, 0.0)) return UnitTangent::at({x, y}, rng.uniform(-kPi, kPi));
  }
  throw NumericalError("polygon/bounding-box mismatch: acceptance ratio below 1e-4");
}

}  // namespace

UnitTangent liouville_sample(const SurfaceGroup& G, Rng& rng) {
  if (!G.is_ideal()) return sample_compact(G, rng);
  const auto& vx = G.ideal_vertices();
  const int triangles = static_cast<int>(vx.size()) - 2;
  constexpr int kMaxProposals = 10'000;
  for (int k = 0; k < kMaxProposals; ++k) {
    const int i = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(triangles)));
    const RealMoebius m = standard_triangle_map(vx[0], vx[i], vx[i + 1]);
    const Complex z0 = sample_standard_triangle(rng);
    const double angle = rng.uniform(-kPi, kPi);
    const UnitTangent v = push(m, UnitTangent::at(z0, angle));
    if (G.contains(v.base_point(), 1e-12)) return v;
  }
  throw NumericalError("polygon/bounding-box mismatch: acceptance ratio below 1e-4");
}

// ---------------------------------------------------------------------------
// Cusp excursions

CuspExcursion cusp_excursion_parameters(const UnitTangent& v, double tol) {
  const Complex z = v.base_point();
  if (std::abs(z.imag() - 1.0) > 1e-9)
    throw std::invalid_argument("cusp excursion: base point is not on the horocycle Im = 1");
  const double eta = -v.direction_angle();
  if (std::abs(eta) > kPi / 2.0 + tol)
    throw std::invalid_argument("cusp excursion: vector does not point into the cusp");
  const double s = std::sin(eta);
  if (std::abs(s) <= tol) throw NumericalError("infinite excursion");
  const double c = std::max(0.0, std::cos(eta));
  CuspExcursion out;
  out.eta = eta;
  out.winding = 2.0 * c / s;
  out.time = 2.0 * std::log((1.0 + c) / std::abs(s));
  return out;
}

}  // namespace riccati
