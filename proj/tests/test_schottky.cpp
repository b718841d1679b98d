#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "riccati/cocycle.hpp"
#include "riccati/presets.hpp"
#include "riccati/schottky.hpp"

using namespace riccati;

namespace {

const PingPongSystem& preset() {
  static const PingPongSystem s = load_schottky("schottky-diag3");
  return s;
}

const SurfaceGroup& torus() {
  static const SurfaceGroup g = load_surface("once-punctured-torus");
  return g;
}

// Disc of spherical radius around a real point: Euclidean for finite points,
// the exterior of 1/r for infinity.
Disc disc_around(double x, double r) {
  if (std::isinf(x)) return Disc::euclidean_exterior(0.0, 1.0 / r);
  return Disc::euclidean(x, r);
}

// Map h(z) = (z - 1)/(z + 1) sends 0 -> -1 and inf -> 1.
PingPongSystem diag3_system(double radius_at_fixed_points) {
  PingPongSystem s;
  s.name = "test";
  const ProjectiveMap g1 = ProjectiveMap::from_2x2(3.0, 0.0, 0.0, 1.0 / 3.0);
  const ProjectiveMap h = ProjectiveMap::from_2x2(1.0, -1.0, 1.0, 1.0);
  s.maps = {g1, compose(h, compose(g1, inverse(h)))};
  // g1 repels 0, attracts inf; g2 repels -1, attracts 1.
  s.A = {disc_around(0.0, radius_at_fixed_points), disc_around(-1.0, radius_at_fixed_points)};
  s.B = {disc_around(kIdealInfinity, radius_at_fixed_points), disc_around(1.0, radius_at_fixed_points)};
  return s;
}

ProjectiveMap word_map(const PingPongSystem& s, const std::vector<int>& letters) {
  CMatrix m = CMatrix::Identity(2, 2);
  for (int l : letters) {
    const CMatrix& g = s.maps[std::abs(l) - 1].matrix();
    m = m * (l > 0 ? g : CMatrix(g.inverse()));
    m /= m.cwiseAbs().maxCoeff();
  }
  return ProjectiveMap(m);
}

std::vector<int> random_reduced(int rank, int len, Rng& rng) {
  std::vector<int> w;
  while (static_cast<int>(w.size()) < len) {
    const int l = (rng.uniform() < 0.5 ? -1 : 1) * (1 + static_cast<int>(rng.below(rank)));
    if (!w.empty() && l == -w.back()) continue;
    w.push_back(l);
  }
  return w;
}

// Unit tangent at x pointing along the geodesic to y, and the distance.
UnitTangent toward(Complex x, Complex y, double& dist) {
  dist = std::acosh(1 + std::norm(x - y) / (2 * x.imag() * y.imag()));
  Complex dir;
  if (std::abs(x.real() - y.real()) < 1e-14) {
    dir = Complex(0, y.imag() > x.imag() ? 1 : -1);
  } else {
    const double c = (std::norm(y) - std::norm(x)) / (2 * (y.real() - x.real()));
    const Complex radial = x - c;
    dir = Complex(-radial.imag(), radial.real());
    if ((y.real() - x.real()) * dir.real() < 0) dir = -dir;
  }
  return UnitTangent::at(x, std::atan2(-dir.real(), dir.imag()));
}

}  // namespace

TEST_CASE("shipped preset is certified") {
  const PingPongCertificate c = certify_ping_pong(preset());
  CHECK(c.certified);
  CHECK(c.failure.empty());
  CHECK(c.min_gap > 0.0);
  CHECK(c.min_nesting_margin > 0.0);
  CHECK(c.contraction < 1.0);

  // Independent check of the nesting: sampled boundary of x(E \ S(x)) lies in T(x).
  for (int x : {1, -1, 2, -2}) {
    const Disc image = disc_image(preset().letter_map(x), preset().source(x).complement());
    CHECK(nesting_margin(image, preset().target(x)) > 0.0);
    CHECK(preset().target(x).contains(image.witness()));
  }
}

TEST_CASE("the radius 0.45 configuration is rejected") {
  const PingPongCertificate c = certify_ping_pong(diag3_system(0.45));
  CHECK_FALSE(c.certified);
  CHECK(c.min_nesting_margin < 0.0);
  CHECK_FALSE(c.failure.empty());
}

TEST_CASE("overlapping discs fail disjointness") {
  PingPongSystem s = diag3_system(0.3);
  s.A[1] = Disc::euclidean(-0.5, 0.4);
  const PingPongCertificate c = certify_ping_pong(s);
  CHECK_FALSE(c.certified);
  CHECK(c.min_gap < 0.0);
}

TEST_CASE("surface ping-pong systems are tangent, not strict") {
  const SurfaceGroup G = load_surface("thrice-punctured-sphere");
  for (const SurfaceGroup* S : {&G, &torus()}) {
    const PingPongSystem sys = surface_ping_pong(*S);
    CHECK(certify_ping_pong(sys, 1e-9, true).certified);
    CHECK_FALSE(certify_ping_pong(sys).certified);
  }
}

TEST_CASE("freeness probe") {
  const PingPongSystem& s = preset();
  Rng rng(77);
  const SpherePoint probes[3] = {SpherePoint::affine({0.3, 0.7}), SpherePoint::affine({-2.0, 0.1}),
                                 SpherePoint::affine({0.9, -0.2})};
  for (int i = 0; i < 1000; ++i) {
    const std::vector<int> w = random_reduced(2, 1 + static_cast<int>(rng.below(12)), rng);
    const ProjectiveMap m = word_map(s, w);
    CHECK_FALSE(projectively_equal(m, ProjectiveMap::identity(2), 1e-9));
    double moved = 0.0;
    for (const auto& p : probes) moved = std::max(moved, fubini_study_distance(apply(m, p), p));
    CHECK(moved > 1e-6);
  }
}

TEST_CASE("bi-words") {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const ReducedBiWord w = random_biword(2, 20, rng);
    CHECK(w.past.size() == 20);
    CHECK(w.future.size() == 20);
    CHECK(w.is_reduced());
    const ReducedBiWord b = w.shifted();
    CHECK(b.is_reduced());
    CHECK(b.past.front() == w.future.front());
    CHECK(b.future.front() == w.future[1]);
  }
  ReducedBiWord bad{{1}, {-1}};
  CHECK_FALSE(bad.is_reduced());
  CHECK_THROWS_AS(s_plus(preset(), bad), std::invalid_argument);
}

TEST_CASE("constant words converge to the fixed points") {
  ReducedBiWord w{std::vector<int>(40, 1), std::vector<int>(40, 1)};
  const SectionPoint plus = s_plus(preset(), w);
  const SectionPoint minus = s_minus(preset(), w);
  CHECK(plus.reached);
  CHECK(minus.reached);
  CHECK(fubini_study_distance(plus.point, SpherePoint::infinity()) < 1e-9);
  CHECK(fubini_study_distance(minus.point, SpherePoint::affine(0.0)) < 1e-9);
  const auto fp = fixed_points(preset().letter_map(1));
  CHECK(fubini_study_distance(plus.point, fp[0]) < 1e-9);
  CHECK(fubini_study_distance(minus.point, fp[1]) < 1e-9);
}

TEST_CASE("nested discs shrink monotonically and geometrically") {
  const double c = certify_ping_pong(preset()).contraction;
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const ReducedBiWord w = random_biword(2, 64, rng);
    const std::vector<double> d = nested_diameters(preset(), w.past);
    REQUIRE(d.size() >= 2);
    for (std::size_t k = 1; k < d.size(); ++k) CHECK(d[k] <= d[k - 1] * (1 + 1e-9));
    CHECK(d.back() < 1e-9);
    // Lemma-style bound with the certified contraction constant.
    for (std::size_t k = 0; k < d.size(); ++k) CHECK(d[k] <= (std::numbers::pi / 2) * std::pow(c, k) * 1.0001);

    const SectionPoint plus = s_plus(preset(), w, 1e-9, 64);
    const SectionPoint minus = s_minus(preset(), w, 1e-9, 64);
    CHECK(plus.reached);
    CHECK(minus.reached);
    CHECK(plus.window <= 64);
    CHECK(fubini_study_distance(plus.point, minus.point) > plus.bound + minus.bound);
  }
}

TEST_CASE("shift equivariance") {
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    const ReducedBiWord a = random_biword(2, 64, rng);
    const ReducedBiWord b = a.shifted();
    const ProjectiveMap a0 = preset().letter_map(a.future.front());
    const SectionPoint pa = s_plus(preset(), a), pb = s_plus(preset(), b);
    const SectionPoint ma = s_minus(preset(), a), mb = s_minus(preset(), b);
    // a0 is Lipschitz with the spherical derivative bound of its matrix.
    const CMatrix m = a0.matrix();
    const double sv = Eigen::JacobiSVD<CMatrix>(m).singularValues()(0);
    const double svmin = Eigen::JacobiSVD<CMatrix>(m).singularValues()(1);
    const double lip = (sv * sv) / (svmin * svmin);
    CHECK(fubini_study_distance(pb.point, apply(a0, pa.point)) <= pb.bound + lip * pa.bound + 1e-12);
    CHECK(fubini_study_distance(mb.point, apply(a0, ma.point)) <= mb.bound + lip * ma.bound + 1e-12);
  }
}

TEST_CASE("binding a representation to the Schottky letters") {
  const Representation rho = load_representation("schottky-torus", torus());
  CHECK(bind_representation(preset(), rho) == std::vector<int>{1, 2});
  CHECK_THROWS_AS(bind_representation(preset(), Representation::canonical(torus())), std::invalid_argument);
}

TEST_CASE("sections over a closed geodesic") {
  const SurfaceGroup& G = torus();
  const Representation rho = load_representation("schottky-torus", G);
  const RealMoebius& a = G.letter(1);
  const double disc = std::sqrt((a.a - a.d) * (a.a - a.d) + 4 * a.b * a.c);
  const double f1 = (a.a - a.d + disc) / (2 * a.c), f2 = (a.a - a.d - disc) / (2 * a.c);
  const double centre = 0.5 * (f1 + f2), radius = 0.5 * std::abs(f1 - f2);
  const Complex z(-0.5, std::sqrt(radius * radius - (-0.5 - centre) * (-0.5 - centre)));
  const Complex radial = z - centre;
  const Complex tangent(-radial.imag(), radial.real());
  UnitTangent v = UnitTangent::at(z, std::atan2(-tangent.real(), tangent.imag()));
  if (itinerary(v, 1, G)[0] != 1) v = v.reversed();

  const GeodesicSections s = schottky_section_for_geodesic(preset(), rho, G, v, 12);
  CHECK(s.word.past == std::vector<int>(12, 1));
  CHECK(s.word.future == std::vector<int>(12, 1));
  CHECK(s.plus.reached);
  const auto fp = fixed_points(ProjectiveMap(rho.image(1)));
  CHECK(fubini_study_distance(s.plus.point, fp[0]) < 1e-9);
  CHECK(fubini_study_distance(s.minus.point, fp[1]) < 1e-9);
}

TEST_CASE("Schottky sections are invariant along the flow and match the estimator") {
  const SurfaceGroup& G = torus();
  const Representation rho = load_representation("schottky-torus", G);
  Rng rng(13);
  int done = 0;
  while (done < 100) {
    const UnitTangent v = liouville_sample(G, rng);
    try {
      const GeodesicSections s = schottky_section_for_geodesic(preset(), rho, G, v, 64);
      REQUIRE(s.plus.reached);
      REQUIRE(s.minus.reached);
      const SectionEstimate top = top_section_estimate(rho, G, v, 30.0);
      const SectionEstimate bottom = bottom_section_estimate(rho, G, v, 30.0);
      CHECK(fubini_study_distance(FiberPoint(s.plus.point), top.point) < 1e-5);
      CHECK(fubini_study_distance(FiberPoint(s.minus.point), bottom.point) < 1e-5);

      if (done < 20) {
        const double t = rng.uniform(0.5, 4.0);
        const FlowResult r = flow_on_surface(v, t, G);
        const GeodesicSections there = schottky_section_for_geodesic(preset(), rho, G, r.v, 64);
        const CocycleValue A = cocycle_along(rho, v, t, G);
        CHECK(fubini_study_distance(apply(A, FiberPoint(s.plus.point)), FiberPoint(there.plus.point)) < 1e-6);
        // The minus section is repelling for A, so it is compared through the
        // cocycle of the reversed segment, which is A^-1.
        const CocycleValue back = cocycle_along(rho, r.v.reversed(), t, G);
        CHECK(fubini_study_distance(FiberPoint(s.minus.point), apply(back, FiberPoint(there.minus.point))) < 1e-6);
      }
      ++done;
    } catch (const CuspCapture&) {
    }
  }
}

TEST_CASE("holonomy inside the polygon does not depend on the path") {
  const SurfaceGroup& G = torus();
  const Representation rho = load_representation("schottky-torus", G);
  Rng rng(21);
  for (int i = 0; i < 50; ++i) {
    Complex x, y, m;
    do x = Complex(rng.uniform(-0.9, 0.9), rng.uniform(0.6, 3)); while (!G.contains(x));
    do y = Complex(rng.uniform(-0.9, 0.9), rng.uniform(0.6, 3)); while (!G.contains(y));
    do m = Complex(rng.uniform(-0.9, 0.9), rng.uniform(0.6, 3)); while (!G.contains(m));
    double d1, d2, d3;
    const UnitTangent direct = toward(x, y, d1);
    const UnitTangent leg1 = toward(x, m, d2);
    const UnitTangent leg2 = toward(m, y, d3);
    const FlowResult r1 = flow_on_surface(direct, d1, G);
    const FlowResult r2 = flow_on_surface(leg1, d2, G);
    const FlowResult r3 = flow_on_surface(leg2, d3, G);
    CHECK(std::abs(r1.v.base_point() - y) < 1e-9);
    CHECK(std::abs(r3.v.base_point() - y) < 1e-9);
    const CocycleValue H1 = cocycle_along(rho, direct, d1, G);
    const CocycleValue H2 = cocycle_along(rho, leg2, d3, G) * cocycle_along(rho, leg1, d2, G);
    CHECK(relative_error(H1, H2) < 1e-12);
    CHECK(relative_error(H1, CocycleValue::identity(2)) < 1e-12);
    CHECK(r1.word.empty());
    CHECK(concat(r2.word, r3.word).empty());
  }
}
