#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "riccati/moebius.hpp"
#include "riccati/random.hpp"

using namespace riccati;
using namespace riccati::test;

namespace {

constexpr double kPi = std::numbers::pi;

ProjectiveMap m2(Complex a, Complex b, Complex c, Complex d) { return ProjectiveMap::from_2x2(a, b, c, d); }

}  // namespace

TEST_CASE("apply: examples") {
  const SpherePoint i = SpherePoint::affine({0, 1});
  CHECK(projectively_equal(apply(ProjectiveMap::identity(2), i), i));
  CHECK(projectively_equal(apply(m2(1, 1, 0, 1), SpherePoint::affine(0.0)), SpherePoint::affine(1.0)));
  CHECK(projectively_equal(apply(m2(0, -1, 1, 0), i), i));
  CHECK(apply(m2(1, 1, 0, 1), SpherePoint::infinity()).is_infinity());
}

TEST_CASE("apply agrees with the affine formula") {
  Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    const Complex a = random_complex(rng), b = random_complex(rng), c = random_complex(rng),
                  d = random_complex(rng);
    const Complex z = random_complex(rng);
    const Complex want = (a * z + b) / (c * z + d);
    const SpherePoint got = apply(m2(a, b, c, d), SpherePoint::affine(z));
    CHECK(std::abs(got.affine_value() - want) <= 1e-12 * (1.0 + std::abs(want)));
    CHECK(std::max(std::abs(got.w0()), std::abs(got.w1())) == doctest::Approx(1.0));
  }
}

TEST_CASE("compose and inverse") {
  const ProjectiveMap m = m2({1, 2}, 3, {0, -1}, 2);
  CHECK(projectively_equal(compose(m, inverse(m)), ProjectiveMap::identity(2)));
  CHECK(projectively_equal(compose(inverse(m), m), ProjectiveMap::identity(2)));
  CHECK(projectively_equal(compose(ProjectiveMap::identity(2), m), m));
  CHECK(projectively_equal(compose(m2(2, 0, 0, 1), m2(1, 1, 0, 1)), m2(2, 2, 0, 1)));
  CHECK(projectively_equal(m2(2, 4, 6, 8), m2({0, 1}, {0, 2}, {0, 3}, {0, 4})));
  CHECK_FALSE(projectively_equal(m2(1, 1, 0, 1), m2(1, 2, 0, 1)));
}

TEST_CASE("singular maps are rejected") {
  CHECK_THROWS_AS(m2(1, 2, 2, 4), NumericalError);
  CMatrix bad = CMatrix::Identity(3, 3);
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(ProjectiveMap{bad}, NumericalError);
}

TEST_CASE("long words stay normalised") {
  // 10 * (z -> z + 1): the raw product would overflow after ~300 letters.
  const ProjectiveMap g = m2(10, 10, 0, 10);
  ProjectiveMap p = ProjectiveMap::identity(2);
  for (int k = 0; k < 5000; ++k) p = compose(g, p);
  CHECK(std::abs(p(0, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(p(0, 0)) == doctest::Approx(1.0 / 5000.0));
  CHECK(projectively_equal(p, m2(1, 5000, 0, 1)));
  CHECK(std::abs(apply(p, SpherePoint::affine(0.5)).affine_value() - 5000.5) < 1e-9);
}

TEST_CASE("a collapsed word is reported, not silently kept") {
  const ProjectiveMap g = m2(2, 0, 0, 0.5);
  ProjectiveMap p = ProjectiveMap::identity(2);
  CHECK_THROWS_AS(
      [&] {
        for (int k = 0; k < 5000; ++k) p = compose(g, p);
      }(),
      NumericalError);
}

TEST_CASE("classify: examples and conjugation invariance") {
  CHECK(classify(m2(1, 1, 0, 1)) == MapClass::parabolic);
  CHECK(classify(m2(2, 0, 0, 0.5)) == MapClass::loxodromic);
  CHECK(classify(m2(std::polar(1.0, 0.3), 0, 0, std::polar(1.0, -0.3))) == MapClass::elliptic);
  CHECK(classify(m2(3, 0, 0, 3)) == MapClass::identity);
  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    const ProjectiveMap g = random_map(rng);
    for (const ProjectiveMap& m : {m2(1, 1, 0, 1), m2(2, 0, 0, 0.5), m2(std::polar(1.0, 0.7), 0, 0, 1.0)})
      CHECK(classify(compose(g, compose(m, inverse(g))), 1e-7) == classify(m));
  }
}

TEST_CASE("fixed points") {
  auto fp = fixed_points(m2(2, 0, 0, 0.5));
  REQUIRE(fp.size() == 2);
  CHECK(fp[0].is_infinity(1e-15));  // attracting
  CHECK(std::abs(fp[1].affine_value()) < 1e-15);
  fp = fixed_points(m2(1, 1, 0, 1));
  REQUIRE(fp.size() == 1);
  CHECK(fp[0].is_infinity(1e-15));
  fp = fixed_points(m2(0, -1, 1, 0));
  REQUIRE(fp.size() == 2);
  const Complex a = fp[0].affine_value(), b = fp[1].affine_value();
  CHECK(std::abs(a * b - 1.0) < 1e-12);  // {i, -i}
  CHECK(std::abs(std::abs(a.imag()) - 1.0) < 1e-12);
  CHECK_THROWS_WITH_AS(fixed_points(ProjectiveMap::identity(2)), "no isolated fixed points", NumericalError);
}

TEST_CASE("Fubini-Study distance") {
  const SpherePoint zero = SpherePoint::affine(0.0), inf = SpherePoint::infinity();
  CHECK(fubini_study_distance(zero, zero) == 0.0);
  CHECK(fubini_study_distance(zero, inf) == doctest::Approx(kPi / 2));
  Rng rng(3);
  for (int k = 0; k < 500; ++k) {
    const Complex z = random_complex(rng), w = random_complex(rng), u = random_complex(rng);
    const SpherePoint p = SpherePoint::affine(z), q = SpherePoint::affine(w), r = SpherePoint::affine(u);
    CHECK(fubini_study_distance(p, q) == doctest::Approx(fs_oracle(z, w)).epsilon(1e-10));
    CHECK(fubini_study_distance(p, q) == doctest::Approx(fubini_study_distance(q, p)));
    CHECK(fubini_study_distance(p, r) <= fubini_study_distance(p, q) + fubini_study_distance(q, r) + 1e-12);
    const ProjectiveMap U = random_unitary(rng);
    CHECK(fubini_study_distance(apply(U, p), apply(U, q)) ==
          doctest::Approx(fubini_study_distance(p, q)).epsilon(1e-10));
  }
  CHECK(fubini_study_distance(SpherePoint::affine(1.0), SpherePoint::affine({0, 1})) ==
        doctest::Approx(fubini_study_distance(apply(m2(0, -1, 1, 0), SpherePoint::affine(1.0)),
                                              apply(m2(0, -1, 1, 0), SpherePoint::affine({0, 1})))));
}

TEST_CASE("Fubini-Study distance on CP^{n-1}") {
  Rng rng(9);
  for (int n : {2, 3, 4}) {
    const FiberPoint a(random_vector(n, rng)), b(random_vector(n, rng)), c(random_vector(n, rng));
    CHECK(fubini_study_distance(a, a) < 1e-7);
    CHECK(fubini_study_distance(a, c) <= fubini_study_distance(a, b) + fubini_study_distance(b, c) + 1e-12);
    CHECK(fubini_study_distance(a, b) <= kPi / 2 + 1e-15);
  }
}

TEST_CASE("Hopf map round trip") {
  Rng rng(4);
  for (int k = 0; k < 100; ++k) {
    const SpherePoint p = SpherePoint::affine(random_complex(rng));
    const Eigen::Vector3d x = to_unit_sphere(p);
    CHECK(x.norm() == doctest::Approx(1.0));
    CHECK(projectively_equal(from_unit_sphere(x), p, 1e-12));
  }
  CHECK(to_unit_sphere(SpherePoint::infinity()).z() == doctest::Approx(1.0));
}

TEST_CASE("cross ratio convention and invariance") {
  const SpherePoint zero = SpherePoint::affine(0.0), one = SpherePoint::affine(1.0), inf = SpherePoint::infinity();
  CHECK(projectively_equal(map_from_three_points(zero, one, inf), ProjectiveMap::identity(2)));
  const Complex z(2, 3);
  CHECK(std::abs(cross_ratio(zero, one, inf, SpherePoint::affine(z)).affine_value() - z) < 1e-14);
  CHECK_THROWS_AS(map_from_three_points(zero, zero, inf), NumericalError);
  Rng rng(17);
  for (int k = 0; k < 100; ++k) {
    SpherePoint p[4];
    for (auto& x : p) x = SpherePoint::affine(random_complex(rng));
    const ProjectiveMap m = random_map(rng);
    const Complex before = cross_ratio(p[0], p[1], p[2], p[3]).affine_value();
    const Complex after = cross_ratio(apply(m, p[0]), apply(m, p[1]), apply(m, p[2]), apply(m, p[3])).affine_value();
    CHECK(std::abs(after - before) <= 1e-9 * std::max(1.0, std::abs(before)));
    // Independent oracle: (d - a)(b - c) / ((d - c)(b - a)).
    const Complex a = p[0].affine_value(), b = p[1].affine_value(), c = p[2].affine_value(), d = p[3].affine_value();
    const Complex want = (d - a) * (b - c) / ((d - c) * (b - a));
    CHECK(std::abs(before - want) <= 1e-9 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("disc images") {
  const Disc unit = Disc::euclidean(0.0, 1.0);
  const Disc same = disc_image(ProjectiveMap::identity(2), unit);
  CHECK(same_circle(same, unit));

  const Disc doubled = disc_image(m2(2, 0, 0, 1), unit);
  CHECK(same_circle(doubled, Disc::euclidean(0.0, 2.0)));
  for (Complex b : {Complex(2, 0), Complex(-2, 0), Complex(0, 2), Complex(0, -2)})
    CHECK(on_circle(doubled, b));
  CHECK(doubled.contains(SpherePoint::affine(1.9)));
  CHECK_FALSE(doubled.contains(SpherePoint::affine(2.1)));

  const Disc inverted = disc_image(m2(0, 1, 1, 0), Disc::euclidean(0.0, 0.5));
  CHECK(inverted.witness().is_infinity());
  CHECK(inverted.contains(SpherePoint::infinity()));
  CHECK(inverted.contains(SpherePoint::affine(3.0)));
  CHECK_FALSE(inverted.contains(SpherePoint::affine(1.0)));

  CHECK_THROWS_AS(Disc(SpherePoint::affine(1.0), SpherePoint::affine(1.0), SpherePoint::affine(-1.0),
                       SpherePoint::affine(0.0)),
                  NumericalError);
  CHECK_THROWS_AS(Disc(SpherePoint::affine(1.0), SpherePoint::affine({0, 1}), SpherePoint::affine(-1.0),
                       SpherePoint::affine({0, -1})),
                  NumericalError);
}

TEST_CASE("disc image is functorial and matches the circle oracle") {
  Rng rng(23);
  for (int k = 0; k < 100; ++k) {
    const Complex c = random_complex(rng);
    const double r = 0.1 + rng.uniform();
    const Disc d = Disc::euclidean(c, r);
    const ProjectiveMap m1 = random_map(rng), m2_ = random_map(rng);
    const Disc a = disc_image(m2_, disc_image(m1, d));
    const Disc b = disc_image(compose(m2_, m1), d);
    CHECK(same_circle(a, b, 1e-8));
    CHECK(a.contains(b.witness()));
    for (int j = 0; j < 10; ++j) {
      const Complex z = c + std::polar(r * std::sqrt(rng.uniform()), rng.uniform(0.0, 2.0 * kPi));
      CHECK(b.contains(apply(compose(m2_, m1), SpherePoint::affine(z))));
    }
  }
}

TEST_CASE("disc diameter: closed form against 720-point boundary sampling") {
  Rng rng(31);
  for (int k = 0; k < 100; ++k) {
    const EuclideanDisc e{random_complex(rng), std::exp(rng.uniform(-6.0, 2.0)), false};
    const EuclideanDisc outside{e.c, e.r, true};
    CHECK(disc_diameter(e.disc()) == doctest::Approx(sampled_diameter(e, 720)).epsilon(1e-4));
    CHECK(disc_diameter(e.disc().complement()) == doctest::Approx(sampled_diameter(outside, 720)).epsilon(1e-4));
  }
  // A hemisphere has the maximal diameter.
  CHECK(disc_diameter(Disc::euclidean(0.0, 1.0)) == doctest::Approx(kPi / 2));
  CHECK(disc_diameter(Disc::euclidean(0.0, 0.5).complement()) == doctest::Approx(kPi / 2));
}

TEST_CASE("disc diameter: isometry invariance and contraction") {
  Rng rng(37);
  const Disc d = Disc::euclidean({0.3, -0.2}, 0.4);
  for (int k = 0; k < 20; ++k)
    CHECK(disc_diameter(disc_image(random_unitary(rng), d)) == doctest::Approx(disc_diameter(d)).epsilon(1e-9));
  // g^n(D) for a hyperbolic g with D away from the repelling point.
  const ProjectiveMap g = m2(3, 0, 0, 1.0 / 3.0);
  Disc cur = Disc::euclidean(1.0, 0.5);
  double prev = disc_diameter(cur);
  for (int n = 1; n <= 10; ++n) {
    cur = disc_image(g, cur);
    const double now = disc_diameter(cur);
    CHECK(now < prev);
    prev = now;
  }
  CHECK(prev < 1e-8);
}

TEST_CASE("tiny discs keep their precision") {
  const EuclideanDisc e{{0.2, 0.1}, 1e-10, false};
  const Disc d = e.disc();
  CHECK(disc_diameter(d) == doctest::Approx(sampled_diameter(e, 720)).epsilon(1e-4));
  CHECK(disc_gap(d, Disc::euclidean({0.2, 0.1 + 1e-8}, 1e-10)) > 0.0);
}

TEST_CASE("disc gap and nesting margin") {
  const Disc a = Disc::euclidean(-1.0, 0.5), b = Disc::euclidean(1.0, 0.5);
  CHECK(disc_gap(a, b) > 0.0);
  CHECK(disc_gap(a, Disc::euclidean(-0.8, 0.5)) < 0.0);
  CHECK(nesting_margin(Disc::euclidean(-1.0, 0.2), a) > 0.0);
  CHECK(nesting_margin(a, Disc::euclidean(-1.0, 0.2)) < 0.0);
  CHECK(nesting_margin(Disc::euclidean(-1.0, 0.2), b) < 0.0);
  // Exterior discs containing infinity.
  CHECK(nesting_margin(Disc::euclidean_exterior(0.0, 3.0), Disc::euclidean_exterior(0.0, 2.0)) > 0.0);
  CHECK(disc_gap(Disc::euclidean(0.0, 1.0), Disc::euclidean_exterior(0.0, 2.0)) > 0.0);
}
