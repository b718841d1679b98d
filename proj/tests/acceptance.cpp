// Acceptance run: one PASS/FAIL line per criterion with its wall time and
// budget. Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "riccati/canonical.hpp"
#include "riccati/cocycle.hpp"
#include "riccati/cusp.hpp"
#include "riccati/parallel.hpp"
#include "riccati/presets.hpp"
#include "riccati/schottky.hpp"
#include "riccati/srb.hpp"

using namespace riccati;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

const SurfaceGroup& sphere() {
  static const SurfaceGroup g = load_surface("thrice-punctured-sphere");
  return g;
}
const SurfaceGroup& torus() {
  static const SurfaceGroup g = load_surface("once-punctured-torus");
  return g;
}
std::vector<const SurfaceGroup*> surfaces() { return {&sphere(), &torus()}; }

const std::vector<const char*> kRepresentations = {"canonical",        "canonical-sphere", "canonical-torus",
                                                   "unitary-diagonal", "diagonal-test",    "hyperbolic-cusp-sphere",
                                                   "schottky-torus"};

// Draws Liouville samples from a per-index stream until body runs without a
// cusp capture.
template <class F>
auto generic_sample(const SurfaceGroup& G, std::uint64_t seed, F&& body) {
  Rng rng(seed);
  while (true) {
    const UnitTangent v = liouville_sample(G, rng);
    try {
      return body(v, rng);
    } catch (const CuspCapture&) {
    }
  }
}

CocycleValue product_oracle(const Representation& rho, const Word& w) {
  CocycleValue out;
  out.matrix = CMatrix::Identity(rho.dim(), rho.dim());
  for (int l : w.letters()) {
    const CMatrix& g = rho.images()[std::abs(l) - 1];
    out.matrix = (l > 0 ? g : CMatrix(g.inverse())) * out.matrix;
    const double s = out.matrix.norm();
    out.matrix /= s;
    out.log_scale += std::log(s);
  }
  return out;
}

double relative_oracle(const CocycleValue& a, const CocycleValue& b) {
  return (a.matrix * std::exp(a.log_scale - b.log_scale) - b.matrix).norm() / b.matrix.norm();
}

// 1 -----------------------------------------------------------------------
void cocycle_identity(Outcome& o) {
  double worst = 0.0;
  int pairs = 0;
  for (const SurfaceGroup* G : surfaces()) {
    for (const char* name : kRepresentations) {
      const Representation rho = load_representation(name, *G);
      const auto errs = parallel_map(100, [&](std::int64_t i) {
        return generic_sample(*G, derive_seed(101, i), [&](const UnitTangent& v, Rng& rng) {
          const double t1 = rng.uniform(0, 10), t2 = rng.uniform(0, 10);
          const FlowResult first = flow_on_surface(v, t1, *G);
          const CocycleValue lhs = cocycle_along(rho, v, t1 + t2, *G);
          const CocycleValue rhs = cocycle_along(rho, first.v, t2, *G) * cocycle_along(rho, v, t1, *G);
          const CocycleValue ref = product_oracle(rho, flow_on_surface(v, t1 + t2, *G).word);
          return std::max(relative_oracle(rhs, lhs), relative_oracle(lhs, ref));
        });
      });
      for (double e : errs) worst = std::max(worst, e);
      ++pairs;
    }
  }
  o.detail << pairs << " surface/representation pairs x 100 triples, max relative error " << worst;
  o.require(worst < 1e-8, "relative error < 1e-8");
}

// 2 -----------------------------------------------------------------------
void contraction_law(Outcome& o) {
  double worst = 0.0;
  for (const SurfaceGroup* G : surfaces()) {
    const auto errs = parallel_map(100, [&](std::int64_t i) {
      return generic_sample(*G, derive_seed(202, i), [&](const UnitTangent& v, Rng& rng) {
        const SpherePoint w = SpherePoint::affine(test::random_complex(rng, 3.0));
        double e = 0.0;
        for (double t : {1.0, 5.0, 10.0}) e = std::max(e, canonical::contraction_check(v, w, t, *G).error);
        return e;
      });
    });
    for (double e : errs) worst = std::max(worst, e);
  }
  o.detail << "2 surfaces x 100 (v, w), t in {1, 5, 10}, max |c_t - e^-t c_0| = " << worst;
  o.require(worst < 1e-6, "error < 1e-6");
}

// 3 -----------------------------------------------------------------------
void canonical_lyapunov(Outcome& o) {
  for (const SurfaceGroup* G : surfaces()) {
    const LyapunovEstimate est = lyapunov_spectrum(Representation::canonical(*G), *G,
                                                   UnitTangent::at(G->base_point(), 0.9), 1e4, 1.0);
    const double l1 = est.exponents[0], l2 = est.exponents[1];
    const double se = std::hypot(est.standard_errors[0], est.standard_errors[1]);
    o.detail << G->name() << ": lambda = (" << l1 << ", " << l2 << "), |l1 + l2| = " << std::abs(l1 + l2)
             << " vs 3 se = " << 3 * se << ", l1 - l2 = " << l1 - l2 << "; ";
    o.require(std::abs(l1 + l2) <= 3 * se, G->name() + " symmetry within 3 s.e.");
    o.require(std::abs(l1 - l2 - 1.0) <= 0.02, G->name() + " gap 1 +- 0.02");
  }
}

// 4 -----------------------------------------------------------------------
void section_estimator(Outcome& o) {
  double worst = 0.0;
  for (const SurfaceGroup* G : surfaces()) {
    const Representation rho = Representation::canonical(*G);
    const auto errs = parallel_map(100, [&](std::int64_t i) {
      return generic_sample(*G, derive_seed(404, i), [&](const UnitTangent& v, Rng&) {
        const SectionEstimate top = top_section_estimate(rho, *G, v, 30.0);
        const SectionEstimate bottom = bottom_section_estimate(rho, *G, v, 30.0);
        return std::max(fubini_study_distance(top.point, FiberPoint(canonical::expanding_section(v))),
                        fubini_study_distance(bottom.point, FiberPoint(canonical::contracting_section(v))));
      });
    });
    for (double e : errs) worst = std::max(worst, e);
  }
  o.detail << "2 surfaces x 100 samples, T = 30, max Fubini-Study error " << worst;
  o.require(worst < 1e-6, "error < 1e-6");
}

// 5 -----------------------------------------------------------------------
void srb_statistics(Outcome& o) {
  const SurfaceGroup& G = sphere();
  const Representation rho = Representation::canonical(G);
  const srb::BasinReport r = srb::basin_test(rho, G, srb::shipped_observables(G), 200.0, 200, 505);
  for (const auto& v : r.observables) {
    o.detail << v.name << " across " << v.across << " within " << v.within << "; ";
    o.require(v.single, v.name + " single statistics");
  }
  srb::Grid grid = srb::Grid::for_surface(G);
  grid.chart = srb::FiberChart::trivialized;
  srb::OrbitOptions back;
  back.backward = true;
  const auto fwd = srb::occupation_measure(rho, G, 200, 100.0, 200.0, grid, 506);
  const auto bwd = srb::occupation_measure(rho, G, 200, 100.0, 200.0, grid, 506, back);
  const double tv = srb::tv_distance(fwd, bwd);
  o.detail << "TV(forward, backward) = " << tv << ", " << r.resampled << " orbits resampled";
  o.require(tv > 0.5, "forward/backward TV > 0.5");
}

// 6 -----------------------------------------------------------------------
void schottky_sections(Outcome& o) {
  const PingPongSystem sys = load_schottky("schottky-diag3");
  const PingPongCertificate cert = certify_ping_pong(sys);
  o.detail << "certificate gap " << cert.min_gap << " margin " << cert.min_nesting_margin << "; ";
  o.require(cert.certified, "preset certified");

  int misses = 0, shift_violations = 0;
  for (int i = 0; i < 100; ++i) {
    Rng rng(derive_seed(606, i));
    const ReducedBiWord a = random_biword(sys.rank(), 64, rng);
    const SectionPoint pa = s_plus(sys, a, 1e-9, 64), ma = s_minus(sys, a, 1e-9, 64);
    misses += !pa.reached + !ma.reached;
    const ReducedBiWord b = a.shifted();
    const SectionPoint pb = s_plus(sys, b, 1e-9, 64), mb = s_minus(sys, b, 1e-9, 64);
    const ProjectiveMap a0 = sys.letter_map(a.future.front());
    const auto sv = Eigen::JacobiSVD<CMatrix>(a0.matrix()).singularValues();
    const double lip = (sv(0) * sv(0)) / (sv(1) * sv(1));
    shift_violations += fubini_study_distance(pb.point, apply(a0, pa.point)) > pb.bound + lip * pa.bound + 1e-12;
    shift_violations += fubini_study_distance(mb.point, apply(a0, ma.point)) > mb.bound + lip * ma.bound + 1e-12;
  }
  o.detail << "100 bi-words: " << misses << " windows above 1e-9, " << shift_violations << " shift violations; ";
  o.require(misses == 0, "diameters < 1e-9 within 64 letters");
  o.require(shift_violations == 0, "shift equivariance");

  const SurfaceGroup& G = torus();
  const Representation rho = load_representation("schottky-torus", G);
  const auto errs = parallel_map(100, [&](std::int64_t i) {
    return generic_sample(G, derive_seed(607, i), [&](const UnitTangent& v, Rng&) {
      const GeodesicSections s = schottky_section_for_geodesic(sys, rho, G, v, 64);
      const SectionEstimate top = top_section_estimate(rho, G, v, 30.0);
      const SectionEstimate bottom = bottom_section_estimate(rho, G, v, 30.0);
      return std::max(fubini_study_distance(FiberPoint(s.plus.point), top.point),
                      fubini_study_distance(FiberPoint(s.minus.point), bottom.point));
    });
  });
  const double worst = *std::max_element(errs.begin(), errs.end());
  o.detail << "Schottky vs estimator on 100 Liouville samples: max " << worst;
  o.require(worst < 1e-5, "Schottky section vs estimator < 1e-5");
}

// 7 -----------------------------------------------------------------------
void cusp_dichotomy(Outcome& o) {
  const auto par = cusp::integrability_dichotomy(cusp::MonodromySpec::parabolic(2, 0.0));
  const double gap = std::abs(par.values.back() - par.values[par.values.size() - 2]);
  o.detail << "parabolic |I(2^-16) - I(2^-15)| = " << gap << "; ";
  o.require(par.eps.back() == std::ldexp(1.0, -16) && par.eps[par.eps.size() - 2] == std::ldexp(1.0, -15),
            "ladder ends at 2^-15, 2^-16");
  o.require(gap < 1e-3, "parabolic Cauchy gap < 1e-3");
  o.require(!par.divergent, "parabolic verdict integrable");

  const auto hyp = cusp::integrability_dichotomy(cusp::MonodromySpec::hyperbolic(2, 3.0));
  o.detail << "hyperbolic lambda=3 slope " << hyp.slope << " R^2 " << hyp.r2 << "; ";
  o.require(hyp.r2 > 0.99 && hyp.slope > 0.0, "hyperbolic affine fit");
  o.require(hyp.divergent, "hyperbolic verdict not integrable");

  int mismatches = 0, checked = 0;
  for (const SurfaceGroup* G : surfaces()) {
    for (const char* name : kRepresentations) {
      const Representation rho = load_representation(name, *G);
      bool integrable = true;
      for (const CuspVertex& c : G->cusps()) {
        const auto spec = cusp::spec_from_monodromy(evaluate_word(rho, c.peripheral).matrix);
        integrable = integrable && !cusp::integrability_dichotomy(spec).divergent;
      }
      mismatches += integrable != check_integrability(rho, *G).integrable;
      ++checked;
    }
  }
  o.detail << checked << " preset pairs, " << mismatches << " verdict mismatches; ";
  o.require(mismatches == 0, "verdicts match check_integrability");

  Rng rng(707);
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const double eta = (rng.uniform() < 0.5 ? -1 : 1) * rng.uniform(1e-6, kPi / 2);
    const CuspExcursion e = cusp_excursion_parameters(UnitTangent::at({rng.uniform(-0.5, 0.5), 1.0}, -eta));
    const double centre = -2 * std::log(std::abs(std::sin(eta))), half = 2 * std::cos(eta);
    violations += !(e.time >= centre - half - 1e-12 && e.time <= centre + half + 1e-12);
  }
  o.detail << "excursion sandwich: " << violations << " violations in 1e4";
  o.require(violations == 0, "excursion time sandwich");
}

// 8 -----------------------------------------------------------------------
void property_suites(Outcome& o) {
  Rng rng(808);
  int algebra = 0, cross = 0, triangle = 0;
  for (int i = 0; i < 2000; ++i) {
    const ProjectiveMap a = test::random_map(rng), b = test::random_map(rng), c = test::random_map(rng);
    algebra += !projectively_equal(compose(compose(a, b), c), compose(a, compose(b, c)), 1e-9);
    algebra += !projectively_equal(compose(a, inverse(a)), ProjectiveMap::identity(2), 1e-9);
    const SpherePoint z = SpherePoint::affine(test::random_complex(rng));
    algebra += fubini_study_distance(apply(compose(a, b), z), apply(a, apply(b, z))) > 1e-9;

    SpherePoint p[4];
    for (auto& q : p) q = SpherePoint::affine(test::random_complex(rng));
    const SpherePoint before = cross_ratio(p[0], p[1], p[2], p[3]);
    const SpherePoint after = cross_ratio(apply(a, p[0]), apply(a, p[1]), apply(a, p[2]), apply(a, p[3]));
    cross += fubini_study_distance(before, after) > 1e-8;
    cross += fubini_study_distance(apply(map_from_three_points(p[0], p[1], p[2]), p[3]), before) > 1e-9;

    const double dxy = fubini_study_distance(p[0], p[1]), dyz = fubini_study_distance(p[1], p[2]),
                 dxz = fubini_study_distance(p[0], p[2]);
    triangle += dxz > dxy + dyz + 1e-12;
    triangle += std::abs(dxy - test::fs_oracle(p[0].affine_value(), p[1].affine_value())) > 1e-12;
  }
  o.detail << "projective algebra " << algebra << ", cross-ratio " << cross << ", triangle " << triangle
           << " violations; ";
  o.require(algebra == 0, "projective algebra");
  o.require(cross == 0, "cross-ratio");
  o.require(triangle == 0, "triangle inequality");

  int unreduced = 0;
  for (const SurfaceGroup* G : surfaces()) {
    const auto bad = parallel_map(1000, [&](std::int64_t i) {
      return generic_sample(*G, derive_seed(809, i), [&](const UnitTangent& v, Rng&) {
        const Word w = itinerary(v, 50, *G);
        bool ok = w.size() == 50;
        for (std::size_t k = 1; k < w.size(); ++k) ok = ok && w[k] != -w[k - 1];
        return ok ? 0 : 1;
      });
    });
    for (int b : bad) unreduced += b;
  }
  o.detail << "itineraries not reduced " << unreduced << "/2000; ";
  o.require(unreduced == 0, "itinerary reducedness");

  const int n = 400000, bins = 16;
  Rng lr(810);
  int above = 0, outside = 0;
  std::vector<int> hist(bins, 0);
  for (int i = 0; i < n; ++i) {
    const UnitTangent v = liouville_sample(sphere(), lr);
    outside += !sphere().contains(v.base_point());
    above += v.base_point().imag() > 1.0;
    ++hist[std::min(bins - 1, static_cast<int>((v.direction_angle() + kPi) / (2 * kPi) * bins))];
  }
  const double p = 1 / kPi, freq = static_cast<double>(above) / n, se = std::sqrt(p * (1 - p) / n);
  double chi2 = 0.0;
  for (int h : hist) chi2 += (h - n / double(bins)) * (h - n / double(bins)) / (n / double(bins));
  o.detail << "Liouville P(y > 1) = " << freq << " (1/pi = " << p << ", " << std::abs(freq - p) / se
           << " s.e.), angle chi2 " << chi2 << ", " << outside << " outside";
  o.require(std::abs(freq - p) < 4 * se, "P(y > 1) = 1/pi");
  o.require(chi2 < 37.70, "angle chi-square (15 dof, 0.999)");
  o.require(outside == 0, "samples inside the polygon");
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<void(Outcome&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "cocycle identity", 10.0, cocycle_identity},
      {2, "canonical contraction law", 30.0, contraction_law},
      {3, "canonical Lyapunov spectrum", 300.0, canonical_lyapunov},
      {4, "section estimator vs exact sections", 60.0, section_estimator},
      {5, "SRB basin and asymmetry", 600.0, srb_statistics},
      {6, "Schottky sections", 120.0, schottky_sections},
      {7, "cusp integrability dichotomy", 60.0, cusp_dichotomy},
      {8, "property suites", 600.0, property_suites},
  };
  std::printf("acceptance run, %d worker(s)\n", worker_count());
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail << " [over budget]";
    }
    failed += !o.pass;
    std::printf("%s  %d. %s (%.2f s of %.0f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs, c.budget_s,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
