#include "riccati/srb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "riccati/canonical.hpp"
#include "riccati/parallel.hpp"

namespace riccati::srb {

namespace {

constexpr double kPi = std::numbers::pi;

double hyperbolic_distance(Complex z, Complex w) {
  return std::acosh(1.0 + std::norm(z - w) / (2.0 * z.imag() * w.imag()));
}

// Distance from z to the nearest polygon side.
double distance_to_boundary(const SurfaceGroup& G, Complex z) {
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < static_cast<int>(G.sides().size()); ++j) {
    const Complex w = G.side_chart(j).apply(z);
    best = std::min(best, std::asinh(std::abs(w.real()) / w.imag()));
  }
  return best;
}

}  // namespace

Observable distance_to_section(std::string name, Section section, Window window) {
  return {std::move(name), [section = std::move(section), window](const SurfaceGroup& G,
                                                                  const UnitTangent& v,
                                                                  const FiberPoint& w) {
            if (!window.contains(G, v)) return 0.0;
            return fubini_study_distance(w, FiberPoint(section(v)));
          }};
}

Observable fiber_cap_indicator(std::string name, SpherePoint centre, double radius, Window window) {
  return {std::move(name), [centre, radius, window](const SurfaceGroup& G, const UnitTangent& v,
                                                    const FiberPoint& w) {
            if (!window.contains(G, v)) return 0.0;
            return fubini_study_distance(w, FiberPoint(centre)) < radius ? 1.0 : 0.0;
          }};
}

Observable base_bump(std::string name, Complex centre, double radius, Window window) {
  return {std::move(name), [centre, radius, window](const SurfaceGroup& G, const UnitTangent& v,
                                                    const FiberPoint&) {
            if (!window.contains(G, v)) return 0.0;
            const double r = hyperbolic_distance(v.base_point(), centre) / radius;
            return r < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
          }};
}

Observable constant_one(Window window) {
  return {"one", [window](const SurfaceGroup& G, const UnitTangent& v, const FiberPoint&) {
            return window.contains(G, v) ? 1.0 : 0.0;
          }};
}

std::vector<Observable> shipped_observables(const SurfaceGroup& G) {
  const double r = 0.9 * distance_to_boundary(G, G.base_point());
  return {distance_to_section("fs_to_expanding_section", canonical::expanding_section),
          fiber_cap_indicator("fiber_cap_unit_disc", SpherePoint::affine(0.0), kPi / 4.0),
          base_bump("base_bump", G.base_point(), r)};
}

FiberPoint random_fiber_point(int n, Rng& rng) {
  CVector x(n);
  for (int i = 0; i < n; ++i) x(i) = Complex(rng.normal(), rng.normal());
  return FiberPoint(x);
}

// ---------------------------------------------------------------------------

namespace {

// One step of the foliated flow; returns false on cusp capture or vertex hit.
bool advance(const Representation& rho, const SurfaceGroup& G, UnitTangent& v, FiberPoint& w,
             double dt, const FlowOptions& flow) {
  try {
    const FlowResult r = flow_on_surface(v, dt, G, flow);
    if (!r.word.empty()) w = apply(evaluate_word(rho, r.word), w);
    v = r.v;
    return true;
  } catch (const CuspCapture&) {
    return false;
  } catch (const VertexHit&) {
    return false;
  }
}

}  // namespace

std::vector<TimeAverage> time_averages(const Representation& rho, const SurfaceGroup& G,
                                       const UnitTangent& v0, const FiberPoint& w0,
                                       const std::vector<Observable>& hs, double T,
                                       const OrbitOptions& opts) {
  if (!(opts.dt > 0.0) || !(T >= opts.dt)) throw std::invalid_argument("time_average: need T >= dt > 0");
  const auto steps = static_cast<std::int64_t>(std::llround(T / opts.dt));
  const std::int64_t late_start = steps / 2;
  const int nb = std::max(1, opts.late_blocks);
  const std::size_t m = hs.size();

  std::vector<double> total(m, 0.0);
  std::vector<std::vector<double>> blocks(m, std::vector<double>(nb, 0.0));
  std::vector<std::int64_t> block_count(nb, 0);
  const double dt = opts.backward ? -opts.dt : opts.dt;

  UnitTangent v = v0;
  FiberPoint w = w0;
  std::int64_t done = 0;
  bool captured = false;
  for (std::int64_t k = 0; k < steps; ++k) {
    const int b = k >= late_start
                      ? static_cast<int>((k - late_start) * nb / std::max<std::int64_t>(1, steps - late_start))
                      : -1;
    for (std::size_t i = 0; i < m; ++i) {
      const double h = hs[i](G, v, w);
      total[i] += h;
      if (b >= 0) blocks[i][b] += h;
    }
    if (b >= 0) ++block_count[b];
    ++done;
    if (k + 1 < steps && !advance(rho, G, v, w, dt, opts.flow)) {
      captured = true;
      break;
    }
  }

  std::vector<TimeAverage> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    TimeAverage& a = out[i];
    a.captured = captured;
    a.time_covered = static_cast<double>(done) * opts.dt;
    a.average = total[i] / static_cast<double>(done);
    std::vector<double> means;
    for (int b = 0; b < nb; ++b)
      if (block_count[b] > 0) means.push_back(blocks[i][b] / static_cast<double>(block_count[b]));
    if (means.empty()) continue;
    double late_sum = 0.0;
    std::int64_t late_n = 0;
    for (int b = 0; b < nb; ++b) {
      late_sum += blocks[i][b];
      late_n += block_count[b];
    }
    a.late_average = late_sum / static_cast<double>(late_n);
    if (means.size() > 1) {
      double mu = 0.0, var = 0.0;
      for (double x : means) mu += x / static_cast<double>(means.size());
      for (double x : means) var += (x - mu) * (x - mu);
      var /= static_cast<double>(means.size() - 1);
      a.late_stderr = std::sqrt(var / static_cast<double>(means.size()));
    }
  }
  return out;
}

TimeAverage time_average(const Representation& rho, const SurfaceGroup& G, const UnitTangent& v,
                         const FiberPoint& w, const Observable& h, double T,
                         const OrbitOptions& opts) {
  return time_averages(rho, G, v, w, {h}, T, opts).front();
}

namespace {

struct OrbitRun {
  std::vector<TimeAverage> averages;
  int resampled = 0;
};

constexpr int kMaxResamples = 50;

}  // namespace

BasinReport basin_test(const Representation& rho, const SurfaceGroup& G,
                       const std::vector<Observable>& hs, double T, int n_orbits,
                       std::uint64_t seed, const OrbitOptions& opts, bool parallel) {
  if (n_orbits < 2) throw std::invalid_argument("basin_test: need at least 2 orbits");
  auto run = [&](std::int64_t i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    OrbitRun out;
    while (true) {
      const UnitTangent v = liouville_sample(G, rng);
      const FiberPoint w = random_fiber_point(rho.dim(), rng);
      out.averages = time_averages(rho, G, v, w, hs, T, opts);
      if (!out.averages.front().captured) return out;
      if (++out.resampled > kMaxResamples) throw NumericalError("basin_test: orbit keeps escaping into a cusp");
    }
  };
  const std::vector<OrbitRun> runs = parallel ? parallel_map(n_orbits, run) : serial_map(n_orbits, run);

  BasinReport report;
  report.single_statistics = true;
  for (const auto& r : runs) report.resampled += r.resampled;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    ObservableVerdict ov;
    ov.name = hs[i].name;
    for (const auto& r : runs) {
      ov.orbit_averages.push_back(r.averages[i].late_average);
      ov.orbit_stderrs.push_back(r.averages[i].late_stderr);
    }
    const double n = static_cast<double>(runs.size());
    for (double x : ov.orbit_averages) ov.mean += x / n;
    for (double x : ov.orbit_averages) ov.across += (x - ov.mean) * (x - ov.mean);
    ov.across = std::sqrt(ov.across / (n - 1.0));
    for (double s : ov.orbit_stderrs) ov.within += s / n;
    ov.single = ov.across < 3.0 * ov.within + kDispersionFloor;
    report.single_statistics = report.single_statistics && ov.single;
    report.observables.push_back(std::move(ov));
  }
  return report;
}

// ---------------------------------------------------------------------------

Grid Grid::for_surface(const SurfaceGroup& G) {
  Grid g;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : G.sides())
    for (double x : {s.p, s.q})
      if (std::isfinite(x)) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
  if (lo < hi) {
    g.x_min = lo;
    g.x_max = hi;
  }
  return g;
}

int Grid::fiber_cell(const SpherePoint& p) const {
  const Eigen::Vector3d x = to_unit_sphere(p);
  const double polar = std::atan2(std::hypot(x.x(), x.y()), x.z());
  const int ip = std::clamp(static_cast<int>(polar / kPi * n_polar), 0, n_polar - 1);
  // Azimuth is meaningless at the poles; the two polar caps are single cells.
  if (ip == 0 || ip == n_polar - 1) return ip * n_azimuth;
  const double width = 2.0 * kPi / n_azimuth;
  double phi = std::atan2(x.y(), x.x()) + 0.5 * width;
  phi = std::fmod(phi + 2.0 * kPi, 2.0 * kPi);
  const int ia = std::clamp(static_cast<int>(phi / width), 0, n_azimuth - 1);
  return ip * n_azimuth + ia;
}

int Grid::cell(const UnitTangent& v, const SpherePoint& w) const {
  const Complex z = v.base_point();
  const int ix = std::clamp(static_cast<int>((z.real() - x_min) / (x_max - x_min) * nx), 0, nx - 1);
  const int iy = std::clamp(static_cast<int>(z.imag() / (1.0 + z.imag()) * ny), 0, ny - 1);
  const SpherePoint p =
      chart == FiberChart::fixed ? w : canonical::trivialization_coordinate(v, w);
  return (ix * ny + iy) * fiber_cells() + fiber_cell(p);
}

EmpiricalMeasure EmpiricalMeasure::from_counts(const Grid& g, const std::vector<double>& counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  if (!(total > 0.0)) throw std::invalid_argument("empirical measure: no mass");
  EmpiricalMeasure m{g, counts};
  for (double& w : m.weights) w /= total;
  return m;
}

std::vector<double> EmpiricalMeasure::fiber_marginal() const {
  std::vector<double> out(grid.fiber_cells(), 0.0);
  for (std::size_t i = 0; i < weights.size(); ++i) out[i % out.size()] += weights[i];
  return out;
}

double tv_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  if (a.weights.size() != b.weights.size()) throw std::invalid_argument("tv_distance: grids differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.weights.size(); ++i) s += std::abs(a.weights[i] - b.weights[i]);
  return 0.5 * s;
}

namespace {

constexpr std::int64_t kSampleBlock = 1024;

EmpiricalMeasure merge_cells(const Grid& grid, const std::vector<std::vector<int>>& parts) {
  std::vector<double> counts(grid.cells(), 0.0);
  for (const auto& part : parts)
    for (int c : part) counts[c] += 1.0;
  return EmpiricalMeasure::from_counts(grid, counts);
}

}  // namespace

EmpiricalMeasure pushforward_measure(const SurfaceGroup& G, const Section& section,
                                     std::int64_t n_samples, const Grid& grid, std::uint64_t seed,
                                     bool parallel) {
  const std::int64_t blocks = (n_samples + kSampleBlock - 1) / kSampleBlock;
  auto run = [&](std::int64_t b) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
    const std::int64_t count = std::min(kSampleBlock, n_samples - b * kSampleBlock);
    std::vector<int> cells;
    cells.reserve(static_cast<std::size_t>(count));
    for (std::int64_t k = 0; k < count; ++k) {
      const UnitTangent v = liouville_sample(G, rng);
      cells.push_back(grid.cell(v, section(v)));
    }
    return cells;
  };
  return merge_cells(grid, parallel ? parallel_map(blocks, run) : serial_map(blocks, run));
}

EmpiricalMeasure occupation_measure(const Representation& rho, const SurfaceGroup& G,
                                    int n_orbits, double t_begin, double t_end, const Grid& grid,
                                    std::uint64_t seed, const OrbitOptions& opts, bool parallel) {
  if (rho.dim() != 2) throw std::invalid_argument("occupation_measure: histograms need n = 2");
  if (!(t_end > t_begin) || t_begin < 0.0) throw std::invalid_argument("occupation_measure: bad window");
  const auto k0 = static_cast<std::int64_t>(std::llround(t_begin / opts.dt));
  const auto k1 = static_cast<std::int64_t>(std::llround(t_end / opts.dt));
  const double dt = opts.backward ? -opts.dt : opts.dt;
  auto run = [&](std::int64_t i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    for (int attempt = 0; attempt <= kMaxResamples; ++attempt) {
      UnitTangent v = liouville_sample(G, rng);
      FiberPoint w = random_fiber_point(2, rng);
      std::vector<int> cells;
      cells.reserve(static_cast<std::size_t>(k1 - k0));
      bool ok = true;
      for (std::int64_t k = 0; k < k1 && ok; ++k) {
        if (k >= k0) cells.push_back(grid.cell(v, w.as_sphere_point()));
        if (k + 1 < k1) ok = advance(rho, G, v, w, dt, opts.flow);
      }
      if (ok) return cells;
    }
    throw NumericalError("occupation_measure: orbit keeps escaping into a cusp");
  };
  return merge_cells(grid, parallel ? parallel_map(n_orbits, run) : serial_map(n_orbits, run));
}

}  // namespace riccati::srb
