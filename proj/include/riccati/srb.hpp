// Orbit statistics of the foliated geodesic flow: time averages of fiber
// observables, the basin test, and histograms comparing orbit occupation
// with the pushforward of Liouville measure by a section.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "riccati/cocycle.hpp"
#include "riccati/moebius.hpp"
#include "riccati/random.hpp"
#include "riccati/surface.hpp"

namespace riccati::srb {

/// Compact part of the surface: the polygon below height `max_height` in
/// every cusp chart.
struct Window {
  double max_height = 10.0;
  bool contains(const SurfaceGroup& G, const UnitTangent& v) const {
    return G.max_cusp_height(v.base_point()) <= max_height;
  }
};

using Section = std::function<SpherePoint(const UnitTangent&)>;

struct Observable {
  std::string name;
  std::function<double(const SurfaceGroup&, const UnitTangent&, const FiberPoint&)> fn;

  double operator()(const SurfaceGroup& G, const UnitTangent& v, const FiberPoint& w) const {
    return fn(G, v, w);
  }
};

/// Fubini-Study distance from the fiber point to section(v), inside the window.
Observable distance_to_section(std::string name, Section section, Window window = {});
/// Indicator of the fiber point lying within Fubini-Study distance `radius`
/// of `centre`, inside the window.
Observable fiber_cap_indicator(std::string name, SpherePoint centre, double radius,
                               Window window = {});
/// Smooth compactly supported bump of hyperbolic radius `radius` around `centre`.
Observable base_bump(std::string name, Complex centre, double radius, Window window = {});
Observable constant_one(Window window = {});

/// Distance to the canonical expanding section, the fiber cap {|w| < 1},
/// and a bump at the base point.
std::vector<Observable> shipped_observables(const SurfaceGroup& G);

/// Haar-random point of CP^{n-1}.
FiberPoint random_fiber_point(int n, Rng& rng);

// ---------------------------------------------------------------------------

struct OrbitOptions {
  double dt = 0.1;
  bool backward = false;  // flow in negative time
  int late_blocks = 10;   // blocks of the late window [T/2, T]
  FlowOptions flow;
};

struct TimeAverage {
  double average = 0.0;        // (1/T) sum h(state at k dt) dt
  double late_average = 0.0;   // same over [T/2, T]
  double late_stderr = 0.0;    // standard error of late_average from block means
  double time_covered = 0.0;   // < T when the orbit was captured by a cusp
  bool captured = false;
};

/// Time averages of several observables along one foliated orbit.
std::vector<TimeAverage> time_averages(const Representation& rho, const SurfaceGroup& G,
                                       const UnitTangent& v, const FiberPoint& w,
                                       const std::vector<Observable>& hs, double T,
                                       const OrbitOptions& opts = {});

TimeAverage time_average(const Representation& rho, const SurfaceGroup& G, const UnitTangent& v,
                         const FiberPoint& w, const Observable& h, double T,
                         const OrbitOptions& opts = {});

struct ObservableVerdict {
  std::string name;
  double mean = 0.0;
  double across = 0.0;  // standard deviation of late averages over orbits
  double within = 0.0;  // mean late-window standard error
  bool single = false;  // across < 3 within + floor
  std::vector<double> orbit_averages;
  std::vector<double> orbit_stderrs;
};

struct BasinReport {
  std::vector<ObservableVerdict> observables;
  bool single_statistics = false;
  int resampled = 0;  // orbits redrawn after cusp capture
};

inline constexpr double kDispersionFloor = 1e-9;

BasinReport basin_test(const Representation& rho, const SurfaceGroup& G,
                       const std::vector<Observable>& hs, double T, int n_orbits,
                       std::uint64_t seed, const OrbitOptions& opts = {}, bool parallel = true);

// ---------------------------------------------------------------------------

enum class FiberChart {
  fixed,        // the fiber coordinate itself
  trivialized,  // canonical trivialisation coordinate over the base vector
};

struct Grid {
  int nx = 32, ny = 32;           // x linear, y through y / (1 + y)
  int n_polar = 8, n_azimuth = 8;  // fiber cells on the unit sphere; the two
                                   // polar caps are not split by azimuth
  double x_min = -1.0, x_max = 1.0;
  FiberChart chart = FiberChart::fixed;

  static Grid for_surface(const SurfaceGroup& G);
  int cells() const { return nx * ny * n_polar * n_azimuth; }
  int fiber_cells() const { return n_polar * n_azimuth; }
  int cell(const UnitTangent& v, const SpherePoint& w) const;
  int fiber_cell(const SpherePoint& p) const;
};

struct EmpiricalMeasure {
  Grid grid;
  std::vector<double> weights;  // sums to 1

  static EmpiricalMeasure from_counts(const Grid& g, const std::vector<double>& counts);
  std::vector<double> fiber_marginal() const;
};

double tv_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

/// Histogram of (v, section(v)) for Liouville samples v.
EmpiricalMeasure pushforward_measure(const SurfaceGroup& G, const Section& section,
                                     std::int64_t n_samples, const Grid& grid, std::uint64_t seed,
                                     bool parallel = true);

/// Occupation histogram of n_orbits foliated orbits over [t_begin, t_end]
/// (negative times when opts.backward).
EmpiricalMeasure occupation_measure(const Representation& rho, const SurfaceGroup& G,
                                    int n_orbits, double t_begin, double t_end, const Grid& grid,
                                    std::uint64_t seed, const OrbitOptions& opts = {},
                                    bool parallel = true);

}  // namespace riccati::srb
