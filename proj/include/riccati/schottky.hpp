// Ping-pong systems on the Riemann sphere and their two invariant sections
// over bi-infinite reduced words.
//
// Letter +i is the map f_i, letter -i its inverse. The source disc S(x) is
// A_i for f_i and B_i for f_i^{-1}; the target T(x) is the other one. The
// ping-pong condition is x(E \ S(x)) inside T(x) for every letter.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "riccati/cocycle.hpp"
#include "riccati/moebius.hpp"
#include "riccati/random.hpp"
#include "riccati/surface.hpp"

namespace riccati {

struct PingPongSystem {
  std::string name;
  std::vector<ProjectiveMap> maps;  // 2 x 2
  std::vector<Disc> A;
  std::vector<Disc> B;

  int rank() const { return static_cast<int>(maps.size()); }
  ProjectiveMap letter_map(int letter) const;
  const Disc& source(int letter) const;
  const Disc& target(int letter) const;
};

struct PingPongCertificate {
  bool certified = false;
  double min_gap = 0.0;             // smallest pairwise gap between the 2k discs
  double min_nesting_margin = 0.0;  // smallest margin of x(E \ S(x)) inside T(x)
  double contraction = 0.0;         // largest spherical derivative of x on E \ S(x)
  std::string failure;              // empty when certified
};

/// Strict certificate: positive gaps and nesting margins above `tol`. With
/// `allow_tangency` the discs may touch (margins >= -tol), as for the closed
/// side discs of a cusped Fuchsian polygon, whose parabolic fixed points sit
/// on the common boundary.
PingPongCertificate certify_ping_pong(const PingPongSystem& sys, double tol = 1e-9,
                                      bool allow_tangency = false);

/// Ping-pong system of a surface group: A_i and B_i are the discs beyond the
/// polygon sides paired by generator i (sources of g_i and g_i^{-1}).
PingPongSystem surface_ping_pong(const SurfaceGroup& G);

/// Window of a bi-infinite reduced word: past = (g_{-1}, g_{-2}, ...),
/// future = (g_0, g_1, ...).
struct ReducedBiWord {
  std::vector<int> past;
  std::vector<int> future;

  bool is_reduced() const;
  /// The shifted word b with b_k = a_{k+1}; a_0 moves into the past.
  ReducedBiWord shifted() const;
};

ReducedBiWord random_biword(int rank, int half_length, Rng& rng);

struct SectionPoint {
  SpherePoint point;
  double bound;       // Fubini-Study diameter of the last nested disc
  int window;         // letters used
  bool reached;       // bound below the requested tolerance
};

/// Limit of the nested discs g_{-1} ... g_{-n}(E \ S(g_{-n})).
SectionPoint s_plus(const PingPongSystem& sys, const ReducedBiWord& w, double tol = 1e-9,
                    int max_window = 64);
/// Limit of g_0^{-1} ... g_{n-1}^{-1}(E \ T(g_{n-1})).
SectionPoint s_minus(const PingPongSystem& sys, const ReducedBiWord& w, double tol = 1e-9,
                     int max_window = 64);

/// Nested disc sequence behind s_plus, for diagnostics (diameters of K_1..K_m).
/// Stops early once a disc collapses below the boundary-point resolution.
std::vector<double> nested_diameters(const PingPongSystem& sys, const std::vector<int>& letters);

/// Signed Schottky letter for each surface generator, found by matching the
/// representation's images with the system's maps (or their inverses).
std::vector<int> bind_representation(const PingPongSystem& sys, const Representation& rho,
                                     double tol = 1e-9);

struct GeodesicSections {
  SectionPoint plus;   // from the past itinerary
  SectionPoint minus;  // from the future itinerary
  ReducedBiWord word;  // itinerary mapped to Schottky letters
};

/// Sections over the geodesic through v from its itinerary in both time
/// directions. The holonomy inside the polygon is the identity in the global
/// polygon trivialisation, so no pull-back is applied.
GeodesicSections schottky_section_for_geodesic(const PingPongSystem& sys, const Representation& rho,
                                               const SurfaceGroup& G, const UnitTangent& v,
                                               int n_crossings = 64, double tol = 1e-9,
                                               const FlowOptions& opts = {});

}  // namespace riccati
