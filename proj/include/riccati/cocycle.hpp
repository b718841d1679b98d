// Linear and projective cocycles over the surface geodesic flow.
//
// Convention, fixed here and used everywhere: the deck word of a flow
// segment lists the generators applied at each side crossing, first crossing
// first. The cocycle value of the word (l_1, ..., l_k) is
// rho(l_k) ... rho(l_1), so the fiber is transported by the same group
// elements as the base. Under this convention the closed geodesic on the
// axis of g_1 has itinerary (+1, +1, ...) and its cocycle over one period is
// rho(g_1) itself.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riccati/moebius.hpp"
#include "riccati/surface.hpp"

namespace riccati {

/// A linear lift rho~ of a representation of the surface group into GL(n, C),
/// one image per generator.
class Representation {
 public:
  Representation(std::string name, std::vector<CMatrix> images);

  static Representation trivial(int n, int rank);
  /// The covering representation: each generator sent to itself.
  static Representation canonical(const SurfaceGroup& G);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(images_.size()); }
  /// Image of a signed letter (inverse for negative letters).
  const CMatrix& image(int letter) const;
  const std::vector<CMatrix>& images() const { return images_; }

  /// Same representation with every lift multiplied by c.
  Representation scaled(Complex c) const;
  /// P rho P^{-1}.
  Representation conjugated(const CMatrix& P) const;

 private:
  std::string name_;
  int dim_;
  std::vector<CMatrix> images_;
  std::vector<CMatrix> inverses_;
};

/// e^{log_scale} * matrix, with the largest entry of `matrix` of modulus 1.
struct CocycleValue {
  CMatrix matrix;
  double log_scale = 0.0;

  static CocycleValue identity(int n);
  CMatrix full() const;
  ProjectiveMap projective() const { return ProjectiveMap(matrix); }
};

/// a * b (b acts first).
CocycleValue operator*(const CocycleValue& a, const CocycleValue& b);

/// Relative distance between two cocycle values as linear maps.
double relative_error(const CocycleValue& a, const CocycleValue& b);

CocycleValue evaluate_word(const Representation& rho, const Word& w);

/// Cocycle over the surface flow segment from v of length t.
CocycleValue cocycle_along(const Representation& rho, const UnitTangent& v, double t,
                           const SurfaceGroup& G, const FlowOptions& opts = {});

FiberPoint apply(const CocycleValue& a, const FiberPoint& p);

// ---------------------------------------------------------------------------
// Integrability

struct CuspIntegrability {
  double vertex;
  Word peripheral;
  std::vector<double> moduli;  // eigenvalue moduli, normalised by |det|^{1/n}
  bool unimodular;
};

struct IntegrabilityReport {
  bool integrable = true;
  std::vector<CuspIntegrability> cusps;
};

/// Eigenvalue criterion: integrable iff every peripheral monodromy has all
/// eigenvalue moduli within `tol` of 1 (after removing the lift's scale).
IntegrabilityReport check_integrability(const Representation& rho, const SurfaceGroup& G,
                                        double tol = 1e-6);

// ---------------------------------------------------------------------------
// Lyapunov spectrum

struct LyapunovOptions {
  std::uint64_t seed = 1;
  FlowOptions flow;
  int max_restarts = 1000;
};

struct LyapunovEstimate {
  std::vector<double> exponents;        // descending
  std::vector<double> standard_errors;  // of block means, per exponent
  double T = 0.0;
  double step = 0.0;
  /// Per-block log growth of each frame vector (before sorting), one row per block.
  std::vector<std::vector<double>> block_logs;
  int restarts = 0;
  std::int64_t signed_letters = 0;  // sum of letter signs over the orbit
  IntegrabilityReport integrability;
  /// Set for non-integrable representations: exponents may diverge with T.
  bool advisory = false;

  /// Running averages after each block (the CSV history).
  std::vector<std::vector<double>> partial_exponents() const;
};

LyapunovEstimate lyapunov_spectrum(const Representation& rho, const SurfaceGroup& G,
                                   const UnitTangent& v0, double T, double step = 1.0,
                                   const LyapunovOptions& opts = {});

// ---------------------------------------------------------------------------
// Sections

struct SectionOptions {
  std::uint64_t seed = 7;   // generic start vector
  double tolerance = 1e-6;  // agreement of the T/2 and T estimates
  FlowOptions flow;
};

struct SectionEstimate {
  FiberPoint point;
  bool converged;
  double change;  // Fubini-Study distance between the T/2 and T estimates
  std::string note;
};

/// Pushes a generic fiber vector from phi(v, -T) forward to v.
SectionEstimate top_section_estimate(const Representation& rho, const SurfaceGroup& G,
                                     const UnitTangent& v, double T,
                                     const SectionOptions& opts = {});

/// top_section_estimate of the reversed vector.
SectionEstimate bottom_section_estimate(const Representation& rho, const SurfaceGroup& G,
                                        const UnitTangent& v, double T,
                                        const SectionOptions& opts = {});

/// Seeded random complex unit vector.
CVector generic_vector(int n, std::uint64_t seed);

}  // namespace riccati
