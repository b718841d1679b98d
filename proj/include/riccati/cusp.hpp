// Cusp excursions and the integrability dichotomy.
//
// A geodesic entering the horoball Im > 1 of a cusp (peripheral z -> z + 1)
// at angle eta from the vertical winds a_u = 2 cot(eta) times around the cusp
// before leaving. The fiber is then transported by the in-out matrix: a
// power of the peripheral monodromy with exponent a_u / 2pi. Whether
// log+ of its norm is integrable against d theta d eta decides whether the
// Lyapunov exponents are finite.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riccati/moebius.hpp"
#include "riccati/random.hpp"

namespace riccati::cusp {

enum class Kind { parabolic, hyperbolic };

struct MonodromySpec {
  int n = 2;
  Kind kind = Kind::parabolic;
  double theta = 0.0;   // parabolic rotation parameter
  double lambda = 1.0;  // hyperbolic expansion, > 1
  std::optional<CMatrix> conjugator;

  static MonodromySpec parabolic(int n, double theta);
  /// Throws std::invalid_argument unless lambda > 1 and the conjugator is
  /// invertible n x n.
  static MonodromySpec hyperbolic(int n, double lambda, std::optional<CMatrix> conjugator = {});
};

std::string to_string(Kind k);

/// e^{i t theta} [t^{k-j} / (k-j)!]_{j <= k}.
CMatrix exp_tA_theta(double theta, double t, int n);

/// a_u = 2 cos(eta) / sin(eta).
double winding(double eta);

/// Throws std::invalid_argument("radial") for eta = 0.
CMatrix in_out_matrix(const MonodromySpec& spec, double eta);

/// Largest singular value.
double operator_norm(const CMatrix& m);

/// log ||in_out(eta)||, evaluated without forming lambda^{a/2} for the
/// hyperbolic kind.
double log_norm_in_out(const MonodromySpec& spec, double eta);

/// K = 1 / cond(C) for the hyperbolic conjugator C (1 without one), so that
/// ||in_out|| >= K lambda^{|a_u|/2}.
double norm_constant(const MonodromySpec& spec);

struct Quadrature {
  double value;
  int intervals;
  double last_change;  // relative change at the final doubling
};

/// I(eps) = 2 pi * integral over eps < eta <= pi/2 of log+ ||in_out(eta)||.
/// Composite midpoint rule in log(eta), doubled until the relative change
/// drops below rel_tol.
Quadrature integrability_integral(const MonodromySpec& spec, double eps, int initial_points = 64,
                                  double rel_tol = 1e-6);

/// eps = 2^-4, ..., 2^-16.
std::vector<double> default_epsilons();

struct Dichotomy {
  std::vector<double> eps;
  std::vector<double> values;
  double slope = 0.0;  // of I against log(1/eps)
  double intercept = 0.0;
  double r2 = 0.0;
  bool divergent = false;
  std::string verdict;  // "integrable" / "not integrable"
};

/// Fits I(eps) against log(1/eps). Divergent iff the fit is affine (R^2 >
/// 0.99) with positive slope and the last increment is at least half the
/// first: log-divergence has constant increments, a convergent integral
/// has decaying ones.
Dichotomy integrability_dichotomy(const MonodromySpec& spec,
                                  const std::vector<double>& eps = default_epsilons());

/// Sample of (theta, eta, t): theta uniform on [0, 2pi), eta with density
/// cos(eta) on (0, pi/2], t uniform on [0, t_u(eta)].
struct ExcursionSample {
  double theta;
  double eta;
  double t;
};
ExcursionSample liouville_excursion_sample(Rng& rng);

/// Exact excursion time 2 log cot(|eta|/2).
double excursion_time(double eta);

struct MonteCarlo {
  double mean;
  double standard_error;
  std::int64_t samples;
};

/// Importance-sampled estimate of I(eps) from the excursion sampler.
MonteCarlo monte_carlo_integral(const MonodromySpec& spec, double eps, std::int64_t samples,
                                std::uint64_t seed);

/// Spec matching a peripheral monodromy matrix: parabolic when all
/// eigenvalue moduli (lift scale removed) are within tol of 1.
MonodromySpec spec_from_monodromy(const CMatrix& m, double tol = 1e-6);

}  // namespace riccati::cusp
