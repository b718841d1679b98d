#include "riccati/cusp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace riccati::cusp {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dim(int n) {
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("cusp: dimension out of range");
}

}  // namespace

MonodromySpec MonodromySpec::parabolic(int n, double theta) {
  check_dim(n);
  MonodromySpec s;
  s.n = n;
  s.kind = Kind::parabolic;
  s.theta = theta;
  return s;
}

MonodromySpec MonodromySpec::hyperbolic(int n, double lambda, std::optional<CMatrix> conjugator) {
  check_dim(n);
  if (n < 2) throw std::invalid_argument("cusp: hyperbolic spec needs n >= 2");
  if (!(lambda > 1.0) || !std::isfinite(lambda))
    throw std::invalid_argument("cusp: hyperbolic spec needs lambda > 1");
  if (conjugator) {
    if (conjugator->rows() != n || conjugator->cols() != n)
      throw std::invalid_argument("cusp: conjugator has the wrong shape");
    if (std::abs(conjugator->determinant()) < 1e-12)
      throw std::invalid_argument("cusp: conjugator is singular");
  }
  MonodromySpec s;
  s.n = n;
  s.kind = Kind::hyperbolic;
  s.lambda = lambda;
  s.conjugator = std::move(conjugator);
  return s;
}

std::string to_string(Kind k) { return k == Kind::parabolic ? "parabolic" : "hyperbolic"; }

CMatrix exp_tA_theta(double theta, double t, int n) {
  check_dim(n);
  CMatrix m = CMatrix::Zero(n, n);
  const Complex phase = std::polar(1.0, t * theta);
  double term = 1.0;  // t^k / k!
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j + k < n; ++j) m(j, j + k) = phase * term;
    term *= t / static_cast<double>(k + 1);
  }
  return m;
}

double winding(double eta) { return 2.0 * std::cos(eta) / std::sin(eta); }

CMatrix in_out_matrix(const MonodromySpec& spec, double eta) {
  if (eta == 0.0 || std::sin(eta) == 0.0) throw std::invalid_argument("radial");
  const double a = winding(eta);
  if (spec.kind == Kind::parabolic) return exp_tA_theta(spec.theta, a / (2.0 * kPi), spec.n);
  CMatrix d = CMatrix::Identity(spec.n, spec.n);
  const double e = std::pow(spec.lambda, 0.5 * a);
  d(0, 0) = e;
  d(spec.n - 1, spec.n - 1) = 1.0 / e;
  if (!spec.conjugator) return d;
  const CMatrix& c = *spec.conjugator;
  return c * d * c.inverse();
}

double operator_norm(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double log_norm_in_out(const MonodromySpec& spec, double eta) {
  if (spec.kind == Kind::parabolic) return std::log(operator_norm(in_out_matrix(spec, eta)));
  if (eta == 0.0 || std::sin(eta) == 0.0) throw std::invalid_argument("radial");
  // lambda^{a/2} overflows near the radial direction; factor out e^{|s|}.
  const double s = 0.5 * winding(eta) * std::log(spec.lambda);
  const double m = std::abs(s);
  CMatrix d = CMatrix::Identity(spec.n, spec.n) * std::exp(-m);
  d(0, 0) = std::exp(s - m);
  d(spec.n - 1, spec.n - 1) = std::exp(-s - m);
  if (spec.conjugator) d = *spec.conjugator * d * spec.conjugator->inverse();
  return m + std::log(operator_norm(d));
}

double norm_constant(const MonodromySpec& spec) {
  if (spec.kind != Kind::hyperbolic || !spec.conjugator) return 1.0;
  Eigen::JacobiSVD<CMatrix> svd(*spec.conjugator);
  const auto& s = svd.singularValues();
  return s(s.size() - 1) / s(0);
}

Quadrature integrability_integral(const MonodromySpec& spec, double eps, int initial_points,
                                  double rel_tol) {
  if (!(eps > 0.0) || !(eps < kPi / 2.0))
    throw std::invalid_argument("integrability_integral: eps must lie in (0, pi/2)");
  const double u0 = std::log(eps), u1 = std::log(kPi / 2.0);
  auto midpoint = [&](int n) {
    const double h = (u1 - u0) / n;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      const double eta = std::exp(u0 + (k + 0.5) * h);
      sum += std::max(0.0, log_norm_in_out(spec, eta)) * eta;
    }
    return 2.0 * kPi * sum * h;
  };
  int n = std::max(1, initial_points);
  double prev = midpoint(n);
  while (true) {
    n *= 2;
    const double cur = midpoint(n);
    const double change = std::abs(cur - prev) / std::max(std::abs(cur), 1e-300);
    if (change < rel_tol || n >= (1 << 22)) return {cur, n, change};
    prev = cur;
  }
}

std::vector<double> default_epsilons() {
  std::vector<double> out;
  for (int k = 4; k <= 16; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

Dichotomy integrability_dichotomy(const MonodromySpec& spec, const std::vector<double>& eps) {
  if (eps.size() < 3) throw std::invalid_argument("integrability_dichotomy: need at least 3 epsilons");
  Dichotomy d;
  d.eps = eps;
  std::vector<double> x;
  for (double e : eps) {
    d.values.push_back(integrability_integral(spec, e).value);
    x.push_back(std::log(1.0 / e));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += d.values[i] / n;
  }
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (d.values[i] - my);
    syy += (d.values[i] - my) * (d.values[i] - my);
  }
  d.slope = sxy / sxx;
  d.intercept = my - d.slope * mx;
  d.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 0.0;
  const double first = std::abs(d.values[1] - d.values[0]);
  const double last = std::abs(d.values.back() - d.values[d.values.size() - 2]);
  d.divergent = d.r2 > 0.99 && d.slope > 0.0 && last >= 0.5 * first;
  d.verdict = d.divergent ? "not integrable" : "integrable";
  return d;
}

ExcursionSample liouville_excursion_sample(Rng& rng) {
  ExcursionSample s;
  s.theta = rng.uniform(0.0, 2.0 * kPi);
  s.eta = std::asin(rng.uniform_open_left());
  s.t = rng.uniform(0.0, excursion_time(s.eta));
  return s;
}

double excursion_time(double eta) {
  const double e = std::abs(eta);
  return 2.0 * std::log((1.0 + std::cos(e)) / std::sin(e));
}

MonteCarlo monte_carlo_integral(const MonodromySpec& spec, double eps, std::int64_t samples,
                                std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0xc05b));
  double sum = 0.0, sum2 = 0.0;
  for (std::int64_t k = 0; k < samples; ++k) {
    const ExcursionSample s = liouville_excursion_sample(rng);
    double w = 0.0;
    if (s.eta > eps) {
      const double f = std::max(0.0, log_norm_in_out(spec, s.eta));
      w = 2.0 * kPi * f / std::cos(s.eta);
    }
    sum += w;
    sum2 += w * w;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum2 / n - mean * mean);
  return {mean, std::sqrt(var / n), samples};
}

MonodromySpec spec_from_monodromy(const CMatrix& m, double tol) {
  const int n = static_cast<int>(m.rows());
  Eigen::ComplexEigenSolver<CMatrix> es(m);
  const auto& ev = es.eigenvalues();
  double logdet = 0.0;
  for (int i = 0; i < n; ++i) logdet += std::log(std::abs(ev(i)));
  const double unit = std::exp(logdet / n);
  double top = 0.0;
  for (int i = 0; i < n; ++i) top = std::max(top, std::abs(ev(i)) / unit);
  bool unimodular = true;
  for (int i = 0; i < n; ++i)
    if (std::abs(std::abs(ev(i)) / unit - 1.0) > tol) unimodular = false;
  if (unimodular) return MonodromySpec::parabolic(n, std::arg(ev(0)));
  // Columns ordered by decreasing modulus, matching diag(lambda^{a/2}, ..., lambda^{-a/2}).
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return std::abs(ev(x)) > std::abs(ev(y)); });
  CMatrix c(n, n);
  for (int i = 0; i < n; ++i) c.col(i) = es.eigenvectors().col(order[i]);
  return MonodromySpec::hyperbolic(n, top, c);
}

}  // namespace riccati::cusp
