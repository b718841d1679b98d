#include "riccati/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "riccati/random.hpp"

namespace riccati {

Representation::Representation(std::string name, std::vector<CMatrix> images)
    : name_(std::move(name)), images_(std::move(images)) {
  if (images_.empty()) throw std::invalid_argument("representation: no generator images");
  dim_ = static_cast<int>(images_.front().rows());
  if (dim_ < 2 || dim_ > kMaxDim)
    throw std::invalid_argument("representation: dimension must be in [2, " +
                                std::to_string(kMaxDim) + "]");
  for (std::size_t i = 0; i < images_.size(); ++i) {
    const CMatrix& m = images_[i];
    if (m.rows() != dim_ || m.cols() != dim_)
      throw std::invalid_argument("representation: image " + std::to_string(i + 1) +
                                  " has the wrong shape");
    Eigen::PartialPivLU<CMatrix> lu(m);
    const double scale = m.cwiseAbs().maxCoeff();
    if (!(std::abs(lu.determinant()) > 1e-300) ||
        !(std::abs(lu.determinant()) > 1e-13 * std::pow(scale, dim_)))
      throw std::invalid_argument("representation: image " + std::to_string(i + 1) +
                                  " is singular");
    inverses_.push_back(lu.inverse());
  }
}

Representation Representation::trivial(int n, int rank) {
  return Representation("trivial", std::vector<CMatrix>(rank, CMatrix::Identity(n, n)));
}

Representation Representation::canonical(const SurfaceGroup& G) {
  std::vector<CMatrix> images;
  for (const auto& g : G.generators()) {
    CMatrix m(2, 2);
    m << g.a, g.b, g.c, g.d;
    images.push_back(m);
  }
  return Representation("canonical:" + G.name(), std::move(images));
}

const CMatrix& Representation::image(int letter) const {
  const int idx = std::abs(letter) - 1;
  if (letter == 0 || idx >= rank())
    throw std::out_of_range("representation: letter " + std::to_string(letter) + " out of range");
  return letter > 0 ? images_[idx] : inverses_[idx];
}

Representation Representation::scaled(Complex c) const {
  std::vector<CMatrix> images = images_;
  for (auto& m : images) m *= c;
  return Representation(name_ + ":scaled", std::move(images));
}

Representation Representation::conjugated(const CMatrix& P) const {
  const CMatrix Pinv = P.inverse();
  std::vector<CMatrix> images;
  for (const auto& m : images_) images.push_back(P * m * Pinv);
  return Representation(name_ + ":conjugated", std::move(images));
}

// ---------------------------------------------------------------------------

CocycleValue CocycleValue::identity(int n) { return {CMatrix::Identity(n, n), 0.0}; }

CMatrix CocycleValue::full() const { return std::exp(log_scale) * matrix; }

namespace {

void renormalize(CocycleValue& v) {
  const double s = v.matrix.cwiseAbs().maxCoeff();
  if (!(s > 0.0) || !std::isfinite(s)) throw NumericalError("cocycle value degenerate");
  v.matrix /= s;
  v.log_scale += std::log(s);
}

}  // namespace

CocycleValue operator*(const CocycleValue& a, const CocycleValue& b) {
  CocycleValue out{a.matrix * b.matrix, a.log_scale + b.log_scale};
  renormalize(out);
  return out;
}

double relative_error(const CocycleValue& a, const CocycleValue& b) {
  // Compare in the scale of a to avoid overflow of e^{log_scale}.
  const CMatrix diff = a.matrix - std::exp(b.log_scale - a.log_scale) * b.matrix;
  return diff.norm() / a.matrix.norm();
}

CocycleValue evaluate_word(const Representation& rho, const Word& w) {
  CocycleValue out = CocycleValue::identity(rho.dim());
  for (int l : w.letters()) {
    out.matrix = rho.image(l) * out.matrix;
    renormalize(out);
  }
  return out;
}

CocycleValue cocycle_along(const Representation& rho, const UnitTangent& v, double t,
                           const SurfaceGroup& G, const FlowOptions& opts) {
  return evaluate_word(rho, flow_on_surface(v, t, G, opts).word);
}

FiberPoint apply(const CocycleValue& a, const FiberPoint& p) {
  return FiberPoint(CVector(a.matrix * p.coords()));
}

// ---------------------------------------------------------------------------

IntegrabilityReport check_integrability(const Representation& rho, const SurfaceGroup& G,
                                        double tol) {
  IntegrabilityReport report;
  for (const auto& cusp : G.cusps()) {
    const CMatrix m = evaluate_word(rho, cusp.peripheral).matrix;
    const std::vector<Complex> ev = eigenvalues(m);
    double logdet = 0.0;
    for (const Complex& z : ev) logdet += std::log(std::abs(z));
    const double unit = std::exp(logdet / static_cast<double>(ev.size()));
    CuspIntegrability c{cusp.vertex, cusp.peripheral, {}, true};
    for (const Complex& z : ev) {
      c.moduli.push_back(std::abs(z) / unit);
      if (std::abs(c.moduli.back() - 1.0) > tol) c.unimodular = false;
    }
    report.integrable = report.integrable && c.unimodular;
    report.cusps.push_back(std::move(c));
  }
  return report;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<double>> LyapunovEstimate::partial_exponents() const {
  std::vector<std::vector<double>> out;
  if (block_logs.empty()) return out;
  std::vector<double> sum(block_logs.front().size(), 0.0);
  for (std::size_t b = 0; b < block_logs.size(); ++b) {
    std::vector<double> row(sum.size());
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += block_logs[b][i];
      row[i] = sum[i] / (static_cast<double>(b + 1) * step);
    }
    out.push_back(std::move(row));
  }
  return out;
}

LyapunovEstimate lyapunov_spectrum(const Representation& rho, const SurfaceGroup& G,
                                   const UnitTangent& v0, double T, double step,
                                   const LyapunovOptions& opts) {
  if (!(step > 0.0) || !(T >= step))
    throw std::invalid_argument("lyapunov_spectrum: need T >= step > 0");
  const int n = rho.dim();
  const auto blocks = static_cast<std::int64_t>(std::llround(T / step));

  LyapunovEstimate est;
  est.T = static_cast<double>(blocks) * step;
  est.step = step;
  est.integrability = check_integrability(rho, G);
  est.advisory = !est.integrability.integrable;
  est.block_logs.reserve(static_cast<std::size_t>(blocks));

  Rng rng(derive_seed(opts.seed, 0x4c59));
  UnitTangent v = v0;
  CMatrix Q = CMatrix::Identity(n, n);
  for (std::int64_t b = 0; b < blocks; ++b) {
    FlowResult r;
    while (true) {
      try {
        r = flow_on_surface(v, step, G, opts.flow);
        break;
      } catch (const CuspCapture&) {
        if (++est.restarts > opts.max_restarts)
          throw NumericalError("lyapunov_spectrum: too many cusp captures");
        v = liouville_sample(G, rng);
      } catch (const VertexHit&) {
        if (++est.restarts > opts.max_restarts)
          throw NumericalError("lyapunov_spectrum: too many vertex hits");
        v = liouville_sample(G, rng);
      }
    }
    v = r.v;
    for (int l : r.word.letters()) est.signed_letters += l > 0 ? 1 : -1;

    const CocycleValue a = evaluate_word(rho, r.word);
    Eigen::HouseholderQR<CMatrix> qr(a.matrix * Q);
    const CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    Q = qr.householderQ() * CMatrix::Identity(n, n);
    std::vector<double> logs(n);
    for (int i = 0; i < n; ++i) {
      const double d = std::abs(R(i, i));
      if (!(d > 0.0)) throw NumericalError("lyapunov_spectrum: degenerate frame");
      logs[i] = std::log(d) + a.log_scale;
    }
    est.block_logs.push_back(std::move(logs));
  }

  std::vector<double> mean(n, 0.0), se(n, 0.0);
  const double nb = static_cast<double>(blocks);
  for (const auto& row : est.block_logs)
    for (int i = 0; i < n; ++i) mean[i] += row[i] / step;
  for (int i = 0; i < n; ++i) mean[i] /= nb;
  if (blocks > 1) {
    for (const auto& row : est.block_logs)
      for (int i = 0; i < n; ++i) se[i] += std::pow(row[i] / step - mean[i], 2);
    for (int i = 0; i < n; ++i) se[i] = std::sqrt(se[i] / (nb - 1.0)) / std::sqrt(nb);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return mean[x] > mean[y]; });
  for (int i : order) {
    est.exponents.push_back(mean[i]);
    est.standard_errors.push_back(se[i]);
  }
  return est;
}

// ---------------------------------------------------------------------------

CVector generic_vector(int n, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x5ec7));
  CVector x(n);
  for (int i = 0; i < n; ++i) x(i) = Complex(rng.normal(), rng.normal());
  return x / x.norm();
}

namespace {

FiberPoint push_from_past(const Representation& rho, const SurfaceGroup& G, const UnitTangent& v,
                          double T, const CVector& xi, const FlowOptions& flow) {
  const FlowResult back = flow_on_surface(v, -T, G, flow);
  const CocycleValue a = evaluate_word(rho, back.word.inverse());
  return FiberPoint(CVector(a.matrix * xi));
}

}  // namespace

SectionEstimate top_section_estimate(const Representation& rho, const SurfaceGroup& G,
                                     const UnitTangent& v, double T, const SectionOptions& opts) {
  if (!(T > 0.0)) throw std::invalid_argument("top_section_estimate: T must be positive");
  const CVector xi = generic_vector(rho.dim(), opts.seed);
  const FiberPoint half = push_from_past(rho, G, v, 0.5 * T, xi, opts.flow);
  const FiberPoint full = push_from_past(rho, G, v, T, xi, opts.flow);
  const double change = fubini_study_distance(half, full);
  const bool converged = change <= opts.tolerance;
  return {full, converged, change, converged ? "" : "no dominated direction detected"};
}

SectionEstimate bottom_section_estimate(const Representation& rho, const SurfaceGroup& G,
                                        const UnitTangent& v, double T,
                                        const SectionOptions& opts) {
  return top_section_estimate(rho, G, v.reversed(), T, opts);
}

}  // namespace riccati
