#include "riccati/experiments.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "riccati/canonical.hpp"
#include "riccati/cocycle.hpp"
#include "riccati/cusp.hpp"
#include "riccati/parallel.hpp"
#include "riccati/presets.hpp"
#include "riccati/schottky.hpp"
#include "riccati/srb.hpp"

#ifndef RICCATI_VERSION
#define RICCATI_VERSION "dev"
#endif

namespace riccati {

namespace {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string list(const std::vector<double>& xs) {
  std::string out;
  for (double x : xs) out += (out.empty() ? "" : " ") + num(x);
  return out;
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& tok : split_whitespace(s)) out.push_back(parse_real(tok, what));
  return out;
}

bool parse_bool(const std::string& s, const std::string& what) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ParseError(what + ": '" + s + "' is not a boolean");
}

}  // namespace

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ExperimentConfig::canonical_text() const {
  std::ostringstream s;
  s << "experiment = " << experiment << "\n"
    << "surface = " << surface << "\n"
    << "representation = " << representation << "\n"
    << "schottky = " << schottky << "\n"
    << "T = " << num(T) << "\n"
    << "dt = " << num(dt) << "\n"
    << "step = " << num(step) << "\n"
    << "orbits = " << orbits << "\n"
    << "samples = " << samples << "\n"
    << "window = " << window << "\n"
    << "times = " << list(times) << "\n"
    << "epsilons = " << list(epsilons) << "\n"
    << "kind = " << kind << "\n"
    << "lambda = " << num(lambda) << "\n"
    << "theta = " << num(theta) << "\n"
    << "n = " << n << "\n"
    << "seed = " << seed << "\n";
  return s.str();
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a(canonical_text()); }

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"lyapunov",          "sections", "srb",
                                              "schottky-sections", "cusp-integrability",
                                              "canonical-check",   "certify"};
  return names;
}

ExperimentConfig config_from_file(const KeyValueFile& kv, ExperimentConfig cfg) {
  const std::string& src = kv.source();
  const std::map<std::string, std::function<void(const std::string&)>> setters{
      {"experiment", [&](const std::string& v) { cfg.experiment = v; }},
      {"surface", [&](const std::string& v) { cfg.surface = v; }},
      {"representation", [&](const std::string& v) { cfg.representation = v; }},
      {"schottky", [&](const std::string& v) { cfg.schottky = v; }},
      {"T", [&](const std::string& v) { cfg.T = parse_real(v, src + ": T"); }},
      {"dt", [&](const std::string& v) { cfg.dt = parse_real(v, src + ": dt"); }},
      {"step", [&](const std::string& v) { cfg.step = parse_real(v, src + ": step"); }},
      {"orbits", [&](const std::string& v) { cfg.orbits = static_cast<int>(parse_int(v, src + ": orbits")); }},
      {"samples", [&](const std::string& v) { cfg.samples = static_cast<int>(parse_int(v, src + ": samples")); }},
      {"window", [&](const std::string& v) { cfg.window = static_cast<int>(parse_int(v, src + ": window")); }},
      {"times", [&](const std::string& v) { cfg.times = parse_list(v, src + ": times"); }},
      {"epsilons", [&](const std::string& v) { cfg.epsilons = parse_list(v, src + ": epsilons"); }},
      {"kind", [&](const std::string& v) { cfg.kind = v; }},
      {"lambda", [&](const std::string& v) { cfg.lambda = parse_real(v, src + ": lambda"); }},
      {"theta", [&](const std::string& v) { cfg.theta = parse_real(v, src + ": theta"); }},
      {"n", [&](const std::string& v) { cfg.n = static_cast<int>(parse_int(v, src + ": n")); }},
      {"seed",
       [&](const std::string& v) {
         const long s = parse_int(v, src + ": seed");
         if (s < 0) throw ParseError(src + ": seed must be nonnegative");
         cfg.seed = static_cast<std::uint64_t>(s);
       }},
      {"parallel", [&](const std::string& v) { cfg.parallel = parse_bool(v, src + ": parallel"); }},
      {"output_dir", [&](const std::string& v) { cfg.output_dir = v; }},
  };
  for (const auto& key : kv.keys()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ParseError(src + ": unknown key '" + key + "'");
    it->second(kv.get(key));
  }
  return cfg;
}

std::string resolved_output_dir(const ExperimentConfig& cfg) {
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  if (const char* env = std::getenv("RICCATI_OUT"); env && *env) return env;
  return "riccati-out";
}

// ---------------------------------------------------------------------------

namespace {

struct Artifact {
  std::string name;
  std::string text;
};

// Collects artifacts and report lines; nothing touches the disk until
// every computation has succeeded.
class Output {
 public:
  explicit Output(const ExperimentConfig& cfg)
      : header_("# riccati_lab " RICCATI_VERSION "\n# experiment=" + cfg.experiment +
                " config_hash=" + hex(cfg.hash()) + " seed=" + std::to_string(cfg.seed) + "\n") {}

  std::ostringstream& csv(const std::string& name, const std::string& columns) {
    files_.push_back({name, {}});
    streams_.emplace_back(std::make_unique<std::ostringstream>());
    *streams_.back() << header_ << columns << "\n";
    return *streams_.back();
  }
  std::ostringstream& report() { return report_; }
  void check(const std::string& what, bool ok) {
    report_ << (ok ? "PASS  " : "FAIL  ") << what << "\n";
    passed_ = passed_ && ok;
  }
  bool passed() const { return passed_; }

  std::vector<Artifact> finish(const std::string& experiment) {
    for (std::size_t i = 0; i < files_.size(); ++i) files_[i].text = streams_[i]->str();
    files_.push_back({experiment + "_report.txt", header_ + report_.str() +
                                                      (passed_ ? "verdict: pass\n" : "verdict: fail\n")});
    return files_;
  }

 private:
  std::string header_;
  std::vector<Artifact> files_;
  std::vector<std::unique_ptr<std::ostringstream>> streams_;
  std::ostringstream report_;
  bool passed_ = true;
};

void write_point(std::ostream& os, const SpherePoint& p) {
  if (p.is_infinity()) {
    os << ",inf,0";
    return;
  }
  const Complex z = p.affine_value();
  os << "," << num(z.real()) << "," << num(z.imag());
}

bool is_canonical(const Representation& rho, const SurfaceGroup& G) {
  if (rho.dim() != 2 || rho.rank() != G.rank()) return false;
  for (int i = 1; i <= G.rank(); ++i)
    if (!projectively_equal(ProjectiveMap(rho.image(i)), G.letter(i).to_projective(), 1e-12))
      return false;
  return true;
}

// Retries a Liouville draw when the orbit escapes into a cusp or grazes a
// vertex. These events have measure zero but occur at finite precision.
template <class F>
auto with_resampling(Rng& rng, const SurfaceGroup& G, F&& f) {
  for (int attempt = 0;; ++attempt) {
    const UnitTangent v = liouville_sample(G, rng);
    try {
      return f(v);
    } catch (const CuspCapture&) {
      if (attempt >= 100) throw;
    } catch (const VertexHit&) {
      if (attempt >= 100) throw;
    }
  }
}

template <class F>
auto map_items(bool parallel, std::int64_t n, F&& f) {
  return parallel ? parallel_map(n, f) : serial_map(n, f);
}

void lyapunov(const ExperimentConfig& cfg, Output& out) {
  const SurfaceGroup G = load_surface(cfg.surface);
  const Representation rho = load_representation(cfg.representation, G);
  Rng rng(derive_seed(cfg.seed, 0));
  LyapunovOptions opts;
  opts.seed = cfg.seed;
  const LyapunovEstimate est = lyapunov_spectrum(rho, G, liouville_sample(G, rng), cfg.T, cfg.step, opts);

  std::string cols = "block_index,t";
  for (int i = 1; i <= rho.dim(); ++i) cols += ",partial_exponent_" + std::to_string(i);
  auto& csv = out.csv("lyapunov.csv", cols);
  const auto partial = est.partial_exponents();
  for (std::size_t b = 0; b < partial.size(); ++b) {
    csv << b << "," << num(est.step * static_cast<double>(b + 1));
    for (double x : partial[b]) csv << "," << num(x);
    csv << "\n";
  }

  auto& r = out.report();
  r << "surface " << G.name() << ", representation " << rho.name() << ", T = " << num(cfg.T)
    << ", step = " << num(cfg.step) << ", restarts = " << est.restarts << "\n";
  r << "integrable at every cusp: " << (est.integrability.integrable ? "yes" : "no") << "\n";
  if (est.advisory) r << "advisory, may diverge: some peripheral monodromy is not unimodular\n";
  for (std::size_t i = 0; i < est.exponents.size(); ++i)
    r << "lambda_" << i + 1 << " = " << num(est.exponents[i]) << " +- " << num(est.standard_errors[i]) << "\n";
  const std::size_t n = est.exponents.size();
  bool symmetric = true;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    const double se = std::hypot(est.standard_errors[i], est.standard_errors[j]);
    symmetric = symmetric && std::abs(est.exponents[i] + est.exponents[j]) <= 3.0 * se + 1e-12;
  }
  if (!est.advisory) out.check("spectrum symmetric under lambda_i -> -lambda_{n+1-i} within 3 s.e.", symmetric);
  if (is_canonical(rho, G))
    out.check("lambda_1 - lambda_2 = 1 +- 0.02 (got " + num(est.exponents[0] - est.exponents[1]) + ")",
              std::abs(est.exponents[0] - est.exponents[1] - 1.0) <= 0.02);
}

void sections(const ExperimentConfig& cfg, Output& out) {
  const SurfaceGroup G = load_surface(cfg.surface);
  const Representation rho = load_representation(cfg.representation, G);
  const bool exact = is_canonical(rho, G);
  SectionOptions opts;
  opts.seed = cfg.seed;

  struct Row {
    UnitTangent v;
    SectionEstimate top, bottom;
  };
  const auto rows = map_items(cfg.parallel, cfg.samples, [&](std::int64_t i) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    return with_resampling(rng, G, [&](const UnitTangent& v) {
      return Row{v, top_section_estimate(rho, G, v, cfg.T, opts),
                 bottom_section_estimate(rho, G, v, cfg.T, opts)};
    });
  });

  std::string cols = "sample_id,x,y,angle";
  for (const char* which : {"top", "bottom"})
    for (int k = 1; k <= rho.dim(); ++k)
      cols += std::string(",") + which + "_" + std::to_string(k) + "_re," + which + "_" +
              std::to_string(k) + "_im";
  cols += ",top_change,bottom_change";
  if (exact) cols += ",top_error,bottom_error";
  auto& csv = out.csv("sections.csv", cols);
  double worst = 0.0;
  int unconverged = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& row = rows[i];
    const Complex z = row.v.base_point();
    csv << i << "," << num(z.real()) << "," << num(z.imag()) << "," << num(row.v.direction_angle());
    for (const SectionEstimate* e : {&row.top, &row.bottom})
      for (int k = 0; k < rho.dim(); ++k)
        csv << "," << num(e->point.coords()(k).real()) << "," << num(e->point.coords()(k).imag());
    csv << "," << num(row.top.change) << "," << num(row.bottom.change);
    unconverged += !row.top.converged + !row.bottom.converged;
    if (exact) {
      const double et = fubini_study_distance(row.top.point, FiberPoint(canonical::expanding_section(row.v)));
      const double eb =
          fubini_study_distance(row.bottom.point, FiberPoint(canonical::contracting_section(row.v)));
      worst = std::max({worst, et, eb});
      csv << "," << num(et) << "," << num(eb);
    }
    csv << "\n";
  }
  auto& r = out.report();
  r << "surface " << G.name() << ", representation " << rho.name() << ", T = " << num(cfg.T) << ", "
    << cfg.samples << " Liouville samples\n";
  r << "estimates without a dominated direction: " << unconverged << " of " << 2 * rows.size() << "\n";
  if (exact)
    out.check("Fubini-Study error against the exact canonical sections < 1e-6 (max " + num(worst) + ")",
              worst < 1e-6);
  else
    out.check("every estimate converged (T/2 vs T change <= 1e-6)", unconverged == 0);
}

void write_histogram(Output& out, const std::string& name, const srb::EmpiricalMeasure& m) {
  auto& csv = out.csv(name, "cell,ix,iy,i_polar,i_azimuth,x_lo,x_hi,y_lo,y_hi,weight");
  const srb::Grid& g = m.grid;
  const double wx = (g.x_max - g.x_min) / g.nx;
  auto y_edge = [&](int iy) {
    const double u = static_cast<double>(iy) / g.ny;
    return u < 1.0 ? u / (1.0 - u) : std::numeric_limits<double>::infinity();
  };
  for (int c = 0; c < g.cells(); ++c) {
    if (m.weights[c] == 0.0) continue;
    const int f = c % g.fiber_cells();
    const int base = c / g.fiber_cells();
    const int ix = base / g.ny, iy = base % g.ny;
    csv << c << "," << ix << "," << iy << "," << f / g.n_azimuth << "," << f % g.n_azimuth << ","
        << num(g.x_min + ix * wx) << "," << num(g.x_min + (ix + 1) * wx) << "," << num(y_edge(iy)) << ","
        << num(y_edge(iy + 1)) << "," << num(m.weights[c]) << "\n";
  }
}

void srb_experiment(const ExperimentConfig& cfg, Output& out) {
  const SurfaceGroup G = load_surface(cfg.surface);
  const Representation rho = load_representation(cfg.representation, G);
  const bool exact = is_canonical(rho, G);
  const auto hs = srb::shipped_observables(G);
  srb::OrbitOptions opts;
  opts.dt = cfg.dt;
  const srb::BasinReport basin = srb::basin_test(rho, G, hs, cfg.T, cfg.orbits, cfg.seed, opts, cfg.parallel);

  for (const auto& ov : basin.observables) {
    auto& csv = out.csv("srb_" + ov.name + ".csv", "orbit_id,average,stderr");
    for (std::size_t i = 0; i < ov.orbit_averages.size(); ++i)
      csv << i << "," << num(ov.orbit_averages[i]) << "," << num(ov.orbit_stderrs[i]) << "\n";
  }
  auto& r = out.report();
  r << "surface " << G.name() << ", representation " << rho.name() << ", T = " << num(cfg.T)
    << ", dt = " << num(cfg.dt) << ", " << cfg.orbits << " orbits, " << basin.resampled
    << " resampled after cusp capture\n";
  for (const auto& ov : basin.observables)
    out.check(ov.name + ": across-orbit dispersion " + num(ov.across) + " < 3 x within-orbit " +
                  num(ov.within) + " (mean " + num(ov.mean) + ")",
              ov.single);

  if (rho.dim() != 2) {
    r << "histograms skipped: they need a 2-dimensional fiber\n";
    return;
  }
  srb::Grid grid = srb::Grid::for_surface(G);
  grid.chart = srb::FiberChart::trivialized;
  srb::OrbitOptions back = opts;
  back.backward = true;
  const auto fwd = srb::occupation_measure(rho, G, cfg.orbits, 0.5 * cfg.T, cfg.T, grid,
                                           derive_seed(cfg.seed, 1), opts, cfg.parallel);
  const auto bwd = srb::occupation_measure(rho, G, cfg.orbits, 0.5 * cfg.T, cfg.T, grid,
                                           derive_seed(cfg.seed, 2), back, cfg.parallel);
  write_histogram(out, "srb_hist_forward.csv", fwd);
  write_histogram(out, "srb_hist_backward.csv", bwd);
  const double tv = srb::tv_distance(fwd, bwd);
  r << "histogram grid " << grid.nx << " x " << grid.ny << " base cells, " << grid.fiber_cells()
    << " fiber cells, trivialised fiber chart\n";
  if (exact) {
    const auto push = srb::pushforward_measure(G, canonical::expanding_section, 100000,
                                               grid, derive_seed(cfg.seed, 3), cfg.parallel);
    write_histogram(out, "srb_hist_pushforward.csv", push);
    r << "TV(forward occupation, expanding-section pushforward) = " << num(srb::tv_distance(fwd, push)) << "\n";
    out.check("forward and backward occupation differ: TV " + num(tv) + " > 0.5", tv > 0.5);
  } else {
    r << "TV(forward, backward occupation) = " << num(tv) << "\n";
  }
}

void schottky_sections(const ExperimentConfig& cfg, Output& out) {
  const PingPongSystem sys = load_schottky(cfg.schottky);
  const PingPongCertificate cert = certify_ping_pong(sys);
  struct Row {
    ReducedBiWord w;
    SectionPoint plus, minus;
  };
  const auto rows = map_items(cfg.parallel, cfg.samples, [&](std::int64_t i) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    const ReducedBiWord w = random_biword(sys.rank(), cfg.window, rng);
    return Row{w, s_plus(sys, w, 1e-9, cfg.window), s_minus(sys, w, 1e-9, cfg.window)};
  });
  auto& csv = out.csv("schottky_sections.csv",
                      "word_id,word,s_plus_re,s_plus_im,s_minus_re,s_minus_im,bound_plus,bound_minus,"
                      "window_plus,window_minus");
  int unreached = 0;
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& row = rows[i];
    std::string word;
    for (auto it = row.w.past.rbegin(); it != row.w.past.rend(); ++it) word += std::to_string(*it) + " ";
    word += "|";
    for (int l : row.w.future) word += " " + std::to_string(l);
    csv << i << "," << word;
    write_point(csv, row.plus.point);
    write_point(csv, row.minus.point);
    csv << "," << num(row.plus.bound) << "," << num(row.minus.bound) << "," << row.plus.window << ","
        << row.minus.window << "\n";
    unreached += !row.plus.reached + !row.minus.reached;
    closest = std::min(closest, fubini_study_distance(row.plus.point, row.minus.point));
  }
  auto& r = out.report();
  r << "system " << sys.name << ", " << cfg.samples << " random reduced bi-words, window " << cfg.window << "\n";
  out.check("ping-pong certificate: gap " + num(cert.min_gap) + ", nesting margin " +
                num(cert.min_nesting_margin) + (cert.certified ? "" : " (" + cert.failure + ")"),
            cert.certified);
  out.check("nested-disc diameters below 1e-9 within the window (" + std::to_string(unreached) + " misses)",
            unreached == 0);
  out.check("s+ and s- distinct on every word (closest pair " + num(closest) + ")", closest > 1e-9);
}

cusp::MonodromySpec spec_from_config(const ExperimentConfig& cfg) {
  if (cfg.kind == "parabolic") return cusp::MonodromySpec::parabolic(cfg.n, cfg.theta);
  if (cfg.kind == "hyperbolic") return cusp::MonodromySpec::hyperbolic(cfg.n, cfg.lambda);
  throw ParseError("kind must be parabolic or hyperbolic, got '" + cfg.kind + "'");
}

void cusp_integrability(const ExperimentConfig& cfg, Output& out) {
  const cusp::MonodromySpec spec = spec_from_config(cfg);
  const auto eps = cfg.epsilons.empty() ? cusp::default_epsilons() : cfg.epsilons;
  const cusp::Dichotomy d = cusp::integrability_dichotomy(spec, eps);
  auto& csv = out.csv("cusp_integrability.csv", "epsilon,I_epsilon");
  for (std::size_t i = 0; i < d.eps.size(); ++i) csv << num(d.eps[i]) << "," << num(d.values[i]) << "\n";
  auto& r = out.report();
  r << "spec " << cusp::to_string(spec.kind) << ", n = " << spec.n;
  if (spec.kind == cusp::Kind::parabolic) r << ", theta = " << num(spec.theta) << "\n";
  else r << ", lambda = " << num(spec.lambda) << "\n";
  r << "fit I = " << num(d.intercept) << " + " << num(d.slope) << " log(1/eps), R^2 = " << num(d.r2) << "\n";
  r << "verdict: " << d.verdict << "\n";
}

void canonical_check(const ExperimentConfig& cfg, Output& out) {
  const SurfaceGroup G = load_surface(cfg.surface);
  const auto errors = map_items(cfg.parallel, cfg.samples, [&](std::int64_t i) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    return with_resampling(rng, G, [&](const UnitTangent& v) {
      const SpherePoint w = srb::random_fiber_point(2, rng).as_sphere_point();
      std::vector<double> e;
      for (double t : cfg.times) e.push_back(canonical::contraction_check(v, w, t, G).error);
      return e;
    });
  });
  auto& csv = out.csv("canonical_check.csv", "t,max_error");
  double worst = 0.0;
  for (std::size_t k = 0; k < cfg.times.size(); ++k) {
    double m = 0.0;
    for (const auto& e : errors) m = std::max(m, e[k]);
    worst = std::max(worst, m);
    csv << num(cfg.times[k]) << "," << num(m) << "\n";
  }
  out.report() << "surface " << G.name() << ", " << cfg.samples << " samples (v, w), times " << list(cfg.times)
               << "\n";
  out.check("|c_t - e^-t c_0| < 1e-8 (max " + num(worst) + ")", worst < 1e-8);
}

void certify(const ExperimentConfig& cfg, Output& out) {
  const PingPongSystem sys = load_schottky(cfg.schottky);
  const SurfaceGroup G = load_surface(cfg.surface);
  const PingPongSystem fuchsian = surface_ping_pong(G);
  auto& csv = out.csv("certify.csv", "system,mode,certified,min_gap,min_nesting_margin,contraction");
  auto row = [&](const PingPongSystem& s, bool tangency) {
    const PingPongCertificate c = certify_ping_pong(s, 1e-9, tangency);
    csv << s.name << "," << (tangency ? "tangency" : "strict") << "," << (c.certified ? 1 : 0) << ","
        << num(c.min_gap) << "," << num(c.min_nesting_margin) << "," << num(c.contraction) << "\n";
    out.check(s.name + " (" + (tangency ? "touching discs allowed" : "strict") + "): gap " + num(c.min_gap) +
                  ", nesting margin " + num(c.min_nesting_margin) +
                  (c.certified ? "" : " (" + c.failure + ")"),
              c.certified);
  };
  row(sys, false);
  row(fuchsian, true);
}

void write_artifacts(const std::string& dir, const std::vector<Artifact>& files, RunResult& result) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (const auto& f : files) {
    const fs::path p = fs::path(dir) / f.name;
    std::ofstream os(p, std::ios::binary);
    os << f.text;
    if (!os) throw fs::filesystem_error("cannot write", p, std::make_error_code(std::errc::io_error));
    result.artifacts.push_back(p.string());
  }
}

ExperimentConfig with_defaults(ExperimentConfig cfg) {
  if (cfg.T <= 0.0) {
    if (cfg.experiment == "sections") cfg.T = 30.0;
    else if (cfg.experiment == "srb") cfg.T = 200.0;
    else cfg.T = 1000.0;
  }
  return cfg;
}

}  // namespace

RunResult run(const ExperimentConfig& input, std::ostream& log) {
  const ExperimentConfig cfg = with_defaults(input);
  RunResult result;
  const std::map<std::string, void (*)(const ExperimentConfig&, Output&)> table{
      {"lyapunov", lyapunov},
      {"sections", sections},
      {"srb", srb_experiment},
      {"schottky-sections", schottky_sections},
      {"cusp-integrability", cusp_integrability},
      {"canonical-check", canonical_check},
      {"certify", certify},
  };
  const auto it = table.find(cfg.experiment);
  if (it == table.end()) {
    result.exit_code = kExitUnknownExperiment;
    result.message = "unknown experiment '" + cfg.experiment + "'";
    return result;
  }
  auto fail = [&](int code, const std::string& what) {
    result.exit_code = code;
    result.message = what;
    return result;
  };
  try {
    if (!(cfg.dt > 0.0) || cfg.dt > 0.1) return fail(kExitMalformedConfig, "dt must lie in (0, 0.1]");
    if (!(cfg.step > 0.0)) return fail(kExitMalformedConfig, "step must be positive");
    if (cfg.samples < 1 || cfg.orbits < 2 || cfg.window < 1)
      return fail(kExitMalformedConfig, "samples >= 1, orbits >= 2 and window >= 1 required");
    Output out(cfg);
    const auto start = std::chrono::steady_clock::now();
    it->second(cfg, out);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto files = out.finish(cfg.experiment);
    write_artifacts(resolved_output_dir(cfg), files, result);
    log << files.back().text;
    char timing[64];
    std::snprintf(timing, sizeof timing, "(%.2f s, %d workers)\n", secs, worker_count());
    log << timing;
    if (!out.passed()) result.exit_code = kExitVerdictFailed;
  } catch (const PresetNotFound& e) {
    return fail(kExitPresetNotFound, e.what());
  } catch (const ParseError& e) {
    return fail(kExitMalformedConfig, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(kExitMalformedConfig, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(kExitIo, e.what());
  } catch (const NumericalError& e) {
    return fail(kExitNumerical, e.what());
  } catch (const CuspCapture& e) {
    return fail(kExitNumerical, e.what());
  } catch (const VertexHit& e) {
    return fail(kExitNumerical, e.what());
  }
  return result;
}

}  // namespace riccati
