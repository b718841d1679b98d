// riccati_lab: command-line runner for the experiments.
//
//   riccati_lab <experiment> [flags]
//   riccati_lab run --config FILE        (experiment named in the file)
//   riccati_lab presets
//
// Flags override values from --config. Exit codes are listed by --help.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "riccati/experiments.hpp"
#include "riccati/presets.hpp"

namespace {

constexpr const char* kExitCodes =
    "Exit codes: 0 ok, 1 a verdict failed, 2 usage error, 3 unknown experiment,\n"
    "4 malformed config, 5 preset not found, 6 numerical failure, 7 i/o error.\n"
    "Artifacts go to --out, else $RICCATI_OUT, else ./riccati-out.";

// --config is read before the real parse so that explicit flags can
// override it.
std::string find_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace riccati;
  ExperimentConfig cfg;
  if (const std::string path = find_config(argc, argv); !path.empty()) {
    std::ifstream in(path);
    if (!in) {
      std::cerr << "error: cannot read config " << path << "\n";
      return kExitIo;
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
      cfg = config_from_file(KeyValueFile(text.str(), path));
    } catch (const ParseError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitMalformedConfig;
    }
  }

  CLI::App app{"Foliated geodesic flow laboratory"};
  app.footer(kExitCodes);
  app.require_subcommand(1);
  std::string config_path;
  bool serial = false;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--out", cfg.output_dir, "output directory");
  app.add_option("--seed", cfg.seed, "64-bit run seed");
  app.add_flag("--serial", serial, "run ensembles on one thread");
  app.add_option("--surface", cfg.surface, "surface preset or file");
  app.add_option("--representation", cfg.representation,
                 "representation preset, file, 'canonical' or 'trivial'");
  app.add_option("--schottky", cfg.schottky, "Schottky preset or file");
  app.add_option("-T,--T", cfg.T, "orbit length");
  app.add_option("--dt", cfg.dt, "sampling step of time averages (<= 0.1)");
  app.add_option("--step", cfg.step, "QR block length of the Lyapunov estimator");
  app.add_option("--orbits", cfg.orbits, "orbits in the SRB ensemble");
  app.add_option("--samples", cfg.samples, "Liouville samples or bi-words");
  app.add_option("--window", cfg.window, "letters per side of a Schottky bi-word");
  app.add_option("--times", cfg.times, "flow times of canonical-check");
  app.add_option("--epsilons", cfg.epsilons, "epsilon ladder of cusp-integrability");
  app.add_option("--kind", cfg.kind, "cusp monodromy: parabolic or hyperbolic")
      ->check(CLI::IsMember({"parabolic", "hyperbolic"}));
  app.add_option("--lambda", cfg.lambda, "hyperbolic expansion factor (> 1)");
  app.add_option("--theta", cfg.theta, "parabolic rotation parameter");
  app.add_option("--n", cfg.n, "fiber dimension of the cusp spec");

  for (const auto& name : experiment_names()) app.add_subcommand(name, "run the " + name + " experiment")->fallthrough();
  app.add_subcommand("run", "run the experiment named in --config")->fallthrough();
  auto* presets = app.add_subcommand("presets", "list shipped presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (app.get_subcommands().empty() && !app.remaining().empty()) {
      std::cerr << "error: unknown experiment '" << app.remaining().front() << "'\n";
      return kExitUnknownExperiment;
    }
    app.exit(e);
    return kExitUsage;
  }

  if (presets->parsed()) {
    for (const auto& n : preset_names()) std::cout << n << "\n";
    return kExitOk;
  }
  const std::string sub = app.get_subcommands().front()->get_name();
  if (sub != "run") cfg.experiment = sub;
  if (cfg.experiment.empty()) {
    std::cerr << "error: 'run' needs a config file naming the experiment\n";
    return kExitUsage;
  }
  cfg.parallel = cfg.parallel && !serial;

  const RunResult r = run(cfg, std::cout);
  if (r.exit_code != kExitOk && !r.message.empty()) std::cerr << "error: " << r.message << "\n";
  for (const auto& a : r.artifacts) std::cerr << "wrote " << a << "\n";
  return r.exit_code;
}
