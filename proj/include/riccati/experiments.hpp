// Experiment runner behind the riccati_lab command line.
//
// Config files use the key-value grammar of keyvalue.hpp; every key matches
// a field name below (`experiment`, `surface`, `T`, `epsilons`, ...).
// Lists are whitespace separated. All inputs are loaded and validated before
// any artifact is written, so a failing run leaves the output directory
// untouched.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "riccati/keyvalue.hpp"

namespace riccati {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerdictFailed = 1,
  kExitUsage = 2,
  kExitUnknownExperiment = 3,
  kExitMalformedConfig = 4,
  kExitPresetNotFound = 5,
  kExitNumerical = 6,
  kExitIo = 7,
};

struct ExperimentConfig {
  std::string experiment;
  std::string surface = "thrice-punctured-sphere";
  std::string representation = "canonical";
  std::string schottky = "schottky-diag3";
  double T = 0.0;  // 0: 30 for sections, 200 for srb, 1000 otherwise
  double dt = 0.1;
  double step = 1.0;
  int orbits = 200;
  int samples = 100;
  int window = 64;  // letters per side of a bi-word
  std::vector<double> times{1.0, 5.0, 10.0, 20.0};
  std::vector<double> epsilons;  // empty: 2^-4 .. 2^-16
  std::string kind = "parabolic";
  double lambda = 3.0;
  double theta = 0.0;
  int n = 2;
  std::uint64_t seed = 1;
  bool parallel = true;
  std::string output_dir;  // empty: $RICCATI_OUT, else ./riccati-out

  /// Canonical `key = value` text of every field except output_dir and
  /// parallel; the config hash is taken over it.
  std::string canonical_text() const;
  std::uint64_t hash() const;
};

const std::vector<std::string>& experiment_names();

/// Applies the keys present in the file on top of `base`; throws ParseError
/// on unknown keys or bad values.
ExperimentConfig config_from_file(const KeyValueFile& kv, ExperimentConfig base = {});

std::string resolved_output_dir(const ExperimentConfig& cfg);

/// FNV-1a, 64 bit.
std::uint64_t fnv1a(const std::string& text);

struct RunResult {
  int exit_code = kExitOk;
  std::vector<std::string> artifacts;
  std::string message;  // error text when exit_code is not ok / verdict failed
};

/// Runs the experiment, writes its CSV files and `<experiment>_report.txt`
/// into the output directory, and echoes the report to `out`.
RunResult run(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace riccati
