#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "filament/diagnostics.hpp"
#include "filament/geometry.hpp"

namespace filament {

enum class Experiment {
  FdBackwardFixed,
  FdBackwardAsymptotic,
  FdForward,
  SpectralBackward,
  SpectralAdaptiveBackward,
  SpectralForwardProfile,
  SpectralForwardTwoStage,
};

const char* to_string(Experiment e);
std::optional<Experiment> experiment_from_string(std::string_view name);
const std::vector<Experiment>& all_experiments();
/// One-line description for `list-experiments`.
const char* describe(Experiment e);

/// Validated run parameters. FD experiments read ds, spectral ones read N.
/// For the two-stage run L/N/dt describe stage 1, which ends at t_switch.
struct ExperimentConfig {
  Experiment experiment = Experiment::FdBackwardFixed;
  Metric metric = Metric::Euclidean;
  double c0 = 0.2;
  double t_start = 1.0;
  double L = 50.0;
  double ds = 0.01;
  int N = 2048;
  double dt = -5e-5;
  double t_end = 0.1;
  std::string bc;
  bool adaptive = false;
  double refine_threshold = 2e-4;
  int max_N = 16384;
  std::vector<double> probes;
  Window window;
  int trace_samples = 400;
  double blowup_factor = 1e3;
  double t_switch = 0.3;
  double stage2_L = 10.0;
  int stage2_N = 1024;
  double stage2_dt = 1e-5;
  bool deterministic = true;
  std::string output;

  /// Effective key = value pairs, in the order of the file format.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Defaults of one experiment (the canonical parameter set).
ExperimentConfig default_config(Experiment e);

/// Flat `key = value` lines, `#` starts a comment. `experiment` is required.
/// Overrides replace file keys before validation. Throws ParseError (with the
/// line number) or ValidationError (naming the key).
ExperimentConfig parse_config(std::string_view text,
                              const std::map<std::string, std::string>& overrides = {});

ExperimentConfig load_config(const std::string& path,
                             const std::map<std::string, std::string>& overrides = {});

/// Re-checks the invariants of a config built in code.
void validate(const ExperimentConfig& cfg);

}  // namespace filament
