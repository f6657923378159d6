#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "filament/config.hpp"
#include "filament/report.hpp"

namespace filament {

inline constexpr const char* kVersion = "0.1.0";

/// Runs the solver selected by cfg and returns its report. No files.
RunReport execute(const ExperimentConfig& cfg);

struct ExperimentOutput {
  RunReport report;
  std::filesystem::path dir;
  /// Relative to dir; manifest.json last.
  std::vector<std::string> files;
  double wall_seconds = 0.0;
};

/// execute() plus report.json, the CSV observables and manifest.json in
/// out_dir. Solver errors are rethrown with the experiment name prefixed.
ExperimentOutput run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace filament
