#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "filament/diagnostics.hpp"

namespace filament {

/// Snapshot of a run at one probe time.
struct ProbeRecord {
  double t = 0.0;
  int N = 0;
  std::vector<double> s;
  std::vector<double> curvature;
  double c_origin = 0.0;
  double energy = 0.0;
  CurvatureError error;
  /// Spectral runs only.
  std::vector<double> torsion;
  std::vector<double> spectrum;  // |a_k|
};

struct RefinementEvent {
  double t = 0.0;
  int N = 0;
  double dt = 0.0;
};

struct Event {
  double t = 0.0;
  std::string kind;
  std::string message;
};

struct RunReport {
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::string solver;
  std::string bc;
  std::vector<ProbeRecord> probes;
  std::vector<std::pair<double, double>> energy_trace;   // (t, energy)
  std::vector<std::pair<double, double>> origin_trace;   // (t, c(0,t))
  std::vector<Event> events;
  std::vector<RefinementEvent> refinements;
  std::optional<double> boundary_touch_time;
  std::size_t steps = 0;
  double t_final = 0.0;

  bool fractal_regime() const { return boundary_touch_time.has_value(); }
  const ProbeRecord* probe_near(double t) const;
};

nlohmann::ordered_json to_json(const RunReport& r);

/// Shortest round-trip decimal form ("%.17g").
std::string format_number(double v);

/// Writes a CSV with a header row; values printed with 17 significant digits.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// report.json plus the per-probe and trace CSV files. Returns the files
/// written, relative to dir.
std::vector<std::string> write_report_files(const RunReport& r, const std::filesystem::path& dir);

}  // namespace filament
