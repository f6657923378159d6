#include "filament/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "filament/errors.hpp"

namespace filament {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const ProbeRecord* RunReport::probe_near(double t) const {
  const ProbeRecord* best = nullptr;
  for (const auto& p : probes) {
    if (best == nullptr || std::abs(p.t - t) < std::abs(best->t - t)) best = &p;
  }
  return best;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string probe_tag(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", t);
  return buf;
}

ordered_json error_json(const CurvatureError& e) {
  return {{"max_abs", e.max_abs}, {"l2", e.l2}, {"at_origin", e.at_origin}};
}

}  // namespace

ordered_json to_json(const RunReport& r) {
  ordered_json j;
  j["solver"] = r.solver;
  j["bc"] = r.bc;
  j["params"] = r.params;
  j["steps"] = r.steps;
  j["t_final"] = r.t_final;
  auto& probes = j["probes"] = ordered_json::array();
  for (const auto& p : r.probes) {
    ordered_json pj;
    pj["t"] = p.t;
    pj["N"] = p.N;
    pj["c_origin"] = p.c_origin;
    pj["energy"] = p.energy;
    pj["error"] = error_json(p.error);
    pj["s"] = p.s;
    pj["curvature"] = p.curvature;
    if (!p.torsion.empty()) pj["torsion"] = p.torsion;
    probes.push_back(std::move(pj));
  }
  auto& spectra = j["spectra"] = ordered_json::array();
  for (const auto& p : r.probes) {
    if (!p.spectrum.empty()) spectra.push_back({{"t", p.t}, {"abs_coeffs", p.spectrum}});
  }
  auto& trace = j["energy_trace"] = ordered_json::array();
  for (const auto& [t, e] : r.energy_trace) trace.push_back({t, e});
  auto& origin = j["origin_trace"] = ordered_json::array();
  for (const auto& [t, c] : r.origin_trace) origin.push_back({t, c});
  auto& events = j["events"] = ordered_json::array();
  for (const auto& e : r.events) {
    events.push_back({{"t", e.t}, {"kind", e.kind}, {"message", e.message}});
  }
  auto& refinements = j["refinements"] = ordered_json::array();
  for (const auto& e : r.refinements) refinements.push_back({{"t", e.t}, {"N", e.N}, {"dt", e.dt}});
  j["boundary_touch_time"] =
      r.boundary_touch_time ? ordered_json(*r.boundary_touch_time) : ordered_json(nullptr);
  j["fractal_regime"] = r.fractal_regime();
  return j;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot open " + path.string());
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out << (c ? "," : "") << format_number(columns[c][r]);
    }
    out << '\n';
  }
}

std::vector<std::string> write_report_files(const RunReport& r, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<std::string> written;
  {
    std::ofstream out(dir / "report.json");
    out << to_json(r).dump(1) << '\n';
    written.push_back("report.json");
  }
  for (const auto& p : r.probes) {
    const std::string tag = probe_tag(p.t);
    const std::string name = "curvature_t" + tag + ".csv";
    write_csv(dir / name, {"s", "c"}, {p.s, p.curvature});
    written.push_back(name);
    if (!p.torsion.empty()) {
      const std::string tname = "torsion_t" + tag + ".csv";
      write_csv(dir / tname, {"s", "tau"}, {p.s, p.torsion});
      written.push_back(tname);
    }
    if (!p.spectrum.empty()) {
      std::vector<double> k(p.spectrum.size());
      for (std::size_t i = 0; i < k.size(); ++i) k[i] = static_cast<double>(i);
      const std::string sname = "spectrum_t" + tag + ".csv";
      write_csv(dir / sname, {"k", "abs_a_k"}, {k, p.spectrum});
      written.push_back(sname);
    }
  }
  auto split = [](const std::vector<std::pair<double, double>>& v) {
    std::vector<std::vector<double>> cols(2);
    for (const auto& [a, b] : v) {
      cols[0].push_back(a);
      cols[1].push_back(b);
    }
    return cols;
  };
  write_csv(dir / "energy.csv", {"t", "energy"}, split(r.energy_trace));
  written.push_back("energy.csv");
  write_csv(dir / "curvature_origin.csv", {"t", "c_origin"}, split(r.origin_trace));
  written.push_back("curvature_origin.csv");
  return written;
}

}  // namespace filament
