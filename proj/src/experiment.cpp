#include "filament/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "filament/errors.hpp"
#include "filament/fd_solver.hpp"
#include "filament/spectral_solver.hpp"

namespace filament {

namespace {

SpectralBcKind spectral_bc(const std::string& name) {
  if (name == "projected_second_order") return SpectralBcKind::ProjectedSecondOrder;
  if (name == "self_similarity") return SpectralBcKind::SelfSimilarity;
  if (name == "radiation") return SpectralBcKind::Radiation;
  throw Error(ErrorKind::ValidationError, "key 'bc': unknown spectral boundary condition");
}

SpectralRunOptions spectral_options(const ExperimentConfig& c) {
  SpectralRunOptions o;
  o.adaptive = c.adaptive;
  o.refine_threshold = c.refine_threshold;
  o.max_N = c.max_N;
  o.trace_samples = c.trace_samples;
  o.error_window = c.window;
  o.blowup_factor = c.blowup_factor;
  return o;
}

}  // namespace

RunReport execute(const ExperimentConfig& c) {
  validate(c);
  const SelfSimilarParams p{c.c0, c.t_start, c.metric};
  switch (c.experiment) {
    case Experiment::FdBackwardFixed:
    case Experiment::FdBackwardAsymptotic:
    case Experiment::FdForward: {
      FdRunOptions o;
      o.error_window = c.window;
      o.blowup_factor = c.blowup_factor;
      const auto grid = UniformGrid::from_spacing(c.L, c.ds);
      const long steps = std::max(1L, std::lround(std::abs((c.t_end - c.t_start) / c.dt)));
      o.trace_every = static_cast<int>(std::max(1L, steps / c.trace_samples));
      if (c.experiment == Experiment::FdForward) {
        return fd_run_forward(p, grid, c.dt, c.t_end, c.probes, o).report;
      }
      const FdBcKind kind = c.experiment == Experiment::FdBackwardFixed
                                ? FdBcKind::FixedFirstOrder
                                : FdBcKind::AsymptoticSecondOrder;
      return fd_run_backward(p, grid, c.dt, kind, c.t_end, c.probes, o).report;
    }
    case Experiment::SpectralBackward:
    case Experiment::SpectralAdaptiveBackward:
    case Experiment::SpectralForwardProfile: {
      const auto grid = ChebyshevGrid::make(c.L, c.N);
      return spectral_run_from_profile(p, grid, c.dt, spectral_bc(c.bc), c.t_end, c.probes,
                                       spectral_options(c))
          .report;
    }
    case Experiment::SpectralForwardTwoStage: {
      std::vector<double> probes1, probes2;
      for (double t : c.probes) (t <= c.t_switch ? probes1 : probes2).push_back(t);
      const ForwardStage s1{c.L, c.N, c.dt, c.t_switch};
      const ForwardStage s2{c.stage2_L, c.stage2_N, c.stage2_dt, c.t_end};
      return spectral_run_forward_two_stage(p, s1, s2, probes1, probes2, spectral_options(c))
          .combined;
    }
  }
  throw Error(ErrorKind::ValidationError, "key 'experiment': unknown experiment");
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  ExperimentOutput out;
  out.dir = out_dir;
  const auto start = std::chrono::steady_clock::now();
  try {
    out.report = execute(cfg);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ValidationError || e.kind() == ErrorKind::ParseError) throw;
    throw Error(e.kind(), std::string(to_string(cfg.experiment)) + ": " + e.what());
  }
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::filesystem::create_directories(out_dir);
  out.files = write_report_files(out.report, out_dir);

  nlohmann::ordered_json manifest;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : cfg.echo()) config[k] = v;
  manifest["config"] = std::move(config);
  manifest["version"] = kVersion;
  manifest["files"] = out.files;
  manifest["wall_time_seconds"] = out.wall_seconds;
  std::ofstream(out_dir / "manifest.json") << manifest.dump(1) << '\n';
  out.files.push_back("manifest.json");
  return out;
}

}  // namespace filament
