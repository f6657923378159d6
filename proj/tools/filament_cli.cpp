#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "filament/config.hpp"
#include "filament/errors.hpp"
#include "filament/experiment.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

// Leftover "--key value" / "--key=value" arguments become config overrides.
std::map<std::string, std::string> parse_overrides(const std::vector<std::string>& extras) {
  std::map<std::string, std::string> out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& arg = extras[i];
    if (arg.rfind("--", 0) != 0 || arg.size() <= 2) {
      throw filament::Error(filament::ErrorKind::ValidationError,
                            "unexpected argument '" + arg + "'");
    }
    const std::string body = arg.substr(2);
    const auto eq = body.find('=');
    if (eq != std::string::npos) {
      out[body.substr(0, eq)] = body.substr(eq + 1);
    } else if (i + 1 < extras.size()) {
      out[body] = extras[++i];
    } else {
      throw filament::Error(filament::ErrorKind::ValidationError,
                            "key '" + body + "': missing value");
    }
  }
  return out;
}

std::filesystem::path output_dir(const filament::ExperimentConfig& cfg, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (!cfg.output.empty()) return cfg.output;
  const char* root = std::getenv("FILAMENT_OUT");
  const std::filesystem::path base = root != nullptr && *root != '\0' ? root : "out";
  return base / filament::to_string(cfg.experiment);
}

void summarize(const filament::ExperimentOutput& out) {
  const auto& r = out.report;
  std::printf("solver %s, bc %s: %zu steps, t = %.6g\n", r.solver.c_str(), r.bc.c_str(), r.steps,
              r.t_final);
  for (const auto& p : r.probes) {
    std::printf("  t = %-12.6g N = %-6d c(0,t) = %-12.8g max |c - c0/sqrt(t)| = %.3e\n", p.t,
                p.N, p.c_origin, p.error.max_abs);
  }
  for (const auto& e : r.refinements) {
    std::printf("  refined at t = %.6g to N = %d, dt = %.3g\n", e.t, e.N, e.dt);
  }
  for (const auto& e : r.events) {
    std::printf("  event %s at t = %.6g: %s\n", e.kind.c_str(), e.t, e.message.c_str());
  }
  std::printf("wrote %zu files to %s (%.1f s)\n", out.files.size(), out.dir.string().c_str(),
              out.wall_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-similar vortex filament experiments"};
  app.require_subcommand(1);

  std::string run_config, out_flag;
  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("config", run_config, "config file")->required();
  run->add_option("--out", out_flag, "output directory");
  run->allow_extras();
  run->footer("Any other --key value pair overrides the config file.");

  auto* list = app.add_subcommand("list-experiments", "list the canonical experiments");

  std::string validate_config;
  auto* check = app.add_subcommand("validate", "parse and validate a config file");
  check->add_option("config", validate_config, "config file")->required();
  check->allow_extras();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (list->parsed()) {
      for (auto e : filament::all_experiments()) {
        std::printf("%-26s %s\n", filament::to_string(e), filament::describe(e));
      }
      return 0;
    }
    if (check->parsed()) {
      const auto cfg = filament::load_config(validate_config, parse_overrides(check->remaining()));
      for (const auto& [k, v] : cfg.echo()) std::printf("%s = %s\n", k.c_str(), v.c_str());
      return 0;
    }
    const auto cfg = filament::load_config(run_config, parse_overrides(run->remaining()));
    summarize(filament::run_experiment(cfg, output_dir(cfg, out_flag)));
    return 0;
  } catch (const filament::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const bool config_error = e.kind() == filament::ErrorKind::ValidationError ||
                              e.kind() == filament::ErrorKind::ParseError;
    return config_error ? kExitValidation : kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
}
