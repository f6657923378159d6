#include "filament/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "filament/errors.hpp"
#include "filament/report.hpp"
#include "filament/selfsim.hpp"

namespace filament {

namespace {

struct ExperimentInfo {
  Experiment e;
  const char* name;
  const char* description;
};

constexpr ExperimentInfo kExperiments[] = {
    {Experiment::FdBackwardFixed, "FdBackwardFixed",
     "finite differences toward t = 0 from the exact profile, fixed boundary tangents"},
    {Experiment::FdBackwardAsymptotic, "FdBackwardAsymptotic",
     "finite differences toward t = 0, second-order asymptotic boundary tangents"},
    {Experiment::FdForward, "FdForward",
     "finite differences from the corner datum at t = 0, fixed boundary tangents"},
    {Experiment::SpectralBackward, "SpectralBackward",
     "Chebyshev SBDF2 toward t = 0 at fixed N"},
    {Experiment::SpectralAdaptiveBackward, "SpectralAdaptiveBackward",
     "Chebyshev SBDF2 toward t = 0 with node doubling"},
    {Experiment::SpectralForwardProfile, "SpectralForwardProfile",
     "Chebyshev SBDF2 forward from the exact profile, radiation boundary condition"},
    {Experiment::SpectralForwardTwoStage, "SpectralForwardTwoStage",
     "Chebyshev SBDF2 from the step datum, restarted on a smaller window with the radiation "
     "condition"},
};

constexpr const char* kTwoStageBc = "fixed_values+radiation";

bool is_fd(Experiment e) {
  return e == Experiment::FdBackwardFixed || e == Experiment::FdBackwardAsymptotic ||
         e == Experiment::FdForward;
}

bool is_backward(Experiment e) {
  return e == Experiment::FdBackwardFixed || e == Experiment::FdBackwardAsymptotic ||
         e == Experiment::SpectralBackward || e == Experiment::SpectralAdaptiveBackward;
}

bool starts_at_zero(Experiment e) {
  return e == Experiment::FdForward || e == Experiment::SpectralForwardTwoStage;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void invalid(const std::string& key, const std::string& why) {
  throw Error(ErrorKind::ValidationError, "key '" + key + "': " + why);
}

struct Entry {
  std::string value;
  int line = 0;  // 0 for overrides
};

[[noreturn]] void bad_value(const std::string& key, const Entry& entry, const char* expected) {
  if (entry.line > 0) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(entry.line) + ": '" + key +
                                           "' expects " + expected + ", got '" + entry.value +
                                           "'");
  }
  invalid(key, std::string("expects ") + expected + ", got '" + entry.value + "'");
}

double to_double(const std::string& key, const Entry& entry, bool allow_inf = false) {
  const std::string& v = entry.value;
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || std::isnan(out) ||
      (!allow_inf && std::isinf(out))) {
    bad_value(key, entry, "a number");
  }
  return out;
}

int to_int(const std::string& key, const Entry& entry) {
  const std::string& v = entry.value;
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, entry, "an integer");
  return out;
}

bool to_bool(const std::string& key, const Entry& entry) {
  const std::string& v = entry.value;
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  bad_value(key, entry, "true or false");
}

std::vector<double> to_list(const std::string& key, const Entry& entry, bool allow_inf = false) {
  std::vector<double> out;
  if (trim(entry.value).empty()) return out;
  std::stringstream ss(entry.value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(to_double(key, {trim(item), entry.line}, allow_inf));
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_number(v[i]);
  }
  return out;
}

void apply(ExperimentConfig& cfg, const std::string& key, const Entry& entry) {
  if (key == "experiment") return;
  if (key == "metric") {
    if (entry.value == "euclidean") cfg.metric = Metric::Euclidean;
    else if (entry.value == "hyperbolic") cfg.metric = Metric::Hyperbolic;
    else bad_value(key, entry, "euclidean or hyperbolic");
  } else if (key == "c0") {
    cfg.c0 = to_double(key, entry);
  } else if (key == "t_start") {
    cfg.t_start = to_double(key, entry);
  } else if (key == "L") {
    cfg.L = to_double(key, entry);
  } else if (key == "ds") {
    cfg.ds = to_double(key, entry);
  } else if (key == "N") {
    cfg.N = to_int(key, entry);
  } else if (key == "dt") {
    cfg.dt = to_double(key, entry);
  } else if (key == "t_end") {
    cfg.t_end = to_double(key, entry);
  } else if (key == "bc") {
    cfg.bc = entry.value;
  } else if (key == "adaptive") {
    cfg.adaptive = to_bool(key, entry);
  } else if (key == "refine_threshold") {
    cfg.refine_threshold = to_double(key, entry);
  } else if (key == "max_N") {
    cfg.max_N = to_int(key, entry);
  } else if (key == "probes") {
    cfg.probes = to_list(key, entry);
  } else if (key == "window") {
    const auto w = to_list(key, entry, true);
    if (w.size() != 2) bad_value(key, entry, "two numbers 'lo, hi'");
    cfg.window = {w[0], w[1]};
  } else if (key == "trace_samples") {
    cfg.trace_samples = to_int(key, entry);
  } else if (key == "blowup_factor") {
    cfg.blowup_factor = to_double(key, entry);
  } else if (key == "t_switch") {
    cfg.t_switch = to_double(key, entry);
  } else if (key == "stage2_L") {
    cfg.stage2_L = to_double(key, entry);
  } else if (key == "stage2_N") {
    cfg.stage2_N = to_int(key, entry);
  } else if (key == "stage2_dt") {
    cfg.stage2_dt = to_double(key, entry);
  } else if (key == "deterministic") {
    cfg.deterministic = to_bool(key, entry);
  } else if (key == "output") {
    cfg.output = entry.value;
  } else {
    invalid(key, "unknown key");
  }
}

void check_degree(const std::string& key, int N) {
  if (N < 4 || N % 2 != 0) invalid(key, "needs an even value >= 4");
}

}  // namespace

const char* to_string(Experiment e) {
  for (const auto& info : kExperiments) {
    if (info.e == e) return info.name;
  }
  return "unknown";
}

const char* describe(Experiment e) {
  for (const auto& info : kExperiments) {
    if (info.e == e) return info.description;
  }
  return "";
}

std::optional<Experiment> experiment_from_string(std::string_view name) {
  for (const auto& info : kExperiments) {
    if (name == info.name) return info.e;
  }
  return std::nullopt;
}

const std::vector<Experiment>& all_experiments() {
  static const std::vector<Experiment> list = [] {
    std::vector<Experiment> v;
    for (const auto& info : kExperiments) v.push_back(info.e);
    return v;
  }();
  return list;
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  switch (e) {
    case Experiment::FdBackwardFixed:
    case Experiment::FdBackwardAsymptotic:
      c.L = 50.0;
      c.ds = 0.01;
      c.dt = -5e-5;
      c.t_end = 0.1;
      c.bc = e == Experiment::FdBackwardFixed ? "fixed_first_order" : "asymptotic_second_order";
      c.probes = {0.75, 0.5, 0.25, 0.1};
      break;
    case Experiment::FdForward:
      c.t_start = 0.0;
      c.L = 50.0;
      c.ds = 0.01;
      c.dt = 5e-5;
      c.t_end = 0.25;
      c.bc = "fixed_first_order";
      for (int i = 1; i <= 10; ++i) c.probes.push_back(0.025 * i);
      break;
    case Experiment::SpectralBackward:
      c.L = 10.0;
      c.N = 2048;
      c.dt = -1e-6;
      c.t_end = 0.03;
      c.bc = "projected_second_order";
      c.probes = {0.05, 0.04, 0.03};
      break;
    case Experiment::SpectralAdaptiveBackward:
      c.L = 10.0;
      c.N = 1024;
      c.dt = -2e-6;
      c.t_end = 2.67e-3;
      c.bc = "projected_second_order";
      c.adaptive = true;
      c.refine_threshold = 2e-4;
      c.max_N = 16384;
      c.probes = {0.5, 0.1, 0.05, 0.01, 4.07e-3, 3.05e-3, 2.67e-3};
      break;
    case Experiment::SpectralForwardProfile:
      c.L = 10.0;
      c.N = 1024;
      c.dt = 1e-5;
      c.t_end = 2.0;
      c.bc = "radiation";
      c.probes = {1.25, 1.5, 1.75, 2.0};
      break;
    case Experiment::SpectralForwardTwoStage:
      c.t_start = 0.0;
      c.L = 50.0;
      c.N = 16384;
      c.dt = 1e-5;
      c.t_switch = 0.3;
      c.stage2_L = 10.0;
      c.stage2_N = 1024;
      c.stage2_dt = 1e-5;
      c.t_end = 1.5;
      c.bc = kTwoStageBc;
      c.window = {-10.0, 10.0};
      c.probes = {0.1, 0.2, 0.3, 0.5, 1.0, 1.5};
      break;
  }
  return c;
}

void validate(const ExperimentConfig& c) {
  const Experiment e = c.experiment;
  if (!(c.c0 >= 0.0)) invalid("c0", "must be >= 0");
  if (!(c.L > 0.0)) invalid("L", "must be > 0");
  if (c.dt == 0.0) invalid("dt", "must be non-zero");
  if (is_backward(e) && !(c.dt < 0.0)) invalid("dt", "must be negative for a backward run");
  if (!is_backward(e) && !(c.dt > 0.0)) invalid("dt", "must be positive for a forward run");

  if (starts_at_zero(e)) {
    if (c.t_start != 0.0) invalid("t_start", "this experiment starts from the corner at t = 0");
  } else if (!(c.t_start > 0.0)) {
    invalid("t_start", "must be > 0");
  }
  if (is_backward(e)) {
    if (!(c.t_end > 0.0 && c.t_end < c.t_start)) invalid("t_end", "must lie in (0, t_start)");
  } else if (!(c.t_end > c.t_start)) {
    invalid("t_end", "must exceed t_start");
  }

  if (is_fd(e)) {
    if (!(c.ds > 0.0)) invalid("ds", "must be > 0");
    try {
      (void)UniformGrid::from_spacing(c.L, c.ds);
    } catch (const Error& err) {
      invalid("ds", err.what());
    }
  } else {
    check_degree("N", c.N);
  }

  switch (e) {
    case Experiment::FdBackwardFixed:
    case Experiment::FdForward:
      if (c.bc != "fixed_first_order") invalid("bc", "this experiment uses fixed_first_order");
      break;
    case Experiment::FdBackwardAsymptotic:
      if (c.bc != "asymptotic_second_order") {
        invalid("bc", "this experiment uses asymptotic_second_order");
      }
      break;
    case Experiment::SpectralBackward:
    case Experiment::SpectralAdaptiveBackward:
    case Experiment::SpectralForwardProfile:
      if (c.bc != "projected_second_order" && c.bc != "self_similarity" && c.bc != "radiation") {
        invalid("bc", "expects projected_second_order, self_similarity or radiation");
      }
      break;
    case Experiment::SpectralForwardTwoStage:
      if (c.bc != kTwoStageBc) invalid("bc", std::string("this experiment uses ") + kTwoStageBc);
      if (!(c.t_switch > 0.0)) invalid("t_switch", "must be > 0");
      if (!(c.t_end >= c.t_switch)) invalid("t_end", "must be >= t_switch");
      if (!(c.stage2_L > 0.0 && c.stage2_L <= c.L)) invalid("stage2_L", "must lie in (0, L]");
      check_degree("stage2_N", c.stage2_N);
      if (!(c.stage2_dt > 0.0)) invalid("stage2_dt", "must be positive");
      break;
  }

  if (c.adaptive && is_fd(e)) invalid("adaptive", "only spectral experiments refine");
  if (!(c.refine_threshold > 0.0)) invalid("refine_threshold", "must be > 0");
  if (!is_fd(e) && c.max_N < c.N) invalid("max_N", "must be >= N");
  if (c.trace_samples < 1) invalid("trace_samples", "must be >= 1");
  if (!(c.blowup_factor > 1.0)) invalid("blowup_factor", "must be > 1");
  if (!(c.window.lo < c.window.hi)) invalid("window", "needs lo < hi");

  const double lo = std::min(c.t_start, c.t_end);
  const double hi = std::max(c.t_start, c.t_end);
  for (std::size_t i = 0; i < c.probes.size(); ++i) {
    if (!(c.probes[i] >= lo && c.probes[i] <= hi)) {
      invalid("probes", "time " + format_number(c.probes[i]) + " is outside the run");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (c.probes[j] == c.probes[i]) invalid("probes", "duplicate time");
    }
  }
}

ExperimentConfig parse_config(std::string_view text,
                              const std::map<std::string, std::string>& overrides) {
  std::vector<std::pair<std::string, Entry>> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": empty key");
    }
    for (const auto& [k, _] : entries) {
      if (k == key) {
        throw Error(ErrorKind::ParseError,
                    "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
      }
    }
    entries.emplace_back(std::move(key), Entry{trim(line.substr(eq + 1)), line_no});
  }
  for (const auto& [key, value] : overrides) {
    auto it = std::find_if(entries.begin(), entries.end(),
                           [&](const auto& kv) { return kv.first == key; });
    if (it != entries.end()) it->second = Entry{value, 0};
    else entries.emplace_back(key, Entry{value, 0});
  }

  auto exp_it = std::find_if(entries.begin(), entries.end(),
                             [](const auto& kv) { return kv.first == "experiment"; });
  if (exp_it == entries.end()) invalid("experiment", "missing");
  const auto e = experiment_from_string(exp_it->second.value);
  if (!e) invalid("experiment", "unknown experiment '" + exp_it->second.value + "'");

  ExperimentConfig cfg = default_config(*e);
  for (const auto& [key, entry] : entries) apply(cfg, key, entry);
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path,
                             const std::map<std::string, std::string>& overrides) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::ValidationError, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  auto add = [&](const char* k, std::string v) { out.emplace_back(k, std::move(v)); };
  add("experiment", to_string(experiment));
  add("metric", to_string(metric));
  add("c0", format_number(c0));
  add("t_start", format_number(t_start));
  add("L", format_number(L));
  if (is_fd(experiment)) add("ds", format_number(ds));
  else add("N", std::to_string(N));
  add("dt", format_number(dt));
  add("t_end", format_number(t_end));
  add("bc", bc);
  if (!is_fd(experiment)) {
    add("adaptive", adaptive ? "true" : "false");
    add("refine_threshold", format_number(refine_threshold));
    add("max_N", std::to_string(max_N));
  }
  add("probes", join(probes));
  add("window", format_number(window.lo) + ", " + format_number(window.hi));
  add("trace_samples", std::to_string(trace_samples));
  add("blowup_factor", format_number(blowup_factor));
  if (experiment == Experiment::SpectralForwardTwoStage) {
    add("t_switch", format_number(t_switch));
    add("stage2_L", format_number(stage2_L));
    add("stage2_N", std::to_string(stage2_N));
    add("stage2_dt", format_number(stage2_dt));
  }
  add("deterministic", deterministic ? "true" : "false");
  if (!output.empty()) add("output", output);
  return out;
}

}  // namespace filament
