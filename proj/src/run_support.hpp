#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace filament::detail {

/// Probe times ordered along the run direction. A probe is due at the first
/// completed step within half a step of it (or past it).
class ProbeSchedule {
 public:
  ProbeSchedule(std::span<const double> probes, double dt)
      : probes_(probes.begin(), probes.end()), dir_(dt < 0.0 ? -1.0 : 1.0) {
    set_dt(dt);
    std::sort(probes_.begin(), probes_.end(),
              [this](double a, double b) { return dir_ * a < dir_ * b; });
  }

  void set_dt(double dt) { half_ = 0.5 * std::abs(dt); }

  bool due(double t) const {
    return next_ < probes_.size() && dir_ * (probes_[next_] - t) <= half_ * (1.0 + 1e-9);
  }

  void pop() { ++next_; }

 private:
  std::vector<double> probes_;
  std::size_t next_ = 0;
  double dir_ = 1.0;
  double half_ = 0.0;
};

}  // namespace filament::detail
