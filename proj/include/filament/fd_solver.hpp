#pragma once

#include <span>
#include <utility>
#include <vector>

#include "filament/diagnostics.hpp"
#include "filament/geometry.hpp"
#include "filament/report.hpp"
#include "filament/selfsim.hpp"

namespace filament {

/// Tangent field on a uniform grid; the state of the explicit FD solver.
struct TFieldState {
  UniformGrid grid;
  std::vector<Vec3> T;
  double t = 1.0;
  Metric metric = Metric::Euclidean;
};

enum class FdBcKind { FixedFirstOrder, AsymptoticSecondOrder };

const char* to_string(FdBcKind kind);

struct FdBoundaryCondition {
  FdBcKind kind = FdBcKind::FixedFirstOrder;
  /// FixedFirstOrder reads A only; AsymptoticSecondOrder reads A~ and B~.
  AsymptoticConstants constants;
  double c0 = 0.0;

  static FdBoundaryCondition fixed(const Vec3& at_minus, const Vec3& at_plus);
  static FdBoundaryCondition asymptotic(const AsymptoticConstants& k, double c0);
};

/// Empirical stability bound |dt| <= 0.7 ds^2 of RK4 with centred differences.
inline constexpr double kFdStabilityFactor = 0.7;

/// T_i ^ D+- T_i on interior nodes, zero on the two boundary nodes.
std::vector<Vec3> fd_rhs(const TFieldState& state);

/// Boundary tangents (at -L, at +L) for time t_new.
std::pair<Vec3, Vec3> fd_apply_bc(const TFieldState& state, const FdBoundaryCondition& bc,
                                  double t_new);

/// RK4 stepper with preallocated stage buffers. Boundary nodes stay frozen
/// through the stages, get overwritten from the BC at t + dt, and then every
/// node is renormalized.
class FdIntegrator {
 public:
  explicit FdIntegrator(std::size_t nodes);

  /// Returns false when |dt| exceeds the stability bound (the step is still
  /// taken).
  bool step(TFieldState& state, double dt, const FdBoundaryCondition& bc);

 private:
  std::vector<Vec3> k1_, k2_, k3_, k4_, stage_;
};

/// One RK4 step. A stability warning is appended to `events` when given.
TFieldState fd_step(const TFieldState& state, double dt, const FdBoundaryCondition& bc,
                    std::vector<Event>* events = nullptr);

struct FdRunOptions {
  /// Energy / c(0,t) / peak-curvature trace cadence in steps; 0 picks ~200 samples.
  int trace_every = 0;
  /// Window for the curvature error of each probe.
  Window error_window;
  /// Stop once max curvature exceeds this multiple of c0/sqrt(t) (or is NaN).
  double blowup_factor = 1e3;
  /// Boundary-touch detector for forward runs: outer fraction of the domain
  /// and curvature level relative to c0/sqrt(t).
  double touch_fraction = 0.05;
  double touch_level = 0.1;
};

struct FdRunResult {
  RunReport report;
  TFieldState final_state;
  /// (t, max curvature) at the trace cadence.
  std::vector<std::pair<double, double>> peak_trace;
  bool blew_up = false;
};

/// Backward run from the exact profile at p.t toward t_end < p.t.
FdRunResult fd_run_backward(const SelfSimilarParams& p, const UniformGrid& grid, double dt,
                            FdBcKind bc, double t_end, std::span<const double> probe_times,
                            const FdRunOptions& opts = {});

/// Forward run from the corner datum at t = 0 with fixed boundary values.
FdRunResult fd_run_forward(const SelfSimilarParams& p, const UniformGrid& grid, double dt,
                           double t_end, std::span<const double> probe_times,
                           const FdRunOptions& opts = {});

/// Initial datum of fd_run_backward: profile frames at the grid nodes.
std::vector<FrameTriad> fd_initial_frames(const SelfSimilarParams& p, const UniformGrid& grid);

}  // namespace filament
