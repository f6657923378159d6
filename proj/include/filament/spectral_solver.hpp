#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "filament/chebyshev.hpp"
#include "filament/diagnostics.hpp"
#include "filament/geometry.hpp"
#include "filament/report.hpp"
#include "filament/selfsim.hpp"
#include "filament/tau_solver.hpp"

namespace filament {

/// Projected field z on Chebyshev nodes. values and coeffs describe the same
/// polynomial; dt is the signed step that produced (or will advance) it.
struct ZFieldState {
  ChebyshevGrid grid;
  cvec values;
  cvec coeffs;
  double t = 1.0;
  Metric metric = Metric::Euclidean;
  double dt = 0.0;

  /// Fills coeffs from values.
  static ZFieldState from_values(const ChebyshevGrid& grid, cvec values, double t, Metric m,
                                 double dt);
};

enum class SpectralBcKind { ProjectedSecondOrder, SelfSimilarity, Radiation, FixedValues };

const char* to_string(SpectralBcKind kind);

struct SpectralBC {
  SpectralBcKind kind = SpectralBcKind::ProjectedSecondOrder;
  /// ProjectedSecondOrder only.
  AsymptoticConstants constants;
  double c0 = 0.0;
  /// FixedValues only: z(-L), z(+L).
  cd fixed_minus{};
  cd fixed_plus{};

  static SpectralBC projected(const AsymptoticConstants& k, double c0);
  static SpectralBC self_similarity();
  static SpectralBC radiation(double c0);
  static SpectralBC fixed(cd at_minus, cd at_plus);
};

/// Per-state quantities reused by the step formulas and the diagnostics.
struct StateDerivatives {
  cvec zs_coeffs;          // b_k, b_N = 0
  cvec zs;                 // z_s at the nodes
  cvec nonlinear_coeffs;   // coefficients of -+2i conj(z) z_s^2 / (1 +- |z|^2)
};

/// Largest |b_k| over k in [3N/4, N].
double tail_max(std::span<const cd> b);

/// Dirichlet values (at -L, at +L): stereographic projections of the
/// second-order asymptotic tangents at time t_next.
std::pair<cd, cd> bc_projected_second_order(double t_next, const AsymptoticConstants& k,
                                            double c0, double L, Metric m);

/// Leapfrog form of z_t = -(s/2t) z_s at s = +-L:
///   z^{n+1}(+-L) = z^{n-1}(+-L) -+ (dt L / t^n) z_s^n(+-L)
std::pair<cd, cd> bc_self_similarity(const ZFieldState& n, const ZFieldState& nm1);

/// z_s(+-L) carrying the self-similar flux, at the state's own time:
///   (1 +- |z|^2)/2 (c0/sqrt t) e^{i L^2/4t} e^{-i I(+-L)} z_s(0)/|z_s(0)|,
///   I(s) = int_0^s 2 (y x_s - x y_s) / (+-1 + x^2 + y^2) ds'
std::pair<cd, cd> radiation_slopes(const ZFieldState& state, double c0);

/// Neumann values 2 F(t^n) - F(t^{n-1}) with F from radiation_slopes.
std::pair<cd, cd> bc_radiation(const ZFieldState& n, const ZFieldState& nm1, double c0);

struct RefineOutcome {
  ZFieldState state;
  /// The BDF history must be rebuilt when set.
  bool refined = false;
};

/// Doubles N (coefficients zero-padded) and divides dt by 4 when the top
/// quarter of the derivative spectrum exceeds threshold.
RefineOutcome adaptive_refine(const ZFieldState& state, double threshold);

/// Stepping engine for one polynomial degree: owns the transform plan and
/// the cached implicit solvers.
class SpectralStepper {
 public:
  explicit SpectralStepper(int N);
  ~SpectralStepper();
  SpectralStepper(SpectralStepper&&) noexcept;
  SpectralStepper& operator=(SpectralStepper&&) noexcept;

  int N() const;
  const ChebyshevTransform& transform() const;

  StateDerivatives derive(const ZFieldState& state) const;

  /// Second-order BDF step from (n, n-1) to t^n + dt.
  ZFieldState sbdf2(const ZFieldState& n, const StateDerivatives& dn, const ZFieldState& nm1,
                    const StateDerivatives& dnm1, const SpectralBC& bc);

  /// Backward Euler steps of dt and 2 x dt/2, Richardson-combined.
  ZFieldState bootstrap(const ZFieldState& s0, const StateDerivatives& d0, const SpectralBC& bc);

  /// One semi-implicit Backward Euler step of size h.
  ZFieldState euler(const ZFieldState& s, const StateDerivatives& d, double h,
                    const SpectralBC& bc);

  /// Nodal z_ss of a state.
  cvec second_derivative(const StateDerivatives& d, double L) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

ZFieldState sbdf2_step(const ZFieldState& n, const ZFieldState& nm1, const SpectralBC& bc);
ZFieldState bootstrap_first_step(const ZFieldState& s0, const SpectralBC& bc);

/// Exact self-similar datum at time p.t on the Chebyshev nodes.
ZFieldState exact_profile_state(const SelfSimilarParams& p, const ChebyshevGrid& grid, double dt);

/// Step datum of the forward problem at t = 0: a+ on s > 0 (indices below
/// N/2, since index 0 is s = +L), 0 at s = 0, a- on s < 0.
ZFieldState step_datum_state(double c0, Metric m, const ChebyshevGrid& grid, double dt);

/// Projected corner values (a-, a+).
std::pair<cd, cd> projected_corner(double c0, Metric m);

struct SpectralRunOptions {
  bool adaptive = false;
  double refine_threshold = 2e-4;
  int max_N = 16384;
  /// Trace samples over the run (energy, c(0,t), peak curvature).
  int trace_samples = 400;
  Window error_window;
  double blowup_factor = 1e3;
  bool detect_touch = false;
  double touch_fraction = 0.05;
  double touch_level = 0.1;
};

struct SpectralRunResult {
  RunReport report;
  ZFieldState final_state;
  std::vector<std::pair<double, double>> peak_trace;
  bool blew_up = false;
};

/// Time loop: bootstrap, SBDF2, optional refinement after every step.
/// c0 sets the exact curvature law used by the error metrics.
SpectralRunResult spectral_run(ZFieldState initial, const SpectralBC& bc, double c0,
                               double t_end, std::span<const double> probe_times,
                               const SpectralRunOptions& opts = {});

/// Run from the exact profile at p.t in either time direction. The
/// projected boundary constants are taken from the initial state.
SpectralRunResult spectral_run_from_profile(const SelfSimilarParams& p, const ChebyshevGrid& grid,
                                            double dt, SpectralBcKind bc, double t_end,
                                            std::span<const double> probe_times,
                                            const SpectralRunOptions& opts = {});

SpectralRunResult spectral_run_backward(const SelfSimilarParams& p, const ChebyshevGrid& grid,
                                        double dt, SpectralBcKind bc, double t_end,
                                        std::span<const double> probe_times,
                                        const SpectralRunOptions& opts = {});

struct ForwardStage {
  double L = 50.0;
  int N = 16384;
  double dt = 1e-5;
  double t_end = 0.3;
};

struct TwoStageResult {
  SpectralRunResult stage1;
  SpectralRunResult stage2;
  /// Both stages in one report; stage-1 probes are measured on
  /// [-stage2.L, stage2.L].
  RunReport combined;
};

/// Stage 1: step datum with fixed Dirichlet values up to stage1.t_end.
/// Stage 2: the stage-1 solution interpolated onto the smaller grid,
/// continued under the radiation condition.
TwoStageResult spectral_run_forward_two_stage(const SelfSimilarParams& p, const ForwardStage& stage1,
                                              const ForwardStage& stage2,
                                              std::span<const double> probes1,
                                              std::span<const double> probes2,
                                              const SpectralRunOptions& opts = {});

}  // namespace filament
