#include "filament/spectral_solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "filament/errors.hpp"
#include "filament/kernels.hpp"
#include "run_support.hpp"

namespace filament {

namespace {

constexpr cd kI{0.0, 1.0};
constexpr double kDiscGuard = 1e-10;

void check_disc(const cvec& values, Metric m, double t) {
  if (m != Metric::Hyperbolic) return;
  for (const auto& v : values) {
    if (!(std::abs(v) < 1.0 - kDiscGuard)) {
      std::ostringstream msg;
      msg << "|z| reached the unit circle at t = " << t;
      throw Error(ErrorKind::DiscBoundary, msg.str());
    }
  }
}

}  // namespace

ZFieldState ZFieldState::from_values(const ChebyshevGrid& grid, cvec values, double t, Metric m,
                                     double dt) {
  if (values.size() != grid.size()) {
    throw Error(ErrorKind::BadLength, "state values do not match the grid");
  }
  ZFieldState s{grid, std::move(values), {}, t, m, dt};
  s.coeffs = cheb_transform(s.values);
  return s;
}

const char* to_string(SpectralBcKind kind) {
  switch (kind) {
    case SpectralBcKind::ProjectedSecondOrder: return "projected_second_order";
    case SpectralBcKind::SelfSimilarity: return "self_similarity";
    case SpectralBcKind::Radiation: return "radiation";
    case SpectralBcKind::FixedValues: return "fixed_values";
  }
  return "unknown";
}

SpectralBC SpectralBC::projected(const AsymptoticConstants& k, double c0) {
  SpectralBC bc;
  bc.kind = SpectralBcKind::ProjectedSecondOrder;
  bc.constants = k;
  bc.c0 = c0;
  return bc;
}

SpectralBC SpectralBC::self_similarity() {
  SpectralBC bc;
  bc.kind = SpectralBcKind::SelfSimilarity;
  return bc;
}

SpectralBC SpectralBC::radiation(double c0) {
  SpectralBC bc;
  bc.kind = SpectralBcKind::Radiation;
  bc.c0 = c0;
  return bc;
}

SpectralBC SpectralBC::fixed(cd at_minus, cd at_plus) {
  SpectralBC bc;
  bc.kind = SpectralBcKind::FixedValues;
  bc.fixed_minus = at_minus;
  bc.fixed_plus = at_plus;
  return bc;
}

double tail_max(std::span<const cd> b) {
  if (b.size() < 2) return 0.0;
  const std::size_t N = b.size() - 1;
  double best = 0.0;
  for (std::size_t k = (3 * N) / 4; k <= N; ++k) best = std::max(best, std::abs(b[k]));
  return best;
}

std::pair<cd, cd> bc_projected_second_order(double t_next, const AsymptoticConstants& k,
                                            double c0, double L, Metric m) {
  const Vec3 minus = second_order_boundary_tangent(k, Side::Minus, c0, t_next, L, m);
  const Vec3 plus = second_order_boundary_tangent(k, Side::Plus, c0, t_next, L, m);
  return {stereo_project(minus, m), stereo_project(plus, m)};
}

namespace {

// Boundary slope of a state: index 0 is +L, index N is -L.
std::pair<cd, cd> end_slopes(const StateDerivatives& d) { return {d.zs.back(), d.zs.front()}; }
std::pair<cd, cd> end_values(const ZFieldState& s) { return {s.values.back(), s.values.front()}; }

std::pair<cd, cd> self_similarity_rows(const ZFieldState& n, const StateDerivatives& dn,
                                       const ZFieldState& nm1) {
  const double L = n.grid.L;
  const double factor = n.dt * L / n.t;
  const auto [zs_minus, zs_plus] = end_slopes(dn);
  const auto [z_minus, z_plus] = end_values(nm1);
  return {z_minus + factor * zs_minus, z_plus - factor * zs_plus};
}

std::pair<cd, cd> radiation_slopes_impl(const ZFieldState& s, const StateDerivatives& d,
                                        const ChebyshevTransform& tr, double c0) {
  const double sgn = sign(s.metric);
  const std::size_t n = s.values.size();
  cvec q(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = s.values[i].real();
    const double y = s.values[i].imag();
    const double xs = d.zs[i].real();
    const double ys = d.zs[i].imag();
    q[i] = 2.0 * (y * xs - x * ys) / (sgn + x * x + y * y);
  }
  tr.forward(q, q);
  const cvec A = cheb_antiderivative(q, s.grid.L);
  const cd at_zero = cheb_value_at_zero(A);
  const double I_plus = (cheb_value_at_plus_one(A) - at_zero).real();
  const double I_minus = (cheb_value_at_minus_one(A) - at_zero).real();

  const cd zs0 = d.zs[n / 2];
  const cd phase0 = std::abs(zs0) > 0.0 ? zs0 / std::abs(zs0) : cd{1.0};
  const double L = s.grid.L;
  const cd amp = (c0 / std::sqrt(s.t)) * std::exp(kI * (L * L / (4.0 * s.t))) * phase0;
  const auto [z_minus, z_plus] = end_values(s);
  return {0.5 * (1.0 + sgn * std::norm(z_minus)) * amp * std::exp(-kI * I_minus),
          0.5 * (1.0 + sgn * std::norm(z_plus)) * amp * std::exp(-kI * I_plus)};
}

}  // namespace

struct SpectralStepper::Impl {
  explicit Impl(int n) : N(n), transform(n) {}

  int N;
  ChebyshevTransform transform;
  // A handful of step sizes recur (dt, dt/2, 3/(2dt)); keep their solvers.
  std::vector<TauHelmholtzSolver> solvers;

  const TauHelmholtzSolver& solver(double L, double sigma) {
    for (const auto& s : solvers) {
      if (s.sigma() == sigma && s.L() == L) return s;
    }
    if (solvers.size() >= 4) solvers.erase(solvers.begin());
    solvers.emplace_back(N, L, sigma);
    return solvers.back();
  }

  ZFieldState finish(const ZFieldState& like, cvec coeffs, double t, double dt) const {
    spectral_filter_inplace(coeffs);
    ZFieldState out{like.grid, cvec(coeffs.size()), std::move(coeffs), t, like.metric, dt};
    transform.inverse(out.coeffs, out.values);
    check_disc(out.values, out.metric, t);
    return out;
  }

  BoundaryRows euler_rows(const ZFieldState& s, const StateDerivatives& d, double h,
                          const SpectralBC& bc) const {
    const double t_next = s.t + h;
    switch (bc.kind) {
      case SpectralBcKind::ProjectedSecondOrder: {
        const auto [m, p] =
            bc_projected_second_order(t_next, bc.constants, bc.c0, s.grid.L, s.metric);
        return {BoundaryRowKind::Dirichlet, m, p};
      }
      case SpectralBcKind::SelfSimilarity: {
        const double factor = h * s.grid.L / (2.0 * s.t);
        const auto [zs_m, zs_p] = end_slopes(d);
        const auto [z_m, z_p] = end_values(s);
        return {BoundaryRowKind::Dirichlet, z_m + factor * zs_m, z_p - factor * zs_p};
      }
      case SpectralBcKind::Radiation: {
        const auto [m, p] = radiation_slopes_impl(s, d, transform, bc.c0);
        return {BoundaryRowKind::Neumann, m, p};
      }
      case SpectralBcKind::FixedValues:
        return {BoundaryRowKind::Dirichlet, bc.fixed_minus, bc.fixed_plus};
    }
    throw Error(ErrorKind::InvalidArgument, "unknown boundary condition");
  }

  BoundaryRows sbdf2_rows(const ZFieldState& n, const StateDerivatives& dn,
                          const ZFieldState& nm1, const StateDerivatives& dnm1,
                          const SpectralBC& bc) const {
    switch (bc.kind) {
      case SpectralBcKind::ProjectedSecondOrder: {
        const auto [m, p] =
            bc_projected_second_order(n.t + n.dt, bc.constants, bc.c0, n.grid.L, n.metric);
        return {BoundaryRowKind::Dirichlet, m, p};
      }
      case SpectralBcKind::SelfSimilarity: {
        const auto [m, p] = self_similarity_rows(n, dn, nm1);
        return {BoundaryRowKind::Dirichlet, m, p};
      }
      case SpectralBcKind::Radiation: {
        const auto [m1, p1] = radiation_slopes_impl(n, dn, transform, bc.c0);
        const auto [m0, p0] = radiation_slopes_impl(nm1, dnm1, transform, bc.c0);
        return {BoundaryRowKind::Neumann, 2.0 * m1 - m0, 2.0 * p1 - p0};
      }
      case SpectralBcKind::FixedValues:
        return {BoundaryRowKind::Dirichlet, bc.fixed_minus, bc.fixed_plus};
    }
    throw Error(ErrorKind::InvalidArgument, "unknown boundary condition");
  }
};

SpectralStepper::SpectralStepper(int N) : impl_(std::make_unique<Impl>(N)) {}
SpectralStepper::~SpectralStepper() = default;
SpectralStepper::SpectralStepper(SpectralStepper&&) noexcept = default;
SpectralStepper& SpectralStepper::operator=(SpectralStepper&&) noexcept = default;

int SpectralStepper::N() const { return impl_->N; }
const ChebyshevTransform& SpectralStepper::transform() const { return impl_->transform; }

StateDerivatives SpectralStepper::derive(const ZFieldState& state) const {
  if (state.grid.N != impl_->N) throw Error(ErrorKind::BadLength, "state degree mismatch");
  StateDerivatives d;
  d.zs_coeffs = cheb_derivative(state.coeffs, state.grid.L);
  d.zs.resize(d.zs_coeffs.size());
  impl_->transform.inverse(d.zs_coeffs, d.zs);
  d.nonlinear_coeffs.resize(d.zs.size());
  kernels::nonlinear_parallel(state.values, d.zs, state.metric, d.nonlinear_coeffs);
  impl_->transform.forward(d.nonlinear_coeffs, d.nonlinear_coeffs);
  return d;
}

ZFieldState SpectralStepper::euler(const ZFieldState& s, const StateDerivatives& d, double h,
                                   const SpectralBC& bc) {
  const double sigma = 1.0 / h;
  const std::size_t n = s.coeffs.size();
  cvec f(n);
  for (std::size_t k = 0; k < n; ++k) f[k] = sigma * s.coeffs[k] + d.nonlinear_coeffs[k];
  const BoundaryRows rows = impl_->euler_rows(s, d, h, bc);
  cvec a = impl_->solver(s.grid.L, sigma).solve(f, rows);
  return impl_->finish(s, std::move(a), s.t + h, s.dt);
}

ZFieldState SpectralStepper::bootstrap(const ZFieldState& s0, const StateDerivatives& d0,
                                       const SpectralBC& bc) {
  const double dt = s0.dt;
  const ZFieldState full = euler(s0, d0, dt, bc);
  const ZFieldState half = euler(s0, d0, 0.5 * dt, bc);
  const ZFieldState two = euler(half, derive(half), 0.5 * dt, bc);
  cvec a(full.coeffs.size());
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = 2.0 * two.coeffs[k] - full.coeffs[k];
  return impl_->finish(s0, std::move(a), s0.t + dt, dt);
}

ZFieldState SpectralStepper::sbdf2(const ZFieldState& n, const StateDerivatives& dn,
                                   const ZFieldState& nm1, const StateDerivatives& dnm1,
                                   const SpectralBC& bc) {
  const double dt = n.dt;
  const double sigma = 1.5 / dt;
  const double inv_2dt = 0.5 / dt;
  const std::size_t size = n.coeffs.size();
  cvec f(size);
  for (std::size_t k = 0; k < size; ++k) {
    f[k] = inv_2dt * (4.0 * n.coeffs[k] - nm1.coeffs[k]) + 2.0 * dn.nonlinear_coeffs[k] -
           dnm1.nonlinear_coeffs[k];
  }
  const BoundaryRows rows = impl_->sbdf2_rows(n, dn, nm1, dnm1, bc);
  cvec a = impl_->solver(n.grid.L, sigma).solve(f, rows);
  return impl_->finish(n, std::move(a), n.t + dt, dt);
}

cvec SpectralStepper::second_derivative(const StateDerivatives& d, double L) const {
  cvec zss = cheb_derivative(d.zs_coeffs, L);
  impl_->transform.inverse(zss, zss);
  return zss;
}

namespace {

void check_pair(const ZFieldState& n, const ZFieldState& nm1) {
  if (n.grid.N != nm1.grid.N || n.grid.L != nm1.grid.L || n.metric != nm1.metric) {
    throw Error(ErrorKind::InvalidArgument, "BDF states must share grid and metric");
  }
}

}  // namespace

ZFieldState sbdf2_step(const ZFieldState& n, const ZFieldState& nm1, const SpectralBC& bc) {
  check_pair(n, nm1);
  SpectralStepper stepper(n.grid.N);
  return stepper.sbdf2(n, stepper.derive(n), nm1, stepper.derive(nm1), bc);
}

ZFieldState bootstrap_first_step(const ZFieldState& s0, const SpectralBC& bc) {
  SpectralStepper stepper(s0.grid.N);
  return stepper.bootstrap(s0, stepper.derive(s0), bc);
}

std::pair<cd, cd> bc_self_similarity(const ZFieldState& n, const ZFieldState& nm1) {
  check_pair(n, nm1);
  SpectralStepper stepper(n.grid.N);
  return self_similarity_rows(n, stepper.derive(n), nm1);
}

std::pair<cd, cd> radiation_slopes(const ZFieldState& state, double c0) {
  SpectralStepper stepper(state.grid.N);
  return radiation_slopes_impl(state, stepper.derive(state), stepper.transform(), c0);
}

std::pair<cd, cd> bc_radiation(const ZFieldState& n, const ZFieldState& nm1, double c0) {
  const auto [m1, p1] = radiation_slopes(n, c0);
  const auto [m0, p0] = radiation_slopes(nm1, c0);
  return {2.0 * m1 - m0, 2.0 * p1 - p0};
}

RefineOutcome adaptive_refine(const ZFieldState& state, double threshold) {
  const cvec b = cheb_derivative(state.coeffs, state.grid.L);
  if (!(tail_max(b) > threshold)) return {state, false};
  const ChebyshevGrid grid = ChebyshevGrid::make(state.grid.L, 2 * state.grid.N);
  cvec coeffs(grid.size(), cd{});
  std::copy(state.coeffs.begin(), state.coeffs.end(), coeffs.begin());
  ZFieldState out{grid, cheb_inverse(coeffs), std::move(coeffs), state.t, state.metric,
                  state.dt / 4.0};
  return {std::move(out), true};
}

ZFieldState exact_profile_state(const SelfSimilarParams& p, const ChebyshevGrid& grid, double dt) {
  const auto s = grid.nodes();
  cvec z = profile_z_at(p, s, 1e-3);
  return ZFieldState::from_values(grid, std::move(z), p.t, p.metric, dt);
}

std::pair<cd, cd> projected_corner(double c0, Metric m) {
  const AsymptoticConstants k = closed_form_corner(c0, m);
  return {stereo_project(k.A_minus, m), stereo_project(k.A_plus, m)};
}

ZFieldState step_datum_state(double c0, Metric m, const ChebyshevGrid& grid, double dt) {
  const auto [a_minus, a_plus] = projected_corner(c0, m);
  cvec z(grid.size());
  for (int i = 0; i <= grid.N; ++i) z[i] = i < grid.N / 2 ? a_plus : a_minus;
  z[grid.N / 2] = 0.0;
  return ZFieldState::from_values(grid, std::move(z), 0.0, m, dt);
}

namespace {

ProbeRecord spectral_probe(const ZFieldState& state, const StateDerivatives& d,
                           const SpectralStepper& stepper, double c0, const Window& window) {
  ProbeRecord rec;
  rec.t = state.t;
  rec.N = state.grid.N;
  rec.s = state.grid.nodes();
  rec.curvature = curvature_from_z(state.values, d.zs, state.metric, state.t).c;
  rec.c_origin = rec.curvature[state.grid.N / 2];
  rec.energy = energy_trapezoid(rec.curvature, rec.s);
  rec.error = curvature_error(rec.s, rec.curvature, c0, state.t, window);
  const cvec zss = stepper.second_derivative(d, state.grid.L);
  rec.torsion = torsion_from_z(state.values, d.zs, zss, state.metric).tau;
  rec.spectrum.reserve(state.coeffs.size());
  for (const auto& a : state.coeffs) rec.spectrum.push_back(std::abs(a));
  return rec;
}

}  // namespace

SpectralRunResult spectral_run(ZFieldState initial, const SpectralBC& bc, double c0,
                               double t_end, std::span<const double> probe_times,
                               const SpectralRunOptions& opts) {
  SpectralRunResult result;
  RunReport& report = result.report;
  report.solver = "chebyshev_sbdf2";
  report.bc = to_string(bc.kind);

  ZFieldState state = std::move(initial);
  const double t_start = state.t;
  const double dt0 = state.dt;
  if (!(dt0 != 0.0) || (t_end - t_start) * dt0 < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "dt sign points away from t_end");
  }
  const double dir = dt0 < 0.0 ? -1.0 : 1.0;
  const double trace_dt = std::abs(t_end - t_start) / std::max(1, opts.trace_samples);

  SpectralStepper stepper(state.grid.N);
  StateDerivatives d = stepper.derive(state);
  std::optional<ZFieldState> prev;
  StateDerivatives dprev;
  detail::ProbeSchedule schedule(probe_times, dt0);

  double last_trace = t_start;
  bool cap_reported = false;

  auto trace = [&]() -> bool {
    const auto c = curvature_from_z(state.values, d.zs, state.metric, state.t).c;
    const auto s = state.grid.nodes();
    double peak = 0.0;
    bool nan = false;
    for (double v : c) {
      if (std::isnan(v)) nan = true;
      peak = std::max(peak, v);
    }
    report.energy_trace.emplace_back(state.t, energy_trapezoid(c, s));
    report.origin_trace.emplace_back(state.t, c[state.grid.N / 2]);
    result.peak_trace.emplace_back(state.t, nan ? std::nan("") : peak);
    const double scale = c0 > 0.0 && state.t > 0.0 ? c0 / std::sqrt(state.t) : 1.0;
    if (opts.detect_touch && !report.boundary_touch_time && state.t > 0.0 && c0 > 0.0) {
      const double edge = (1.0 - opts.touch_fraction) * state.grid.L;
      double zone = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (std::abs(s[i]) >= edge) zone = std::max(zone, c[i]);
      }
      if (zone > opts.touch_level * scale) {
        report.boundary_touch_time = state.t;
        report.events.push_back({state.t, "boundary_touch",
                                 "curvature reached the outer boundary zone; reflected waves "
                                 "make the profile non-self-similar"});
      }
    }
    if (nan || peak > opts.blowup_factor * scale) {
      report.events.push_back({state.t, "blow_up", "curvature exceeded the blow-up limit"});
      result.blew_up = true;
      return false;
    }
    return true;
  };

  auto record = [&] {
    while (schedule.due(state.t)) {
      report.probes.push_back(spectral_probe(state, d, stepper, c0, opts.error_window));
      schedule.pop();
    }
  };

  trace();
  record();
  double anchor = t_start;
  long k = 0;
  std::size_t steps = 0;
  while (dir * (t_end - state.t) > 0.5 * std::abs(state.dt)) {
    ZFieldState next = prev ? stepper.sbdf2(state, d, *prev, dprev, bc)
                            : stepper.bootstrap(state, d, bc);
    ++k;
    next.t = anchor + static_cast<double>(k) * state.dt;
    prev = std::move(state);
    dprev = std::move(d);
    state = std::move(next);
    d = stepper.derive(state);
    ++steps;
    record();
    const bool at_end = !(dir * (t_end - state.t) > 0.5 * std::abs(state.dt));
    if (at_end || std::abs(state.t - last_trace) >= trace_dt) {
      last_trace = state.t;
      if (!trace()) break;
    }
    if (opts.adaptive && !at_end && tail_max(d.zs_coeffs) > opts.refine_threshold) {
      if (state.grid.N * 2 > opts.max_N) {
        if (!cap_reported) {
          report.events.push_back({state.t, "refinement_cap", "N is at the configured maximum"});
          cap_reported = true;
        }
        continue;
      }
      RefineOutcome r = adaptive_refine(state, opts.refine_threshold);
      state = std::move(r.state);
      stepper = SpectralStepper(state.grid.N);
      d = stepper.derive(state);
      prev.reset();
      anchor = state.t;
      k = 0;
      schedule.set_dt(state.dt);
      report.refinements.push_back({state.t, state.grid.N, state.dt});
    }
  }
  report.steps = steps;
  report.t_final = state.t;
  report.params = {{"c0", c0},
                   {"metric", to_string(state.metric)},
                   {"L", state.grid.L},
                   {"N_start", report.refinements.empty() ? state.grid.N
                                                          : state.grid.N >> report.refinements.size()},
                   {"N_final", state.grid.N},
                   {"dt", dt0},
                   {"t_start", t_start},
                   {"t_end", t_end},
                   {"adaptive", opts.adaptive},
                   {"refine_threshold", opts.refine_threshold}};
  result.final_state = std::move(state);
  return result;
}

SpectralRunResult spectral_run_from_profile(const SelfSimilarParams& p, const ChebyshevGrid& grid,
                                            double dt, SpectralBcKind kind, double t_end,
                                            std::span<const double> probe_times,
                                            const SpectralRunOptions& opts) {
  ZFieldState state = exact_profile_state(p, grid, dt);
  SpectralBC bc;
  switch (kind) {
    case SpectralBcKind::ProjectedSecondOrder: {
      SpectralStepper stepper(grid.N);
      const StateDerivatives d = stepper.derive(state);
      auto frame_at = [&](std::size_t i) {
        const FramePair f = frame_from_z(state.values[i], d.zs[i], p.metric);
        return FrameTriad{stereo_inverse(state.values[i], p.metric), f.e1, f.e2};
      };
      const auto k = boundary_constants(frame_at(grid.size() - 1), frame_at(0), p.c0, p.t, grid.L);
      bc = SpectralBC::projected(k, p.c0);
      break;
    }
    case SpectralBcKind::SelfSimilarity: bc = SpectralBC::self_similarity(); break;
    case SpectralBcKind::Radiation: bc = SpectralBC::radiation(p.c0); break;
    case SpectralBcKind::FixedValues:
      bc = SpectralBC::fixed(state.values.back(), state.values.front());
      break;
  }
  return spectral_run(std::move(state), bc, p.c0, t_end, probe_times, opts);
}

SpectralRunResult spectral_run_backward(const SelfSimilarParams& p, const ChebyshevGrid& grid,
                                        double dt, SpectralBcKind kind, double t_end,
                                        std::span<const double> probe_times,
                                        const SpectralRunOptions& opts) {
  if (!(dt < 0.0)) throw Error(ErrorKind::InvalidArgument, "backward runs need dt < 0");
  if (!(t_end > 0.0) || t_end > p.t) {
    throw Error(ErrorKind::InvalidArgument, "backward runs need 0 < t_end <= t_start");
  }
  return spectral_run_from_profile(p, grid, dt, kind, t_end, probe_times, opts);
}

TwoStageResult spectral_run_forward_two_stage(const SelfSimilarParams& p, const ForwardStage& stage1,
                                              const ForwardStage& stage2,
                                              std::span<const double> probes1,
                                              std::span<const double> probes2,
                                              const SpectralRunOptions& opts) {
  if (!(stage1.dt > 0.0) || !(stage2.dt > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "forward stages need dt > 0");
  }
  if (!(stage2.L <= stage1.L)) {
    throw Error(ErrorKind::InvalidArgument, "the restart window must lie inside stage 1");
  }
  TwoStageResult out;
  const ChebyshevGrid g1 = ChebyshevGrid::make(stage1.L, stage1.N);
  ZFieldState datum = step_datum_state(p.c0, p.metric, g1, stage1.dt);
  const auto [a_minus, a_plus] = projected_corner(p.c0, p.metric);

  SpectralRunOptions o1 = opts;
  o1.adaptive = false;
  o1.detect_touch = true;
  o1.error_window = {-stage2.L, stage2.L};
  out.stage1 = spectral_run(std::move(datum), SpectralBC::fixed(a_minus, a_plus), p.c0,
                            stage1.t_end, probes1, o1);

  RunReport& c = out.combined;
  c = out.stage1.report;
  c.solver = "chebyshev_sbdf2_two_stage";
  c.bc = "fixed_values+radiation";
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  params["stage1"] = out.stage1.report.params;

  if (stage2.t_end > stage1.t_end && !out.stage1.blew_up) {
    const ChebyshevGrid g2 = ChebyshevGrid::make(stage2.L, stage2.N);
    const auto& s1 = out.stage1.final_state;
    cvec z = spectral_interpolate(s1.coeffs, s1.grid.L, g2.nodes());
    ZFieldState restart = ZFieldState::from_values(g2, std::move(z), s1.t, p.metric, stage2.dt);
    SpectralRunOptions o2 = opts;
    o2.adaptive = false;
    o2.detect_touch = false;
    out.stage2 = spectral_run(std::move(restart), SpectralBC::radiation(p.c0), p.c0, stage2.t_end,
                              probes2, o2);
    const RunReport& r2 = out.stage2.report;
    params["stage2"] = r2.params;
    const double last1 = c.probes.empty() ? -1.0 : c.probes.back().t;
    for (const auto& rec : r2.probes) {
      if (rec.t > last1) c.probes.push_back(rec);
    }
    c.energy_trace.insert(c.energy_trace.end(), r2.energy_trace.begin(), r2.energy_trace.end());
    c.origin_trace.insert(c.origin_trace.end(), r2.origin_trace.begin(), r2.origin_trace.end());
    c.events.push_back({s1.t, "restart", "stage 2 starts from the interpolated stage-1 field"});
    c.events.insert(c.events.end(), r2.events.begin(), r2.events.end());
    c.steps += r2.steps;
    c.t_final = r2.t_final;
  }
  c.params = std::move(params);
  return out;
}

}  // namespace filament
