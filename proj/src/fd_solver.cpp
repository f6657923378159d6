#include "filament/fd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "filament/errors.hpp"
#include "filament/kernels.hpp"
#include "run_support.hpp"

namespace filament {

const char* to_string(FdBcKind kind) {
  return kind == FdBcKind::FixedFirstOrder ? "fixed_first_order" : "asymptotic_second_order";
}

FdBoundaryCondition FdBoundaryCondition::fixed(const Vec3& at_minus, const Vec3& at_plus) {
  FdBoundaryCondition bc;
  bc.kind = FdBcKind::FixedFirstOrder;
  bc.constants.A_minus = at_minus;
  bc.constants.A_plus = at_plus;
  return bc;
}

FdBoundaryCondition FdBoundaryCondition::asymptotic(const AsymptoticConstants& k, double c0) {
  return {FdBcKind::AsymptoticSecondOrder, k, c0};
}

std::vector<Vec3> fd_rhs(const TFieldState& state) {
  if (state.T.size() < 3) throw Error(ErrorKind::TooFewNodes, "FD stencil needs >= 3 nodes");
  std::vector<Vec3> out(state.T.size());
  kernels::fd_rhs_parallel(state.T, state.grid.ds(), state.metric, out);
  return out;
}

std::pair<Vec3, Vec3> fd_apply_bc(const TFieldState& state, const FdBoundaryCondition& bc,
                                  double t_new) {
  if (bc.kind == FdBcKind::FixedFirstOrder) return {bc.constants.A_minus, bc.constants.A_plus};
  const double L = state.grid.L;
  return {second_order_boundary_tangent(bc.constants, Side::Minus, bc.c0, t_new, L, state.metric),
          second_order_boundary_tangent(bc.constants, Side::Plus, bc.c0, t_new, L, state.metric)};
}

FdIntegrator::FdIntegrator(std::size_t nodes)
    : k1_(nodes), k2_(nodes), k3_(nodes), k4_(nodes), stage_(nodes) {}

bool FdIntegrator::step(TFieldState& state, double dt, const FdBoundaryCondition& bc) {
  auto& T = state.T;
  const std::size_t n = T.size();
  if (n < 3) throw Error(ErrorKind::TooFewNodes, "FD stencil needs >= 3 nodes");
  if (k1_.size() != n) *this = FdIntegrator(n);
  const double ds = state.grid.ds();
  const Metric m = state.metric;
  const bool stable = std::abs(dt) <= kFdStabilityFactor * ds * ds;

  // The RHS is zero on the end nodes, so the stages keep them frozen.
  kernels::fd_rhs_parallel(T, ds, m, k1_);
  kernels::axpy_parallel(T, 0.5 * dt, k1_, stage_);
  kernels::fd_rhs_parallel(stage_, ds, m, k2_);
  kernels::axpy_parallel(T, 0.5 * dt, k2_, stage_);
  kernels::fd_rhs_parallel(stage_, ds, m, k3_);
  kernels::axpy_parallel(T, dt, k3_, stage_);
  kernels::fd_rhs_parallel(stage_, ds, m, k4_);

  const double w = dt / 6.0;
  const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(n) - 1;
  bool degenerate = false;
#pragma omp parallel for schedule(static) if (n >= kernels::kParallelThreshold) \
    reduction(|| : degenerate)
  for (std::ptrdiff_t i = 1; i < last; ++i) {
    const Vec3 v = T[i] + w * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    const double radicand = sign(m) * dot_pm(v, v, m);
    if (radicand > kNormalizeTolerance) {
      T[i] = (1.0 / std::sqrt(radicand)) * v;
    } else {
      T[i] = v;
      degenerate = true;
    }
  }
  if (degenerate) {
    throw Error(ErrorKind::NonNormalizable, "tangent field degenerated during an FD step");
  }
  const double t_new = state.t + dt;
  const auto [lo, hi] = fd_apply_bc(state, bc, t_new);
  T.front() = normalize(lo, NormTarget::MetricSign, m);
  T.back() = normalize(hi, NormTarget::MetricSign, m);
  state.t = t_new;
  return stable;
}

TFieldState fd_step(const TFieldState& state, double dt, const FdBoundaryCondition& bc,
                    std::vector<Event>* events) {
  TFieldState next = state;
  FdIntegrator integrator(state.T.size());
  if (!integrator.step(next, dt, bc) && events != nullptr) {
    std::ostringstream msg;
    msg << "|dt| = " << std::abs(dt) << " exceeds 0.7 ds^2 = "
        << kFdStabilityFactor * state.grid.ds() * state.grid.ds();
    events->push_back({state.t, "stability_warning", msg.str()});
  }
  return next;
}

std::vector<FrameTriad> fd_initial_frames(const SelfSimilarParams& p, const UniformGrid& grid) {
  std::vector<double> s = grid.nodes();
  s[grid.N / 2] = 0.0;
  for (int i = 0; i < grid.N / 2; ++i) s[i] = -s[grid.N - i];
  return frenet_frames_at(p, s, std::min(grid.ds(), 1e-3));
}

namespace {

ProbeRecord fd_probe(const TFieldState& state, double c0, const Window& window) {
  const auto& g = state.grid;
  ProbeRecord rec;
  rec.t = state.t;
  rec.N = g.N;
  rec.s = g.nodes();
  rec.curvature = curvature_from_T(state.T, g.ds(), state.metric, state.t).c;
  rec.c_origin = rec.curvature[g.N / 2];
  rec.energy = energy_trapezoid(rec.curvature, g.ds());
  rec.error = curvature_error(rec.s, rec.curvature, c0, state.t, window);
  return rec;
}

struct FdLoopSetup {
  bool detect_touch = false;
};

FdRunResult fd_loop(TFieldState state, const FdBoundaryCondition& bc, const SelfSimilarParams& p,
                    double dt, double t_end, std::span<const double> probe_times,
                    const FdRunOptions& opts, const FdLoopSetup& setup) {
  FdRunResult result;
  RunReport& report = result.report;
  report.solver = "finite_difference";
  report.bc = to_string(bc.kind);

  const double t0 = state.t;
  const auto steps = static_cast<long>(std::llround((t_end - t0) / dt));
  if (steps < 0) throw Error(ErrorKind::InvalidArgument, "dt sign points away from t_end");
  const long trace_every =
      opts.trace_every > 0 ? opts.trace_every : std::max<long>(1, steps / 200);

  const auto& g = state.grid;
  if (std::abs(dt) > kFdStabilityFactor * g.ds() * g.ds()) {
    std::ostringstream msg;
    msg << "|dt| = " << std::abs(dt) << " exceeds 0.7 ds^2 = "
        << kFdStabilityFactor * g.ds() * g.ds();
    report.events.push_back({t0, "stability_warning", msg.str()});
  }

  detail::ProbeSchedule schedule(probe_times, dt);
  FdIntegrator integrator(state.T.size());

  auto trace = [&]() -> bool {
    const auto c = curvature_from_T(state.T, g.ds(), state.metric, state.t).c;
    double peak = 0.0;
    bool nan = false;
    for (double v : c) {
      if (std::isnan(v)) nan = true;
      peak = std::max(peak, v);
    }
    report.energy_trace.emplace_back(state.t, energy_trapezoid(c, g.ds()));
    report.origin_trace.emplace_back(state.t, c[g.N / 2]);
    result.peak_trace.emplace_back(state.t, nan ? std::nan("") : peak);
    const double scale = p.c0 > 0.0 && state.t > 0.0 ? p.c0 / std::sqrt(state.t) : 1.0;
    if (setup.detect_touch && !report.boundary_touch_time && state.t > 0.0 && p.c0 > 0.0) {
      const double edge = (1.0 - opts.touch_fraction) * g.L;
      double zone = 0.0;
      for (int i = 0; i <= g.N; ++i) {
        if (std::abs(g.node(i)) >= edge) zone = std::max(zone, c[i]);
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
      report.probes.push_back(fd_probe(state, p.c0, opts.error_window));
      schedule.pop();
    }
  };

  trace();
  record();
  long n = 0;
  for (; n < steps; ++n) {
    try {
      integrator.step(state, dt, bc);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonNormalizable) throw;
      report.events.push_back({state.t, "blow_up", e.what()});
      result.blew_up = true;
      ++n;
      break;
    }
    state.t = t0 + static_cast<double>(n + 1) * dt;
    record();
    if ((n + 1) % trace_every == 0 || n + 1 == steps) {
      if (!trace()) {
        ++n;
        break;
      }
    }
  }
  report.steps = static_cast<std::size_t>(n);
  report.t_final = state.t;
  report.params = {{"c0", p.c0},       {"metric", to_string(p.metric)},
                   {"L", g.L},         {"N", g.N},
                   {"ds", g.ds()},     {"dt", dt},
                   {"t_start", t0},    {"t_end", t_end}};
  result.final_state = std::move(state);
  return result;
}

}  // namespace

FdRunResult fd_run_backward(const SelfSimilarParams& p, const UniformGrid& grid, double dt,
                            FdBcKind bc_kind, double t_end, std::span<const double> probe_times,
                            const FdRunOptions& opts) {
  if (!(dt < 0.0)) throw Error(ErrorKind::InvalidArgument, "backward runs need dt < 0");
  if (!(t_end > 0.0) || t_end > p.t) {
    throw Error(ErrorKind::InvalidArgument, "backward runs need 0 < t_end <= t_start");
  }
  const auto frames = fd_initial_frames(p, grid);
  TFieldState state{grid, {}, p.t, p.metric};
  state.T.reserve(frames.size());
  for (const auto& f : frames) state.T.push_back(f.T);

  const FdBoundaryCondition bc =
      bc_kind == FdBcKind::FixedFirstOrder
          ? FdBoundaryCondition::fixed(frames.front().T, frames.back().T)
          : FdBoundaryCondition::asymptotic(
                boundary_constants(frames.front(), frames.back(), p.c0, p.t, grid.L), p.c0);
  return fd_loop(std::move(state), bc, p, dt, t_end, probe_times, opts, {});
}

FdRunResult fd_run_forward(const SelfSimilarParams& p, const UniformGrid& grid, double dt,
                           double t_end, std::span<const double> probe_times,
                           const FdRunOptions& opts) {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "forward runs need dt > 0");
  if (!(t_end >= 0.0)) throw Error(ErrorKind::InvalidArgument, "forward runs need t_end >= 0");
  const AsymptoticConstants corner = closed_form_corner(p.c0, p.metric);
  TFieldState state{grid, std::vector<Vec3>(grid.size()), 0.0, p.metric};
  for (int i = 0; i <= grid.N; ++i) {
    state.T[i] = i < grid.N / 2 ? corner.A_minus : corner.A_plus;
  }
  state.T[grid.N / 2] = Vec3{0.0, 0.0, 1.0};
  const auto bc = FdBoundaryCondition::fixed(corner.A_minus, corner.A_plus);
  return fd_loop(std::move(state), bc, p, dt, t_end, probe_times, opts, {.detect_touch = true});
}

}  // namespace filament
