#include <cmath>
#include <vector>

#include "doctest.h"
#include "filament/errors.hpp"
#include "filament/fd_solver.hpp"

using namespace filament;

namespace {

TFieldState profile_state(double c0, double L, double ds, Metric m) {
  const auto grid = UniformGrid::from_spacing(L, ds);
  const auto frames = fd_initial_frames({c0, 1.0, m}, grid);
  TFieldState s{grid, {}, 1.0, m};
  for (const auto& f : frames) s.T.push_back(f.T);
  return s;
}

double max_norm_defect(const TFieldState& s) {
  double worst = 0.0;
  for (const auto& v : s.T) {
    worst = std::max(worst, std::abs(dot_pm(v, v, s.metric) - sign(s.metric)));
  }
  return worst;
}

}  // namespace

TEST_CASE("fd_rhs: constant and linear data") {
  TFieldState s{UniformGrid{1.0, 10}, std::vector<Vec3>(11, Vec3{0.6, 0.0, 0.8}), 1.0,
                Metric::Euclidean};
  for (const auto& v : fd_rhs(s)) CHECK(v == Vec3{});
  for (int i = 0; i <= 10; ++i) s.T[i].x = 0.1 * i;
  const auto r = fd_rhs(s);
  for (int i = 1; i < 10; ++i) {
    CHECK(std::abs(r[i].x) < 1e-12);
    CHECK(std::abs(r[i].y) < 1e-12);
    CHECK(std::abs(r[i].z) < 1e-12);
  }
}

TEST_CASE("constant field is an equilibrium under the fixed condition") {
  const Vec3 A = normalize({0.3, -0.2, 1.0}, NormTarget::MetricSign, Metric::Euclidean);
  TFieldState s{UniformGrid{2.0, 40}, std::vector<Vec3>(41, A), 1.0, Metric::Euclidean};
  const auto bc = FdBoundaryCondition::fixed(A, A);
  FdIntegrator integ(s.T.size());
  for (int n = 0; n < 50; ++n) integ.step(s, -1e-3, bc);
  for (const auto& v : s.T) CHECK(v == A);
}

TEST_CASE("fd_apply_bc examples") {
  const double L = 10.0;
  for (Metric m : {Metric::Euclidean, Metric::Hyperbolic}) {
    const auto frames = fd_initial_frames({0.2, 1.0, m}, UniformGrid::from_spacing(L, 0.01));
    const auto fixed = FdBoundaryCondition::fixed(frames.front().T, frames.back().T);
    TFieldState s{UniformGrid::from_spacing(L, 0.01), {}, 1.0, m};
    const auto a = fd_apply_bc(s, fixed, 0.9);
    const auto b = fd_apply_bc(s, fixed, 0.1);
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);

    const auto k = boundary_constants(frames.front(), frames.back(), 0.2, 1.0, L);
    const auto asym = FdBoundaryCondition::asymptotic(k, 0.2);
    const auto at1 = fd_apply_bc(s, asym, 1.0);
    const Vec3 dm = at1.first - frames.front().T;
    const Vec3 dp = at1.second - frames.back().T;
    CHECK(std::sqrt(dm.x * dm.x + dm.y * dm.y + dm.z * dm.z) < 1.0 / (L * L));
    CHECK(std::sqrt(dp.x * dp.x + dp.y * dp.y + dp.z * dp.z) < 1.0 / (L * L));
  }
  const auto flat = fd_initial_frames({0.0, 1.0, Metric::Euclidean}, UniformGrid{5.0, 10});
  const auto k0 = boundary_constants(flat.front(), flat.back(), 0.0, 1.0, 5.0);
  TFieldState s0{UniformGrid{5.0, 10}, {}, 1.0, Metric::Euclidean};
  const auto v = fd_apply_bc(s0, FdBoundaryCondition::asymptotic(k0, 0.0), 0.3);
  CHECK(v.first == Vec3{0, 0, 1});
  CHECK(v.second == Vec3{0, 0, 1});
}

TEST_CASE("steps keep unit signed norm") {
  for (Metric m : {Metric::Euclidean, Metric::Hyperbolic}) {
    TFieldState s = profile_state(0.2, 5.0, 0.05, m);
    const auto bc = FdBoundaryCondition::fixed(s.T.front(), s.T.back());
    FdIntegrator integ(s.T.size());
    for (int n = 0; n < 100; ++n) {
      CHECK(integ.step(s, -1e-3, bc));
      s.t -= 1e-3;
    }
    CHECK(max_norm_defect(s) < 1e-12);
  }
}

TEST_CASE("stability warning above 0.7 ds^2") {
  TFieldState s = profile_state(0.2, 2.0, 0.1, Metric::Euclidean);
  const auto bc = FdBoundaryCondition::fixed(s.T.front(), s.T.back());
  std::vector<Event> events;
  (void)fd_step(s, -0.8 * 0.01, bc, &events);
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == "stability_warning");
  events.clear();
  (void)fd_step(s, -0.6 * 0.01, bc, &events);
  CHECK(events.empty());
}

TEST_CASE("one step back and one forward returns the interior") {
  TFieldState s = profile_state(0.2, 5.0, 0.05, Metric::Euclidean);
  const TFieldState start = s;
  const auto bc = FdBoundaryCondition::fixed(s.T.front(), s.T.back());
  const double dt = 1e-4;
  s = fd_step(s, -dt, bc);
  s = fd_step(s, dt, bc);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < s.T.size(); ++i) {
    const Vec3 d = s.T[i] - start.T[i];
    worst = std::max(worst, std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z));
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("run with zero steps reports the exact initial curvature") {
  const auto grid = UniformGrid::from_spacing(10.0, 0.02);
  const std::vector<double> probes{1.0};
  const auto r = fd_run_backward({0.2, 1.0, Metric::Euclidean}, grid, -1e-4,
                                 FdBcKind::FixedFirstOrder, 1.0, probes);
  CHECK(r.report.steps == 0);
  REQUIRE(r.report.probes.size() == 1);
  CHECK(r.report.probes[0].c_origin == doctest::Approx(0.2).epsilon(1e-6));
  // One-sided end differences: c (c^2 + tau^2) ds^2 / 3 with tau = L / 2.
  CHECK(r.report.probes[0].error.max_abs < 1.2 * 0.2 * (0.04 + 25.0) * 0.02 * 0.02 / 3);
}

TEST_CASE("constant datum stays stationary forward in time") {
  const auto r = fd_run_forward({0.0, 1.0, Metric::Euclidean}, UniformGrid{2.0, 40}, 1e-3, 0.05,
                                std::vector<double>{0.05});
  for (const auto& v : r.final_state.T) CHECK(v == Vec3{0, 0, 1});
  CHECK_FALSE(r.report.fractal_regime());
}

TEST_CASE("curvature error at t = 0.5 converges at second order in ds") {
  auto run = [](double ds) {
    const auto grid = UniformGrid::from_spacing(10.0, ds);
    const std::vector<double> probes{0.5};
    FdRunOptions o;
    o.error_window = {-2.0, 2.0};
    const auto r = fd_run_backward({0.2, 1.0, Metric::Euclidean}, grid, -0.5 * ds * ds,
                                   FdBcKind::AsymptoticSecondOrder, 0.5, probes, o);
    return r.report.probes.at(0).error.max_abs;
  };
  const double coarse = run(0.08);
  const double fine = run(0.04);
  CHECK(fine < coarse / 3.0);
}

TEST_CASE("larger domain gives a smaller error with fixed ends") {
  auto run = [](double L) {
    const auto grid = UniformGrid::from_spacing(L, 0.05);
    const std::vector<double> probes{0.1};
    FdRunOptions o;
    o.error_window = {-2.0, 2.0};
    return fd_run_backward({0.2, 1.0, Metric::Euclidean}, grid, -1e-3,
                           FdBcKind::FixedFirstOrder, 0.1, probes, o)
        .report.probes.at(0)
        .error.max_abs;
  };
  CHECK(run(50.0) < run(10.0));
}

TEST_CASE("invalid run arguments") {
  const auto grid = UniformGrid::from_spacing(2.0, 0.1);
  CHECK_THROWS_AS(fd_run_backward({0.2, 1.0, Metric::Euclidean}, grid, 1e-3,
                                  FdBcKind::FixedFirstOrder, 0.5, {}),
                  Error);
  CHECK_THROWS_AS(fd_run_forward({0.2, 1.0, Metric::Euclidean}, grid, -1e-3, 0.5, {}), Error);
}
