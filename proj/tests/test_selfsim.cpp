#include <cmath>
#include <numbers>

#include "doctest.h"
#include "filament/diagnostics.hpp"
#include "filament/errors.hpp"
#include "filament/selfsim.hpp"

using namespace filament;

namespace {

double cdot_re(const ComplexVec3& b, const Vec3& a, Metric m) { return dot_pm(b.re, a, m); }
double cdot_im(const ComplexVec3& b, const Vec3& a, Metric m) { return dot_pm(b.im, a, m); }

}  // namespace

TEST_CASE("uniform grid from spacing") {
  const auto g = UniformGrid::from_spacing(50.0, 0.01);
  CHECK(g.N == 10000);
  CHECK(g.node(g.N / 2) == 0.0);
  CHECK_THROWS_AS(UniformGrid::from_spacing(1.0, 0.3), Error);
}

TEST_CASE("frenet profile: identity frame at the origin, unit frames everywhere") {
  for (Metric m : {Metric::Euclidean, Metric::Hyperbolic}) {
    const auto fp = integrate_frenet_profile({0.2, 1.0, m}, 10.0, 0.01);
    const auto& f0 = fp.frames[fp.frames.size() / 2];
    CHECK(fp.s[fp.s.size() / 2] == 0.0);
    CHECK(f0.T == Vec3{0, 0, 1});
    CHECK(f0.e1 == Vec3{1, 0, 0});
    CHECK(f0.e2 == Vec3{0, 1, 0});
    double worst = 0.0;
    for (const auto& f : fp.frames) {
      worst = std::max(worst, std::abs(dot_pm(f.T, f.T, m) - sign(m)));
      worst = std::max(worst, std::abs(dot_pm(f.e1, f.e1, m) - 1.0));
      worst = std::max(worst, std::abs(dot_pm(f.e2, f.e2, m) - 1.0));
      worst = std::max(worst, std::abs(dot_pm(f.T, f.e1, m)));
      worst = std::max(worst, std::abs(dot_pm(f.T, f.e2, m)));
      worst = std::max(worst, std::abs(dot_pm(f.e1, f.e2, m)));
    }
    CHECK(worst < 1e-8);
    // T3 is even in s.
    const std::size_t n = fp.frames.size();
    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      asym = std::max(asym, std::abs(fp.frames[i].T.z - fp.frames[n - 1 - i].T.z));
    }
    CHECK(asym < 1e-8);
  }
}

TEST_CASE("frenet profile with c0 = 0 is a straight line") {
  for (Metric m : {Metric::Euclidean, Metric::Hyperbolic}) {
    const auto fp = integrate_frenet_profile({0.0, 1.0, m}, 5.0, 0.05);
    for (const auto& f : fp.frames) CHECK(f.T == Vec3{0, 0, 1});
  }
}

TEST_CASE("frenet profile curvature is c0 / sqrt(t)") {
  for (double t : {1.0, 0.25}) {
    const double ds = 0.01;
    const auto fp = integrate_frenet_profile({0.2, t, Metric::Euclidean}, 5.0, ds);
    std::vector<Vec3> T;
    for (const auto& f : fp.frames) T.push_back(f.T);
    const auto c = curvature_from_T(T, ds, Metric::Euclidean).c;
    const double exact = 0.2 / std::sqrt(t);
    // Centred differences: |c_h - c| <= c (c^2 + tau^2) ds^2 / 6 to leading order.
    for (std::size_t i = 1; i + 1 < c.size(); ++i) {
      const double tau = fp.s[i] / (2 * t);
      CHECK(std::abs(c[i] - exact) < 1.5 * exact * (exact * exact + tau * tau) * ds * ds / 6 + 1e-12);
    }
    // Eighth-order differences leave only the integrator error.
    const double w[5] = {0.0, 4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 4; i + 4 < T.size(); ++i) {
      Vec3 d{};
      for (int j = 1; j <= 4; ++j) d += w[j] * (T[i + j] - T[i - j]);
      const double ci = std::sqrt(dot_pm(d, d, Metric::Euclidean)) / ds;
      lo = std::min(lo, ci);
      hi = std::max(hi, ci);
    }
    CHECK(hi - lo < 1e-6);
    CHECK(std::abs(hi - exact) < 1e-6);
  }
}

TEST_CASE("closed-form A3") {
  CHECK(closed_form_A3(0.0, Metric::Euclidean) == 1.0);
  CHECK(closed_form_A3(0.2, Metric::Euclidean) == doctest::Approx(0.9391014).epsilon(1e-6));
  CHECK(closed_form_A3(0.2, Metric::Hyperbolic) == doctest::Approx(1.0648478).epsilon(1e-6));
  for (Metric m : {Metric::Euclidean, Metric::Hyperbolic}) {
    const auto k = closed_form_corner(0.2, m);
    CHECK(std::abs(dot_pm(k.A_plus, k.A_plus, m) - sign(m)) < 1e-14);
    CHECK(k.A_plus.x == -k.A_minus.x);
    CHECK(k.A_plus.x > 0.0);
  }
}

TEST_CASE("extract_asymptotics: symmetries and orthogonality") {
  for (Metric m : {Metric::Euclidean, Metric::Hyperbolic}) {
    const auto fp = integrate_frenet_profile({0.2, 1.0, m}, 50.0, 0.01);
    const auto k = extract_asymptotics(fp);
    CHECK(std::abs(dot_pm(k.A_plus, k.A_plus, m) - sign(m)) < 1e-8);
    CHECK(std::abs(dot_pm(k.A_minus, k.A_minus, m) - sign(m)) < 1e-8);
    CHECK(std::abs(k.A_plus.z - k.A_minus.z) < 1e-6);
    CHECK(std::abs(k.A_plus.x + k.A_minus.x) < 1e-3);
    CHECK(std::abs(k.A_plus.y + k.A_minus.y) < 1e-3);
    CHECK(std::abs(k.A_plus.z - closed_form_A3(0.2, m)) <= 3 * 0.2 / 50.0);
    CHECK(std::abs(cdot_re(k.B_plus, k.A_plus, m)) < 1e-6);
    CHECK(std::abs(cdot_im(k.B_plus, k.A_plus, m)) < 1e-6);
    CHECK(std::abs(cdot_re(k.B_minus, k.A_minus, m)) < 1e-6);
    CHECK(std::abs(cdot_im(k.B_minus, k.A_minus, m)) < 1e-6);
  }
  const auto straight = extract_asymptotics(integrate_frenet_profile({0.0, 1.0, Metric::Euclidean}, 20.0, 0.05));
  CHECK(straight.A_plus == Vec3{0, 0, 1});
  CHECK(straight.A_minus == Vec3{0, 0, 1});
  CHECK_THROWS_AS(extract_asymptotics(integrate_frenet_profile({0.2, 1.0, Metric::Euclidean}, 10.0, 0.01)), Error);
}

TEST_CASE("second-order boundary tangent reproduces the profile at the start time") {
  const double L = 10.0;
  const auto fp = integrate_frenet_profile({0.2, 1.0, Metric::Euclidean}, L, 0.01);
  const auto k = boundary_constants(fp.frames.front(), fp.frames.back(), 0.2, 1.0, L);
  const Vec3 minus = second_order_boundary_tangent(k, Side::Minus, 0.2, 1.0, L, Metric::Euclidean);
  const Vec3 plus = second_order_boundary_tangent(k, Side::Plus, 0.2, 1.0, L, Metric::Euclidean);
  const Vec3 dm = minus - fp.frames.front().T;
  const Vec3 dp = plus - fp.frames.back().T;
  CHECK(std::sqrt(dot_pm(dm, dm, Metric::Euclidean)) < 1e-12);
  CHECK(std::sqrt(dot_pm(dp, dp, Metric::Euclidean)) < 1e-12);
  // Exact profile at a later time agrees to O(1/L^2).
  const auto later = integrate_frenet_profile({0.2, 0.5, Metric::Euclidean}, L, 0.01);
  const Vec3 p2 = second_order_boundary_tangent(k, Side::Plus, 0.2, 0.5, L, Metric::Euclidean);
  const Vec3 d2 = p2 - later.frames.back().T;
  CHECK(std::sqrt(dot_pm(d2, d2, Metric::Euclidean)) < 1.0 / (L * L));
}

TEST_CASE("projected profile: odd, zero at the origin, slope c0 / (2 sqrt t)") {
  for (Metric m : {Metric::Euclidean, Metric::Hyperbolic}) {
    const auto zp = integrate_profile_z({0.2, 0.5, m}, 10.0, 0.01);
    const std::size_t n = zp.z.size();
    CHECK(zp.z[n / 2] == std::complex<double>(0.0, 0.0));
    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i) asym = std::max(asym, std::abs(zp.z[i] + zp.z[n - 1 - i]));
    CHECK(asym < 1e-10);
    const double slope = std::abs(zp.z[n / 2 + 1]) / 0.01;
    CHECK(slope == doctest::Approx(0.2 / (2.0 * std::sqrt(0.5))).epsilon(1e-4));
  }
  const auto flat = integrate_profile_z({0.0, 1.0, Metric::Euclidean}, 5.0, 0.1);
  for (const auto& z : flat.z) CHECK(z == std::complex<double>(0.0, 0.0));
}

TEST_CASE("projected profile matches the projection of the frame profile") {
  for (Metric m : {Metric::Euclidean, Metric::Hyperbolic}) {
    const auto fp = integrate_frenet_profile({0.2, 1.0, m}, 10.0, 0.01);
    const auto zp = integrate_profile_z({0.2, 1.0, m}, 10.0, 0.01);
    double worst = 0.0;
    for (std::size_t i = 0; i < zp.z.size(); ++i) {
      worst = std::max(worst, std::abs(stereo_project(fp.frames[i].T, m) - zp.z[i]));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("curvature of the projected profile is c0 / sqrt(t)") {
  const SelfSimilarParams p{0.2, 0.3, Metric::Hyperbolic};
  std::vector<double> s;
  for (int i = -100; i <= 100; ++i) s.push_back(0.05 * i);
  std::vector<std::complex<double>> zs;
  const auto z = profile_z_at(p, s, 1e-3, &zs);
  const auto c = curvature_from_z(z, zs, p.metric).c;
  for (double v : c) CHECK(std::abs(v - 0.2 / std::sqrt(0.3)) < 1e-9);
}

TEST_CASE("reconstruct_X examples") {
  SUBCASE("straight filament") {
    std::vector<Vec3> T(11, Vec3{0, 0, 1});
    const auto X = reconstruct_X(T, {0.0, 1.0, Metric::Euclidean}, 0.1);
    for (std::size_t i = 0; i < X.X.size(); ++i) {
      CHECK(std::abs(X.X[i].z - X.s[i]) < 1e-14);
      CHECK(X.X[i].x == 0.0);
    }
  }
  SUBCASE("constant tangent over five nodes") {
    std::vector<Vec3> T(5, Vec3{1, 0, 0});
    const auto X = reconstruct_X(T, {0.0, 1.0, Metric::Euclidean}, 0.1);
    CHECK(std::abs(X.X[3].x - 0.1) < 1e-15);
    CHECK(std::abs(X.X[2].x) < 1e-15);
  }
  SUBCASE("differentiating X recovers T and X/s approaches A") {
    const double ds = 0.01;
    const SelfSimilarParams p{0.2, 1.0, Metric::Euclidean};
    const auto fp = integrate_frenet_profile(p, 50.0, ds);
    std::vector<Vec3> T;
    for (const auto& f : fp.frames) T.push_back(f.T);
    const auto X = reconstruct_X(T, p, ds);
    const std::size_t n = T.size();
    CHECK(X.X[n / 2] == Vec3{0, 0.4, 0});
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const Vec3 d = (1.0 / (2.0 * ds)) * (X.X[i + 1] - X.X[i - 1]) - T[i];
      worst = std::max(worst, std::sqrt(dot_pm(d, d, Metric::Euclidean)));
    }
    CHECK(worst < 1e-4);
    const auto A = extract_asymptotics(fp);
    const Vec3 ratio = (1.0 / X.s.back()) * X.X.back() - A.A_plus;
    const Vec3 ratio_mid = (1.0 / X.s[3 * n / 4]) * X.X[3 * n / 4] - A.A_plus;
    const double far = std::sqrt(dot_pm(ratio, ratio, Metric::Euclidean));
    const double mid = std::sqrt(dot_pm(ratio_mid, ratio_mid, Metric::Euclidean));
    CHECK(far < mid);
    CHECK(far < 0.1);
  }
  CHECK_THROWS_AS(reconstruct_X(std::vector<Vec3>(3), {0.2, 1.0, Metric::Euclidean}, 0.1), Error);
}
