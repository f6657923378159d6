#include "filament/diagnostics.hpp"

#include <cmath>

#include "filament/errors.hpp"

namespace filament {

using cd = std::complex<double>;

CurvatureProfile curvature_from_T(std::span<const Vec3> T, double ds, Metric m, double t) {
  const std::size_t n = T.size();
  if (n < 3) throw Error(ErrorKind::TooFewNodes, "curvature needs at least 3 nodes");
  CurvatureProfile out;
  out.t = t;
  out.c.resize(n);
  const double inv = 1.0 / (2.0 * ds);
  auto emit = [&](std::size_t i, const Vec3& Ts) {
    double q = dot_pm(Ts, Ts, m);
    if (q < 0.0) {
      q = 0.0;
      ++out.clamped;
    }
    out.c[i] = std::sqrt(q);
  };
  emit(0, inv * (-3.0 * T[0] + 4.0 * T[1] - T[2]));
  for (std::size_t i = 1; i + 1 < n; ++i) emit(i, inv * (T[i + 1] - T[i - 1]));
  emit(n - 1, inv * (3.0 * T[n - 1] - 4.0 * T[n - 2] + T[n - 3]));
  return out;
}

CurvatureProfile curvature_from_z(std::span<const cd> z, std::span<const cd> zs, Metric m,
                                  double t) {
  CurvatureProfile out;
  out.t = t;
  out.c.resize(z.size());
  const double sgn = sign(m);
  for (std::size_t i = 0; i < z.size(); ++i) {
    out.c[i] = 2.0 * std::abs(zs[i]) / (1.0 + sgn * std::norm(z[i]));
  }
  return out;
}

TorsionProfile torsion_from_z(std::span<const cd> z, std::span<const cd> zs,
                              std::span<const cd> zss, Metric m) {
  TorsionProfile out;
  out.tau.resize(z.size());
  const double sgn = sign(m);
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double zs2 = std::norm(zs[i]);
    if (std::sqrt(zs2) <= kDegenerateDerivative) {
      out.tau[i] = std::numeric_limits<double>::quiet_NaN();
      ++out.flagged;
      continue;
    }
    out.tau[i] = 2.0 * (z[i] * std::conj(zs[i])).imag() / (std::norm(z[i]) + sgn) +
                 (std::conj(zs[i]) * zss[i]).imag() / zs2;
  }
  return out;
}

FramePair frame_from_z(cd z, cd zs, Metric m) {
  const double s = sign(m);
  const double x = z.real(), y = z.imag();
  const double xs = zs.real(), ys = zs.imag();
  const double mod = std::hypot(xs, ys);
  if (mod <= kDegenerateDerivative) {
    throw Error(ErrorKind::FrameDegenerate, "z_s vanishes; the frame is undefined");
  }
  const double x2 = x * x, y2 = y * y;
  const double k = 1.0 / (mod * (1.0 + s * x2 + s * y2));
  FramePair f;
  f.e1 = k * Vec3{xs * (1.0 - s * x2 + s * y2) - s * 2.0 * x * y * ys,
                  ys * (1.0 + s * x2 - s * y2) - s * 2.0 * x * y * xs,
                  -s * 2.0 * x * xs - s * 2.0 * y * ys};
  f.e2 = k * Vec3{-s * 2.0 * x * xs * y - ys * (1.0 - s * x2 + s * y2),
                  s * 2.0 * x * y * ys + xs * (1.0 + s * x2 - s * y2),
                  s * 2.0 * x * ys - s * 2.0 * xs * y};
  return f;
}

std::vector<FramePair> frame_from_z(std::span<const cd> z, std::span<const cd> zs, Metric m) {
  std::vector<FramePair> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = frame_from_z(z[i], zs[i], m);
  return out;
}

double energy_trapezoid(std::span<const double> c, std::span<const double> s) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    acc += 0.5 * std::abs(s[i + 1] - s[i]) * (c[i] * c[i] + c[i + 1] * c[i + 1]);
  }
  return acc;
}

double energy_trapezoid(std::span<const double> c, double ds) {
  if (c.size() < 2) return 0.0;
  double acc = 0.5 * (c.front() * c.front() + c.back() * c.back());
  for (std::size_t i = 1; i + 1 < c.size(); ++i) acc += c[i] * c[i];
  return acc * ds;
}

CurvatureError curvature_error(std::span<const double> s, std::span<const double> c, double c0,
                               double t, Window window) {
  const double exact = c0 / std::sqrt(t);
  CurvatureError e;
  double sq = 0.0;
  std::size_t origin = 0;
  bool have_prev = false;
  bool saw_nan = false;
  double prev_s = 0.0, prev_err2 = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::abs(s[i]) < std::abs(s[origin])) origin = i;
    if (!window.contains(s[i])) {
      have_prev = false;
      continue;
    }
    const double err = std::abs(c[i] - exact);
    if (std::isnan(err)) saw_nan = true;
    else if (err > e.max_abs) e.max_abs = err;
    if (have_prev) sq += 0.5 * std::abs(s[i] - prev_s) * (err * err + prev_err2);
    have_prev = true;
    prev_s = s[i];
    prev_err2 = err * err;
  }
  e.l2 = std::sqrt(sq);
  if (saw_nan) e.max_abs = e.l2 = std::numeric_limits<double>::quiet_NaN();
  if (!s.empty()) e.at_origin = std::abs(c[origin] - exact);
  return e;
}

}  // namespace filament
