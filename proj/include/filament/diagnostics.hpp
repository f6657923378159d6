#pragma once

#include <complex>
#include <limits>
#include <span>
#include <vector>

#include "filament/geometry.hpp"

namespace filament {

struct CurvatureProfile {
  std::vector<double> c;
  double t = 0.0;
  /// Nodes whose signed radicand came out negative (clamped to zero).
  std::size_t clamped = 0;
};

/// c = sqrt(T_s . T_s) with centred differences inside and one-sided
/// second-order differences at both ends. Needs at least 3 nodes.
CurvatureProfile curvature_from_T(std::span<const Vec3> T, double ds, Metric m, double t = 0.0);

/// c = 2 |z_s| / (1 +- |z|^2)
CurvatureProfile curvature_from_z(std::span<const std::complex<double>> z,
                                  std::span<const std::complex<double>> zs, Metric m,
                                  double t = 0.0);

inline constexpr double kDegenerateDerivative = 1e-12;

struct TorsionProfile {
  /// NaN at flagged nodes.
  std::vector<double> tau;
  std::size_t flagged = 0;
};

/// tau = 2 Im(z conj(z_s)) / (|z|^2 +- 1) + Im(conj(z_s) z_ss) / |z_s|^2
TorsionProfile torsion_from_z(std::span<const std::complex<double>> z,
                              std::span<const std::complex<double>> zs,
                              std::span<const std::complex<double>> zss, Metric m);

struct FramePair {
  Vec3 e1;
  Vec3 e2;
};

/// Closed-form e1 = T_s / c and e2 = T ^ e1 in terms of z and z_s. Throws
/// Error(FrameDegenerate) where |z_s| <= 1e-12.
std::vector<FramePair> frame_from_z(std::span<const std::complex<double>> z,
                                    std::span<const std::complex<double>> zs, Metric m);
FramePair frame_from_z(std::complex<double> z, std::complex<double> zs, Metric m);

/// Trapezoidal integral of c^2 over arbitrary (monotone) nodes.
double energy_trapezoid(std::span<const double> c, std::span<const double> s);
/// Uniform spacing ds.
double energy_trapezoid(std::span<const double> c, double ds);

struct Window {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double s) const { return s >= lo && s <= hi; }
};

struct CurvatureError {
  double max_abs = 0.0;
  /// sqrt of the trapezoidal integral of the squared error over the window.
  double l2 = 0.0;
  /// |c(0,t) - c0/sqrt(t)| at the node closest to s = 0.
  double at_origin = 0.0;
};

/// Errors against the exact law c0 / sqrt(t), restricted to the window.
CurvatureError curvature_error(std::span<const double> s, std::span<const double> c, double c0,
                               double t, Window window = {});

}  // namespace filament
