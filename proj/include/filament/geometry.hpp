#pragma once

#include <complex>

namespace filament {

/// Target geometry of the tangent flow: the unit sphere (Euclidean) or the
/// hyperboloid model of H^2 (Hyperbolic). Every signed product below takes one.
enum class Metric { Euclidean, Hyperbolic };

/// +1 for Euclidean, -1 for Hyperbolic.
constexpr double sign(Metric m) { return m == Metric::Euclidean ? 1.0 : -1.0; }

const char* to_string(Metric m);

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double a) {
    x *= a;
    y *= a;
    z *= a;
    return *this;
  }
  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr Vec3 operator*(double a, Vec3 v) { return v *= a; }
  friend constexpr Vec3 operator*(Vec3 v, double a) { return v *= a; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

/// Complex vector u + i v, used for the e1 - i e2 combination.
struct ComplexVec3 {
  Vec3 re;
  Vec3 im;
};

/// Generalized Frenet triad at one node.
struct FrameTriad {
  Vec3 T{0.0, 0.0, 1.0};
  Vec3 e1{1.0, 0.0, 0.0};
  Vec3 e2{0.0, 1.0, 0.0};
};

/// a . b = a1 b1 + a2 b2 +- a3 b3
constexpr double dot_pm(const Vec3& a, const Vec3& b, Metric m) {
  return a.x * b.x + a.y * b.y + sign(m) * a.z * b.z;
}

/// Generalized cross product; the third component carries the metric sign.
constexpr Vec3 wedge_pm(const Vec3& a, const Vec3& b, Metric m) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, sign(m) * (a.x * b.y - a.y * b.x)};
}

enum class NormTarget {
  PlusOne,     // e1, e2: v.v = 1
  MetricSign,  // T: v.v = +-1
};

/// Rescales v so that its signed square equals the target. Throws
/// Error(NonNormalizable) when the radicand is not positive enough.
Vec3 normalize(const Vec3& v, NormTarget target, Metric m);

/// Renormalizes all three members of the triad (directions unchanged).
FrameTriad normalize(const FrameTriad& f, Metric m);

/// Stereographic projection from (0,0,-1): z = (T1 + i T2) / (1 + T3).
std::complex<double> stereo_project(const Vec3& T, Metric m);

/// Inverse of stereo_project. In hyperbolic mode z must lie in the open
/// Poincare disc.
Vec3 stereo_inverse(std::complex<double> z, Metric m);

inline constexpr double kNormalizeTolerance = 1e-14;
inline constexpr double kPoleTolerance = 1e-12;
inline constexpr double kDiscTolerance = 1e-12;

}  // namespace filament
