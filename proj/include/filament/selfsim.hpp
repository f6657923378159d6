#pragma once

#include <complex>
#include <span>
#include <vector>

#include "filament/geometry.hpp"

namespace filament {

/// Member of the self-similar family: curvature c0 / sqrt(t), torsion s / 2t.
struct SelfSimilarParams {
  double c0 = 0.2;
  double t = 1.0;
  Metric metric = Metric::Euclidean;
};

/// Uniform arclength grid s_i = -L + i ds, ds = 2L / N, i = 0..N.
struct UniformGrid {
  double L = 0.0;
  int N = 0;

  double ds() const { return 2.0 * L / N; }
  double node(int i) const { return -L + i * ds(); }
  std::size_t size() const { return static_cast<std::size_t>(N) + 1; }
  std::vector<double> nodes() const;

  /// Grid with N = round(2L / ds). Throws InvalidArgument when N is odd or
  /// ds does not divide 2L.
  static UniformGrid from_spacing(double L, double ds);
};

struct FrameProfile {
  std::vector<double> s;
  std::vector<FrameTriad> frames;
  SelfSimilarParams params;
};

/// A^{+-} (limits of T) and B^{+-} (limits of (e1 - i e2) with the oscillating
/// phase removed).
struct AsymptoticConstants {
  Vec3 A_plus{0.0, 0.0, 1.0};
  Vec3 A_minus{0.0, 0.0, 1.0};
  ComplexVec3 B_plus;
  ComplexVec3 B_minus;
};

struct ZProfile {
  std::vector<double> s;
  std::vector<std::complex<double>> z;
  SelfSimilarParams params;
};

struct CurveSamples {
  std::vector<double> s;
  std::vector<Vec3> X;
  double t = 1.0;
};

/// Integrates the Frenet system of the self-similar profile on the uniform
/// grid [-L, L] with spacing ds, one RK4 step per node, renormalizing the
/// triad after every step. The node s = 0 carries the identity frame.
FrameProfile integrate_frenet_profile(const SelfSimilarParams& p, double L, double ds);

/// Frames of the self-similar profile at arbitrary nodes (any order, any
/// sign). Each outward sweep from s = 0 uses RK4 steps no longer than
/// max_step and lands exactly on every requested node.
std::vector<FrameTriad> frenet_frames_at(const SelfSimilarParams& p, std::span<const double> nodes,
                                         double max_step);

/// A3 = exp(-+ c0^2 pi / 2).
double closed_form_A3(double c0, Metric m);

/// Corner values of the step datum: A^{+-} = (+-sqrt(+-(1 - e^{-+c0^2 pi})), 0, A3).
AsymptoticConstants closed_form_corner(double c0, Metric m);

/// Estimates A^{+-}, B^{+-} from the profile ends (requires L >= 20).
AsymptoticConstants extract_asymptotics(const FrameProfile& fp);

/// Constants used by the second-order boundary conditions, taken from the
/// frames at s = +-L, time t0:
///   A~ = T(+-L) +- 2 c0 sqrt(t0) e2(+-L) / L,
///   B~ = (e1 - i e2)(+-L) exp(-i L^2 / 4 t0).
AsymptoticConstants boundary_constants(const FrameTriad& at_minus, const FrameTriad& at_plus,
                                       double c0, double t0, double L);

enum class Side { Minus, Plus };

/// Second-order asymptotic tangent at s = +-L, time t, normalized:
///   T(+L) = A~+ + 2 c0 sqrt(t) Im[B~+ e^{i L^2/4t}] / L
///   T(-L) = A~- - 2 c0 sqrt(t) Im[B~- e^{i L^2/4t}] / L
Vec3 second_order_boundary_tangent(const AsymptoticConstants& k, Side side, double c0, double t,
                                   double L, Metric m);

/// Solves g'' = i (s/2t) g' +- 2 conj(g) g'^2 / (1 +- |g|^2), g(0) = 0,
/// g'(0) = c0 / (2 sqrt t) by RK4 with step ds on [0, L]; negative half by
/// antisymmetry.
ZProfile integrate_profile_z(const SelfSimilarParams& p, double L, double ds);

/// Profile values (and first derivatives when zs is non-null) at arbitrary
/// nodes, RK4 steps no longer than max_step.
std::vector<std::complex<double>> profile_z_at(const SelfSimilarParams& p,
                                               std::span<const double> nodes, double max_step,
                                               std::vector<std::complex<double>>* zs = nullptr);

/// Rebuilds X from uniformly spaced tangents with the fourth-order marching
/// quadrature, anchored at X(0) = 2 c0 sqrt(t) (0, 1, 0) on the centre node.
CurveSamples reconstruct_X(std::span<const Vec3> T, const SelfSimilarParams& p, double ds);

}  // namespace filament
