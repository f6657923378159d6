#include "filament/selfsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "filament/errors.hpp"

namespace filament {

namespace {

using cd = std::complex<double>;

struct FrenetRates {
  double curvature;  // c0 / sqrt(t)
  double inv_2t;     // torsion = s * inv_2t
  double sgn;        // metric sign
};

FrameTriad frenet_rhs(const FrameTriad& f, double s, const FrenetRates& r) {
  const double tau = s * r.inv_2t;
  return {r.curvature * f.e1, (-r.sgn * r.curvature) * f.T + tau * f.e2, (-tau) * f.e1};
}

FrameTriad axpy(const FrameTriad& f, double h, const FrameTriad& k) {
  return {f.T + h * k.T, f.e1 + h * k.e1, f.e2 + h * k.e2};
}

FrameTriad rk4_frenet(const FrameTriad& f, double s, double h, const FrenetRates& r) {
  const FrameTriad k1 = frenet_rhs(f, s, r);
  const FrameTriad k2 = frenet_rhs(axpy(f, 0.5 * h, k1), s + 0.5 * h, r);
  const FrameTriad k3 = frenet_rhs(axpy(f, 0.5 * h, k2), s + 0.5 * h, r);
  const FrameTriad k4 = frenet_rhs(axpy(f, h, k3), s + h, r);
  const double w = h / 6.0;
  return {f.T + w * (k1.T + 2.0 * k2.T + 2.0 * k3.T + k4.T),
          f.e1 + w * (k1.e1 + 2.0 * k2.e1 + 2.0 * k3.e1 + k4.e1),
          f.e2 + w * (k1.e2 + 2.0 * k2.e2 + 2.0 * k3.e2 + k4.e2)};
}

// State (g, g') of the projected profile ODE.
struct ZState {
  cd g;
  cd w;
};

ZState z_rhs(const ZState& u, double s, double inv_2t, double sgn) {
  const double r2 = std::norm(u.g);
  const double denom = 1.0 + sgn * r2;
  const cd nonlinear = sgn * 2.0 * std::conj(u.g) * u.w * u.w / denom;
  return {u.w, cd(0.0, s * inv_2t) * u.w + nonlinear};
}

ZState rk4_z(const ZState& u, double s, double h, double inv_2t, double sgn) {
  const auto add = [](const ZState& a, double c, const ZState& k) {
    return ZState{a.g + c * k.g, a.w + c * k.w};
  };
  const ZState k1 = z_rhs(u, s, inv_2t, sgn);
  const ZState k2 = z_rhs(add(u, 0.5 * h, k1), s + 0.5 * h, inv_2t, sgn);
  const ZState k3 = z_rhs(add(u, 0.5 * h, k2), s + 0.5 * h, inv_2t, sgn);
  const ZState k4 = z_rhs(add(u, h, k3), s + h, inv_2t, sgn);
  return {u.g + (h / 6.0) * (k1.g + 2.0 * k2.g + 2.0 * k3.g + k4.g),
          u.w + (h / 6.0) * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w)};
}

void check_params(const SelfSimilarParams& p) {
  if (!(p.c0 >= 0.0) || !(p.t > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "self-similar parameters need c0 >= 0 and t > 0");
  }
}

// Runs `advance(state, s, h)` outward from s = 0 along one sign of the nodes,
// landing exactly on each one, and calls `emit(index, state)` on arrival.
template <class State, class Advance, class Emit>
void sweep(std::span<const double> nodes, double direction, double max_step, State state,
           Advance advance, Emit emit) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (direction * nodes[i] > 0.0) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(nodes[a]) < std::abs(nodes[b]);
  });
  double pos = 0.0;
  for (std::size_t idx : order) {
    const double target = nodes[idx];
    const double gap = target - pos;
    if (gap != 0.0) {
      const auto steps =
          static_cast<long>(std::max(1.0, std::ceil(std::abs(gap) / max_step - 1e-9)));
      const double h = gap / static_cast<double>(steps);
      for (long k = 0; k < steps; ++k) {
        state = advance(state, pos + k * h, h);
      }
      pos = target;
    }
    emit(idx, state);
  }
}

}  // namespace

std::vector<double> UniformGrid::nodes() const {
  std::vector<double> s(size());
  for (int i = 0; i <= N; ++i) s[i] = node(i);
  return s;
}

UniformGrid UniformGrid::from_spacing(double L, double ds) {
  if (!(L > 0.0) || !(ds > 0.0) || ds > L) {
    throw Error(ErrorKind::InvalidArgument, "uniform grid needs L > 0 and 0 < ds <= L");
  }
  const double ratio = 2.0 * L / ds;
  const auto n = static_cast<int>(std::lround(ratio));
  if (std::abs(ratio - n) > 1e-6 * ratio) {
    throw Error(ErrorKind::InvalidArgument, "ds does not divide 2L");
  }
  if (n % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument, "2L/ds must be even so that s = 0 is a node");
  }
  return {L, n};
}

std::vector<FrameTriad> frenet_frames_at(const SelfSimilarParams& p, std::span<const double> nodes,
                                         double max_step) {
  check_params(p);
  if (!(max_step > 0.0)) throw Error(ErrorKind::InvalidArgument, "max_step must be positive");
  const FrenetRates rates{p.c0 / std::sqrt(p.t), 0.5 / p.t, sign(p.metric)};
  std::vector<FrameTriad> out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] == 0.0) out[i] = FrameTriad{};
  }
  const auto advance = [&](const FrameTriad& f, double s, double h) {
    return normalize(rk4_frenet(f, s, h, rates), p.metric);
  };
  const auto emit = [&](std::size_t i, const FrameTriad& f) { out[i] = f; };
  sweep(nodes, +1.0, max_step, FrameTriad{}, advance, emit);
  sweep(nodes, -1.0, max_step, FrameTriad{}, advance, emit);
  return out;
}

FrameProfile integrate_frenet_profile(const SelfSimilarParams& p, double L, double ds) {
  const UniformGrid grid = UniformGrid::from_spacing(L, ds);
  FrameProfile fp;
  fp.s = grid.nodes();
  fp.s[grid.N / 2] = 0.0;
  for (int i = 0; i < grid.N / 2; ++i) fp.s[i] = -fp.s[grid.N - i];
  fp.frames = frenet_frames_at(p, fp.s, grid.ds());
  fp.params = p;
  return fp;
}

double closed_form_A3(double c0, Metric m) {
  return std::exp(-sign(m) * c0 * c0 * std::numbers::pi / 2.0);
}

AsymptoticConstants closed_form_corner(double c0, Metric m) {
  const double sgn = sign(m);
  const double a1 = std::sqrt(sgn * (1.0 - std::exp(-sgn * c0 * c0 * std::numbers::pi)));
  const double a3 = closed_form_A3(c0, m);
  AsymptoticConstants k;
  k.A_plus = {a1, 0.0, a3};
  k.A_minus = {-a1, 0.0, a3};
  return k;
}

namespace {

ComplexVec3 times(const ComplexVec3& v, cd w) {
  return {w.real() * v.re - w.imag() * v.im, w.real() * v.im + w.imag() * v.re};
}

// Removes the A-component of u + i v under the signed product.
ComplexVec3 project_out(const ComplexVec3& v, const Vec3& A, Metric m) {
  const double aa = dot_pm(A, A, m);
  return {v.re - (dot_pm(A, v.re, m) / aa) * A, v.im - (dot_pm(A, v.im, m) / aa) * A};
}

}  // namespace

AsymptoticConstants extract_asymptotics(const FrameProfile& fp) {
  if (fp.s.size() < 2) throw Error(ErrorKind::TooFewNodes, "profile needs both ends");
  const double L = std::min(-fp.s.front(), fp.s.back());
  if (L < 20.0) {
    std::ostringstream msg;
    msg << "asymptotic extraction needs L >= 20, got " << L;
    throw Error(ErrorKind::InsufficientDomain, msg.str());
  }
  const auto& p = fp.params;
  const double m_corr = 2.0 * p.c0 * std::sqrt(p.t) / L;
  const FrameTriad& lo = fp.frames.front();
  const FrameTriad& hi = fp.frames.back();

  AsymptoticConstants k;
  k.A_plus = normalize(hi.T + m_corr * hi.e2, NormTarget::MetricSign, p.metric);
  k.A_minus = normalize(lo.T - m_corr * lo.e2, NormTarget::MetricSign, p.metric);

  const double phase = L * L / (4.0 * p.t);
  const double log_phase = p.c0 * p.c0 * std::log(L / std::sqrt(p.t));
  const cd rot_plus = std::polar(1.0, -phase - log_phase);
  const cd rot_minus = std::polar(1.0, -phase + log_phase);
  k.B_plus = times(project_out({hi.e1, -hi.e2}, k.A_plus, p.metric), rot_plus);
  k.B_minus = times(project_out({lo.e1, -lo.e2}, k.A_minus, p.metric), rot_minus);
  return k;
}

AsymptoticConstants boundary_constants(const FrameTriad& at_minus, const FrameTriad& at_plus,
                                       double c0, double t0, double L) {
  const double m_corr = 2.0 * c0 * std::sqrt(t0) / L;
  const cd rot = std::polar(1.0, -L * L / (4.0 * t0));
  AsymptoticConstants k;
  k.A_plus = at_plus.T + m_corr * at_plus.e2;
  k.A_minus = at_minus.T - m_corr * at_minus.e2;
  k.B_plus = times({at_plus.e1, -at_plus.e2}, rot);
  k.B_minus = times({at_minus.e1, -at_minus.e2}, rot);
  return k;
}

Vec3 second_order_boundary_tangent(const AsymptoticConstants& k, Side side, double c0, double t,
                                   double L, Metric m) {
  const double phase = L * L / (4.0 * t);
  const double sn = std::sin(phase);
  const double cs = std::cos(phase);
  const ComplexVec3& B = side == Side::Plus ? k.B_plus : k.B_minus;
  const Vec3 im = sn * B.re + cs * B.im;  // Im[B e^{i phase}]
  const double amp = 2.0 * c0 * std::sqrt(t) / L;
  const Vec3 raw = side == Side::Plus ? k.A_plus + amp * im : k.A_minus - amp * im;
  return normalize(raw, NormTarget::MetricSign, m);
}

std::vector<cd> profile_z_at(const SelfSimilarParams& p, std::span<const double> nodes,
                             double max_step, std::vector<cd>* zs) {
  check_params(p);
  if (!(max_step > 0.0)) throw Error(ErrorKind::InvalidArgument, "max_step must be positive");
  const double sgn = sign(p.metric);
  const double inv_2t = 0.5 / p.t;
  const ZState origin{cd(0.0), cd(p.c0 / (2.0 * std::sqrt(p.t)))};

  std::vector<cd> g(nodes.size());
  std::vector<cd> w(nodes.size(), origin.w);
  // Positive half only; the profile is odd in s and its derivative even.
  std::vector<double> magnitudes(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) magnitudes[i] = std::abs(nodes[i]);

  const auto advance = [&](const ZState& u, double s, double h) {
    ZState next = rk4_z(u, s, h, inv_2t, sgn);
    if (p.metric == Metric::Hyperbolic && !(std::norm(next.g) < 1.0 - kDiscTolerance)) {
      throw Error(ErrorKind::DiscBoundary, "profile left the Poincare disc");
    }
    return next;
  };
  const auto emit = [&](std::size_t i, const ZState& u) {
    g[i] = nodes[i] < 0.0 ? -u.g : u.g;
    w[i] = u.w;
  };
  sweep(std::span<const double>(magnitudes), +1.0, max_step, origin, advance, emit);
  if (zs != nullptr) *zs = std::move(w);
  return g;
}

ZProfile integrate_profile_z(const SelfSimilarParams& p, double L, double ds) {
  const UniformGrid grid = UniformGrid::from_spacing(L, ds);
  ZProfile out;
  out.s = grid.nodes();
  out.s[grid.N / 2] = 0.0;
  // Mirror the nodes so that antisymmetry holds bit for bit.
  for (int i = 0; i < grid.N / 2; ++i) out.s[i] = -out.s[grid.N - i];
  out.z = profile_z_at(p, out.s, grid.ds());
  out.params = p;
  return out;
}

namespace {

// Integral of the cubic through stencil nodes q..q+3 over the sub-interval
// starting at node q + offset, in units of ds / 24.
constexpr double kMarchWeights[3][4] = {
    {9.0, 19.0, -5.0, 1.0},
    {-1.0, 13.0, 13.0, -1.0},
    {1.0, -5.0, 19.0, 9.0},
};

Vec3 interval_integral(std::span<const Vec3> T, std::size_t j, std::size_t q, double ds) {
  const auto& w = kMarchWeights[j - q];
  Vec3 acc;
  for (int r = 0; r < 4; ++r) acc += w[r] * T[q + r];
  return (ds / 24.0) * acc;
}

}  // namespace

CurveSamples reconstruct_X(std::span<const Vec3> T, const SelfSimilarParams& p, double ds) {
  if (T.size() < 4) throw Error(ErrorKind::TooFewNodes, "curve reconstruction needs >= 4 nodes");
  if (T.size() % 2 == 0) {
    throw Error(ErrorKind::InvalidArgument, "curve reconstruction needs a centre node at s = 0");
  }
  const std::size_t M = T.size() - 1;
  const std::size_t c = M / 2;
  CurveSamples out;
  out.t = p.t;
  out.s.resize(T.size());
  out.X.resize(T.size());
  for (std::size_t i = 0; i <= M; ++i) {
    out.s[i] = (static_cast<double>(i) - static_cast<double>(c)) * ds;
  }
  out.X[c] = Vec3{0.0, 2.0 * p.c0 * std::sqrt(p.t), 0.0};
  for (std::size_t j = c; j < M; ++j) {
    const std::size_t q = std::min(j, M - 3);
    out.X[j + 1] = out.X[j] + interval_integral(T, j, q, ds);
  }
  for (std::size_t j = c; j-- > 0;) {
    const std::size_t q = j >= 2 ? std::min(j - 2, M - 3) : 0;
    out.X[j] = out.X[j + 1] - interval_integral(T, j, q, ds);
  }
  return out;
}

}  // namespace filament
