#include "filament/tau_solver.hpp"

#include <cmath>

#include "filament/errors.hpp"

namespace filament {

namespace {

constexpr cd kI{0.0, 1.0};

double weight(BoundaryRowKind kind, int k) {
  return kind == BoundaryRowKind::Dirichlet ? 1.0 : static_cast<double>(k) * k;
}

void check_pivot(cd d) {
  if (!(std::abs(d) > 1e-300) || !std::isfinite(std::abs(d))) {
    throw Error(ErrorKind::SolverSingular, "tau system is singular");
  }
}

}  // namespace

TauHelmholtzSolver::TauHelmholtzSolver(int N, double L, double sigma)
    : N_(N), L_(L), sigma_(sigma), lambda_(-kI * L * L * sigma), kappa_(kI * L * L) {
  if (N < 2 || N % 2 != 0) throw Error(ErrorKind::BadLength, "tau solver needs an even N >= 2");
  if (!(L > 0.0)) throw Error(ErrorKind::InvalidArgument, "tau solver needs L > 0");
  even_.parity = 0;
  odd_.parity = 1;
  build(even_);
  build(odd_);
}

// Unknown r of a half has degree k = 2r + parity. Row r >= 1 is the integrated
// equation of degree k:
//   a_k - lambda (c_{k-2} a_{k-2}/(4k(k-1)) - [k<=N-2] a_k/(2(k^2-1))
//                 + [k<=N-4] a_{k+2}/(4k(k+1))) = kappa (same combination of f)
// Row 0 is the boundary row.
void TauHelmholtzSolver::build(Half& h) const {
  const int m = (N_ - h.parity) / 2 + 1;
  h.k.resize(m);
  h.alpha.assign(m, cd{});
  h.gamma.assign(m, cd{});
  h.denom.assign(m, cd{});
  h.q.assign(m, cd{});
  h.s.assign(m, cd{});
  std::vector<cd> beta(m, cd{});
  for (int r = 0; r < m; ++r) h.k[r] = 2 * r + h.parity;
  for (int r = 1; r < m; ++r) {
    const double k = h.k[r];
    const double c_km2 = h.k[r] == 2 ? 2.0 : 1.0;
    h.alpha[r] = -c_km2 * lambda_ / (4.0 * k * (k - 1.0));
    beta[r] = 1.0;
    if (h.k[r] <= N_ - 2) beta[r] += lambda_ / (2.0 * (k * k - 1.0));
    if (h.k[r] <= N_ - 4) h.gamma[r] = -lambda_ / (4.0 * k * (k + 1.0));
  }
  for (int r = m - 1; r >= 1; --r) {
    cd d = beta[r];
    if (r + 1 < m) d += h.gamma[r] * h.q[r + 1];
    check_pivot(d);
    h.denom[r] = d;
    h.q[r] = -h.alpha[r] / d;
  }
  h.s[0] = 1.0;
  h.ws_dirichlet = weight(BoundaryRowKind::Dirichlet, h.k[0]);
  h.ws_neumann = weight(BoundaryRowKind::Neumann, h.k[0]) * h.s[0];
  for (int r = 1; r < m; ++r) {
    h.s[r] = h.q[r] * h.s[r - 1];
    h.ws_dirichlet += weight(BoundaryRowKind::Dirichlet, h.k[r]) * h.s[r];
    h.ws_neumann += weight(BoundaryRowKind::Neumann, h.k[r]) * h.s[r];
  }
}

void TauHelmholtzSolver::solve_half(const Half& h, std::span<const cd> f, BoundaryRowKind kind,
                                    cd target, std::span<cd> a) const {
  const int m = static_cast<int>(h.k.size());
  std::vector<cd> p(m, cd{});
  for (int r = m - 1; r >= 1; --r) {
    const int k = h.k[r];
    const double kd = k;
    const double c_km2 = k == 2 ? 2.0 : 1.0;
    cd g = c_km2 * f[k - 2] / (4.0 * kd * (kd - 1.0));
    if (k <= N_ - 2) g -= f[k] / (2.0 * (kd * kd - 1.0));
    if (k <= N_ - 4) g += f[k + 2] / (4.0 * kd * (kd + 1.0));
    g *= kappa_;
    if (r + 1 < m) g -= h.gamma[r] * p[r + 1];
    p[r] = g / h.denom[r];
  }
  // Particular solution with x_0 = 0, accumulated into the boundary row.
  cd wr{};
  cd rprev{};
  for (int r = 1; r < m; ++r) {
    const cd rr = p[r] + h.q[r] * rprev;
    wr += weight(kind, h.k[r]) * rr;
    rprev = rr;
  }
  const cd ws = kind == BoundaryRowKind::Dirichlet ? h.ws_dirichlet : h.ws_neumann;
  if (!(std::abs(ws) > 1e-300)) {
    throw Error(ErrorKind::SolverSingular, "tau boundary row is degenerate");
  }
  cd x = (target - wr) / ws;
  a[h.k[0]] = x;
  for (int r = 1; r < m; ++r) {
    x = p[r] + h.q[r] * x;
    a[h.k[r]] = x;
  }
}

void TauHelmholtzSolver::solve(std::span<const cd> f, const BoundaryRows& bc,
                               std::span<cd> a) const {
  const std::size_t n = static_cast<std::size_t>(N_) + 1;
  if (f.size() != n || a.size() != n) {
    throw Error(ErrorKind::BadLength, "tau solve length does not match the solver");
  }
  // sum a_k = u(+L), sum (-1)^k a_k = u(-L); for derivatives the weights are k^2
  // times 1/L, with the parities of T_k'(-1) flipped.
  const cd u1 = bc.at_minus;
  const cd u2 = bc.at_plus;
  cd h_even, h_odd;
  if (bc.kind == BoundaryRowKind::Dirichlet) {
    h_even = 0.5 * (u1 + u2);
    h_odd = 0.5 * (u2 - u1);
  } else {
    h_even = 0.5 * L_ * (u2 - u1);
    h_odd = 0.5 * L_ * (u2 + u1);
  }
  solve_half(even_, f, bc.kind, h_even, a);
  solve_half(odd_, f, bc.kind, h_odd, a);
}

cvec TauHelmholtzSolver::solve(std::span<const cd> f, const BoundaryRows& bc) const {
  cvec a(f.size());
  solve(f, bc, a);
  return a;
}

}  // namespace filament
