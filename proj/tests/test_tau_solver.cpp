#include <Eigen/Dense>
#include <random>

#include "doctest.h"
#include "filament/chebyshev.hpp"
#include "filament/errors.hpp"
#include "filament/tau_solver.hpp"

using namespace filament;

namespace {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Dense tau system: rows 0..N-2 of sigma I - i D^2 in coefficient space,
// followed by the two boundary rows.
cvec dense_solve(int N, double L, double sigma, const cvec& f, const BoundaryRows& bc) {
  CMat D = CMat::Zero(N + 1, N + 1);
  for (int k = 0; k <= N; ++k) {
    cvec e(N + 1, cd{});
    e[k] = 1.0;
    const cvec d = cheb_derivative(e, L);
    for (int j = 0; j <= N; ++j) D(j, k) = d[j];
  }
  CMat A = sigma * CMat::Identity(N + 1, N + 1) - cd(0, 1) * (D * D);
  CVec rhs(N + 1);
  for (int j = 0; j <= N; ++j) rhs(j) = f[j];
  for (int k = 0; k <= N; ++k) {
    const double sm = (k % 2 == 0) ? 1.0 : -1.0;
    if (bc.kind == BoundaryRowKind::Dirichlet) {
      A(N - 1, k) = sm;
      A(N, k) = 1.0;
    } else {
      A(N - 1, k) = -sm * k * k / L;
      A(N, k) = double(k) * k / L;
    }
  }
  rhs(N - 1) = bc.at_minus;
  rhs(N) = bc.at_plus;
  const CVec x = A.fullPivLu().solve(rhs);
  return cvec(x.data(), x.data() + N + 1);
}

cvec random_rhs(int N, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  cvec f(N + 1);
  for (int k = 0; k <= N; ++k) f[k] = cd(u(rng), u(rng)) / (1.0 + 0.1 * k);
  return f;
}

double rel_diff(const cvec& a, const cvec& b) {
  double m = 0.0, s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
    s = std::max(s, std::abs(b[i]));
  }
  return m / std::max(1.0, s);
}

}  // namespace

TEST_CASE("tau solve agrees with the dense oracle") {
  std::mt19937_64 rng(11);
  for (auto kind : {BoundaryRowKind::Dirichlet, BoundaryRowKind::Neumann}) {
    for (int N : {4, 8, 16, 64}) {
      for (double L : {1.0, 10.0}) {
        for (double sigma : {1.5e4, -3e5, 2.0}) {
          CAPTURE(N);
          CAPTURE(L);
          CAPTURE(sigma);
          const cvec f = random_rhs(N, rng);
          const BoundaryRows bc{kind, cd(0.3, -0.2), cd(-0.1, 0.7)};
          const TauHelmholtzSolver solver(N, L, sigma);
          const cvec a = solver.solve(f, bc);
          CHECK(rel_diff(a, dense_solve(N, L, sigma, f, bc)) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("boundary rows are met exactly") {
  std::mt19937_64 rng(3);
  const int N = 512;
  const double L = 10.0;
  const TauHelmholtzSolver solver(N, L, -1.5e6);
  const cvec f = random_rhs(N, rng);
  SUBCASE("Dirichlet") {
    const BoundaryRows bc{BoundaryRowKind::Dirichlet, cd(0.25, 0.5), cd(-0.75, 0.125)};
    const cvec a = solver.solve(f, bc);
    CHECK(std::abs(cheb_value_at_minus_one(a) - bc.at_minus) < 1e-10);
    CHECK(std::abs(cheb_value_at_plus_one(a) - bc.at_plus) < 1e-10);
  }
  SUBCASE("Neumann") {
    const BoundaryRows bc{BoundaryRowKind::Neumann, cd(0.01, -0.02), cd(0.03, 0.04)};
    const cvec a = solver.solve(f, bc);
    const cvec b = cheb_derivative(a, L);
    CHECK(std::abs(cheb_value_at_minus_one(b) - bc.at_minus) < 1e-10);
    CHECK(std::abs(cheb_value_at_plus_one(b) - bc.at_plus) < 1e-10);
  }
}

TEST_CASE("interior equations hold for a large system") {
  std::mt19937_64 rng(7);
  const int N = 256;
  const double L = 10.0;
  const double sigma = 1.5e6;
  const TauHelmholtzSolver solver(N, L, sigma);
  const cvec f = random_rhs(N, rng);
  const cvec a = solver.solve(f, BoundaryRows{BoundaryRowKind::Dirichlet, 0.1, 0.2});
  const cvec a2 = cheb_derivative(cheb_derivative(a, L), L);
  double scale = 0.0;
  for (const auto& v : f) scale = std::max(scale, std::abs(v));
  for (int k = 0; k <= N - 2; ++k) {
    CHECK(std::abs(sigma * a[k] - cd(0, 1) * a2[k] - f[k]) < 1e-9 * scale * sigma);
  }
}

TEST_CASE("invalid construction and input lengths") {
  CHECK_THROWS_AS(TauHelmholtzSolver(3, 1.0, 1.0), Error);
  CHECK_THROWS_AS(TauHelmholtzSolver(8, 0.0, 1.0), Error);
  const TauHelmholtzSolver s(8, 1.0, 1.0);
  CHECK_THROWS_AS(s.solve(cvec(5), BoundaryRows{}), Error);
}
