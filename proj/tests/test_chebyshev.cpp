#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "filament/chebyshev.hpp"
#include "filament/errors.hpp"

using namespace filament;

namespace {

// Direct cosine sums on the Gauss-Lobatto nodes.
cvec oracle_transform(const cvec& v) {
  const int N = static_cast<int>(v.size()) - 1;
  cvec a(v.size());
  for (int k = 0; k <= N; ++k) {
    cd acc{};
    for (int i = 0; i <= N; ++i) {
      const double w = (i == 0 || i == N) ? 0.5 : 1.0;
      acc += w * v[i] * std::cos(std::numbers::pi * i * k / N);
    }
    const double ck = (k == 0 || k == N) ? 2.0 : 1.0;
    a[k] = 2.0 * acc / (N * ck);
  }
  return a;
}

cvec oracle_inverse(const cvec& a) {
  const int N = static_cast<int>(a.size()) - 1;
  cvec v(a.size());
  for (int i = 0; i <= N; ++i) {
    cd acc{};
    for (int k = 0; k <= N; ++k) acc += a[k] * std::cos(std::numbers::pi * i * k / N);
    v[i] = acc;
  }
  return v;
}

double max_diff(const cvec& a, const cvec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const cvec& a) {
  double m = 0.0;
  for (const auto& v : a) m = std::max(m, std::abs(v));
  return m;
}

cvec unit(int N, int k) {
  cvec a(N + 1, cd{});
  a[k] = 1.0;
  return a;
}

}  // namespace

TEST_CASE("grid nodes") {
  const auto g = ChebyshevGrid::make(10.0, 8);
  CHECK(g.node(0) == 10.0);
  CHECK(g.node(8) == -10.0);
  CHECK(g.node(4) == 0.0);
  for (int i = 0; i < 8; ++i) CHECK(g.node(i) > g.node(i + 1));
  for (int i = 0; i <= 8; ++i) CHECK(g.node(i) == -g.node(8 - i));
  CHECK_THROWS_AS(ChebyshevGrid::make(10.0, 7), Error);
  CHECK_THROWS_AS(ChebyshevGrid::make(-1.0, 8), Error);
}

TEST_CASE("transform examples") {
  const auto g = ChebyshevGrid::make(3.0, 16);
  const cvec c = cheb_transform(cvec(17, cd(2.5, -1.0)));
  CHECK(std::abs(c[0] - cd(2.5, -1.0)) < 1e-15);
  for (int k = 1; k <= 16; ++k) CHECK(std::abs(c[k]) < 1e-15);
  cvec lin(17);
  for (int i = 0; i <= 16; ++i) lin[i] = g.node(i) / g.L;
  const cvec a = cheb_transform(lin);
  CHECK(std::abs(a[1] - 1.0) < 1e-15);
  for (int k = 0; k <= 16; ++k) {
    if (k != 1) CHECK(std::abs(a[k]) < 1e-15);
  }
  try {
    (void)cheb_transform(cvec(8));
    FAIL("expected BadLength");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadLength);
  }
}

TEST_CASE("transform agrees with the cosine-sum oracle and round-trips") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int N : {4, 8, 64, 256, 1024}) {
    const auto g = ChebyshevGrid::make(1.0, N);
    cvec v(N + 1);
    const double p = u(rng), q = u(rng);
    for (int i = 0; i <= N; ++i) {
      const double x = g.node(i);
      v[i] = cd(std::exp(p * x) * std::cos(3 * x), std::sin(2 * x + q));
    }
    const cvec a = cheb_transform(v);
    CHECK(max_diff(a, oracle_transform(v)) < 1e-13);
    CHECK(max_diff(cheb_inverse(a), v) < 1e-13 * std::max(1.0, max_abs(v)));
    CHECK(max_diff(oracle_inverse(a), v) < 1e-12);
    cvec r(N + 1);
    for (auto& x : r) x = {u(rng), u(rng)};
    CHECK(max_diff(cheb_inverse(cheb_transform(r)), r) < 1e-13);
  }
}

TEST_CASE("transform object works in place") {
  ChebyshevTransform tr(32);
  cvec v(33);
  for (int i = 0; i <= 32; ++i) v[i] = cd(i * 0.1, -i * 0.05);
  const cvec ref = cheb_transform(v);
  cvec w = v;
  tr.forward(w, w);
  CHECK(max_diff(w, ref) == 0.0);
  tr.inverse(w, w);
  CHECK(max_diff(w, v) < 1e-13);
}

TEST_CASE("derivative examples") {
  const double L = 4.0;
  const cvec d1 = cheb_derivative(unit(8, 1), L);
  CHECK(std::abs(d1[0] - 1.0 / L) < 1e-15);
  for (int k = 1; k <= 8; ++k) CHECK(d1[k] == cd{});
  const cvec d2 = cheb_derivative(unit(8, 2), L);
  CHECK(std::abs(d2[1] - 4.0 / L) < 1e-15);
  CHECK(std::abs(d2[0]) < 1e-15);
  for (const auto& b : cheb_derivative(unit(8, 0), L)) CHECK(b == cd{});
  for (int k = 0; k <= 8; ++k) CHECK(cheb_derivative(unit(8, k), L)[8] == cd{});
}

TEST_CASE("derivative of T_k matches the analytic derivative for k <= 8") {
  const double L = 2.5;
  const auto g = ChebyshevGrid::make(L, 16);
  for (int k = 0; k <= 8; ++k) {
    const cvec b = cheb_derivative(unit(16, k), L);
    const cvec vals = cheb_inverse(b);
    for (int i = 1; i < 16; ++i) {
      const double x = g.node(i) / L;
      const double th = std::acos(x);
      // d/ds T_k(s/L) = k sin(k th) / (L sin th)
      const double exact = k * std::sin(k * th) / (L * std::sin(th));
      CHECK(std::abs(vals[i] - exact) < 1e-12);
    }
    // Endpoints: T_k'(+-1) = (+-1)^{k+1} k^2
    CHECK(std::abs(vals[0] - k * k / L) < 1e-12);
    CHECK(std::abs(vals[16] - ((k % 2 == 0) ? -1.0 : 1.0) * k * k / L) < 1e-12);
  }
}

TEST_CASE("recurrence consistency and agreement with finite differences") {
  const double L = 10.0;
  const int N = 256;
  const auto g = ChebyshevGrid::make(L, N);
  cvec v(N + 1);
  for (int i = 0; i <= N; ++i) v[i] = std::exp(cd(0, 0.3 * g.node(i))) / (1.0 + 0.01 * g.node(i) * g.node(i));
  const cvec a = cheb_transform(v);
  const cvec b = cheb_derivative(a, L);
  CHECK(b[N] == cd{});
  for (int k = 1; k <= N; ++k) {
    const double ck1 = k == 1 ? 2.0 : 1.0;
    const cd lhs = ck1 * b[k - 1];
    const cd rhs = (k + 1 <= N ? b[k + 1] : cd{}) + (2.0 * k / L) * a[k];
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
  const cvec d = cheb_inverse(b);
  for (int i = 2; i + 2 <= N; ++i) {
    const double h1 = g.node(i - 1) - g.node(i);
    const double h2 = g.node(i) - g.node(i + 1);
    const cd fd = (v[i - 1] * h2 * h2 - v[i + 1] * h1 * h1 - v[i] * (h2 * h2 - h1 * h1)) /
                  (h1 * h2 * (h1 + h2));
    CHECK(std::abs(fd - d[i]) < 5.0 * std::max(h1, h2) * std::max(h1, h2));
  }
}

TEST_CASE("antiderivative inverts the derivative") {
  const double L = 3.0;
  const cvec a{0.5, -0.25, 1.0, 0.125, -0.5, 0.0, 0.2, 0.0, 0.1};
  const cvec A = cheb_antiderivative(a, L);
  CHECK(A.size() == a.size() + 1);
  CHECK(A[0] == cd{});
  cvec back = cheb_derivative(A, L);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(back[k] - a[k]) < 1e-14);
  // Integral of a constant from 0 to s is s.
  const cvec one = cheb_antiderivative(cvec{1.0, 0.0, 0.0}, L);
  CHECK(std::abs(cheb_value_at_plus_one(one) - cheb_value_at_zero(one) - L) < 1e-14);
  CHECK(std::abs(cheb_value_at_minus_one(one) - cheb_value_at_zero(one) + L) < 1e-14);
}

TEST_CASE("Clenshaw evaluation and the closed forms at +-1 and 0") {
  const cvec a{0.3, cd(0.1, 0.2), -0.7, 0.05, cd(0, 0.4)};
  auto direct = [&](double x) {
    cd acc{};
    for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * std::cos(k * std::acos(x));
    return acc;
  };
  for (double x : {-1.0, -0.3, 0.0, 0.45, 1.0}) CHECK(std::abs(cheb_evaluate(a, x) - direct(x)) < 1e-14);
  CHECK(std::abs(cheb_value_at_plus_one(a) - direct(1.0)) < 1e-14);
  CHECK(std::abs(cheb_value_at_minus_one(a) - direct(-1.0)) < 1e-14);
  CHECK(std::abs(cheb_value_at_zero(a) - direct(0.0)) < 1e-14);
}

TEST_CASE("spectral interpolation") {
  SUBCASE("constant series") {
    const cvec a{cd(2.0, 1.0), 0.0, 0.0};
    const std::vector<double> pts{-5.0, 0.1, 4.9};
    for (const auto& v : spectral_interpolate(a, 5.0, pts)) CHECK(std::abs(v - cd(2.0, 1.0)) < 1e-15);
  }
  SUBCASE("cubic sampled on N = 8 is reproduced exactly") {
    const double L = 2.0;
    const auto g = ChebyshevGrid::make(L, 8);
    auto poly = [](double s) { return cd(1.0 - 2.0 * s + 0.5 * s * s * s, 0.25 * s * s); };
    cvec v(9);
    for (int i = 0; i <= 8; ++i) v[i] = poly(g.node(i));
    const cvec a = cheb_transform(v);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-L, L);
    std::vector<double> pts(5);
    for (auto& p : pts) p = u(rng);
    const cvec out = spectral_interpolate(a, L, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(out[i] - poly(pts[i])) < 1e-13);
  }
  SUBCASE("restart onto a smaller Chebyshev grid") {
    const auto big = ChebyshevGrid::make(50.0, 512);
    cvec v(big.size());
    for (int i = 0; i <= big.N; ++i) v[i] = std::tanh(0.1 * big.node(i));
    const auto small = ChebyshevGrid::make(10.0, 64);
    const cvec out = spectral_interpolate(cheb_transform(v), 50.0, small.nodes());
    for (int i = 0; i <= small.N; ++i) CHECK(std::abs(out[i] - std::tanh(0.1 * small.node(i))) < 1e-10);
  }
  try {
    const std::vector<double> pts{5.5};
    (void)spectral_interpolate(cvec{1.0, 0.0, 0.0}, 5.0, pts);
    FAIL("expected OutOfDomain");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfDomain);
  }
}

TEST_CASE("filter") {
  const cvec a{1e-15, 1e-13, cd(0, 5e-15), 0.5, cd(1e-14, 0)};
  const cvec f = spectral_filter(a);
  CHECK(f[0] == cd{});
  CHECK(f[1] == a[1]);
  CHECK(f[2] == cd{});
  CHECK(f[3] == a[3]);
  CHECK(f[4] == a[4]);
  CHECK(spectral_filter(f) == f);
}
