#include "filament/chebyshev.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "filament/errors.hpp"

namespace filament {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_length(std::size_t n) {
  if (n < 3 || (n - 1) % 2 != 0) {
    throw Error(ErrorKind::BadLength, "Chebyshev data needs N+1 values with N even and N >= 2");
  }
}

}  // namespace

double ChebyshevGrid::node(int i) const {
  if (2 * i == N) return 0.0;
  if (2 * i > N) return -node(N - i);
  return L * std::cos(std::numbers::pi * i / N);
}

std::vector<double> ChebyshevGrid::nodes() const {
  std::vector<double> s(size());
  for (int i = 0; i <= N; ++i) s[i] = node(i);
  return s;
}

ChebyshevGrid ChebyshevGrid::make(double L, int N) {
  if (!(L > 0.0)) throw Error(ErrorKind::InvalidArgument, "Chebyshev grid needs L > 0");
  check_length(static_cast<std::size_t>(std::max(N, 0)) + 1);
  return {L, N};
}

ChebyshevTransform::ChebyshevTransform(int N) : N_(N) {
  check_length(static_cast<std::size_t>(std::max(N, 0)) + 1);
  const int n = N + 1;
  std::vector<double> scratch(2 * static_cast<std::size_t>(n));
  std::lock_guard lock(planner_mutex());
  // Real and imaginary parts are two interleaved transforms.
  const fftw_r2r_kind kind = FFTW_REDFT00;
  plan_ = fftw_plan_many_r2r(1, &n, 2, scratch.data(), nullptr, 2, 1, scratch.data(), nullptr, 2,
                             1, &kind, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plan_ == nullptr) throw Error(ErrorKind::BadLength, "FFTW could not plan the transform");
}

ChebyshevTransform::~ChebyshevTransform() {
  if (plan_ != nullptr) {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
}

ChebyshevTransform::ChebyshevTransform(ChebyshevTransform&& other) noexcept
    : N_(other.N_), plan_(std::exchange(other.plan_, nullptr)) {}

ChebyshevTransform& ChebyshevTransform::operator=(ChebyshevTransform&& other) noexcept {
  if (this != &other) {
    if (plan_ != nullptr) {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    }
    N_ = other.N_;
    plan_ = std::exchange(other.plan_, nullptr);
  }
  return *this;
}

void ChebyshevTransform::forward(std::span<const cd> values, std::span<cd> coeffs) const {
  const std::size_t n = static_cast<std::size_t>(N_) + 1;
  if (values.size() != n || coeffs.size() != n) {
    throw Error(ErrorKind::BadLength, "transform length does not match the plan");
  }
  if (values.data() != coeffs.data()) std::copy(values.begin(), values.end(), coeffs.begin());
  double* buf = reinterpret_cast<double*>(coeffs.data());
  fftw_execute_r2r(static_cast<fftw_plan>(plan_), buf, buf);
  const double scale = 1.0 / N_;
  for (auto& c : coeffs) c *= scale;
  coeffs.front() *= 0.5;
  coeffs.back() *= 0.5;
}

void ChebyshevTransform::inverse(std::span<const cd> coeffs, std::span<cd> values) const {
  const std::size_t n = static_cast<std::size_t>(N_) + 1;
  if (values.size() != n || coeffs.size() != n) {
    throw Error(ErrorKind::BadLength, "transform length does not match the plan");
  }
  if (values.data() != coeffs.data()) std::copy(coeffs.begin(), coeffs.end(), values.begin());
  values.front() *= 2.0;
  values.back() *= 2.0;
  double* buf = reinterpret_cast<double*>(values.data());
  fftw_execute_r2r(static_cast<fftw_plan>(plan_), buf, buf);
  for (auto& v : values) v *= 0.5;
}

cvec cheb_transform(std::span<const cd> values) {
  check_length(values.size());
  ChebyshevTransform tr(static_cast<int>(values.size()) - 1);
  cvec out(values.size());
  tr.forward(values, out);
  return out;
}

cvec cheb_inverse(std::span<const cd> coeffs) {
  check_length(coeffs.size());
  ChebyshevTransform tr(static_cast<int>(coeffs.size()) - 1);
  cvec out(coeffs.size());
  tr.inverse(coeffs, out);
  return out;
}

void cheb_derivative(std::span<const cd> a, double L, std::span<cd> b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw Error(ErrorKind::BadLength, "derivative output length mismatch");
  if (n == 0) return;
  const double inv_L = 1.0 / L;
  const std::size_t N = n - 1;
  b[N] = 0.0;
  for (std::size_t k = N; k >= 1; --k) {
    const cd above = k + 1 <= N ? b[k + 1] : cd{};
    b[k - 1] = above + (2.0 * static_cast<double>(k) * inv_L) * a[k];
  }
  b[0] *= 0.5;
}

cvec cheb_derivative(std::span<const cd> a, double L) {
  cvec b(a.size());
  cheb_derivative(a, L, b);
  return b;
}

cvec cheb_antiderivative(std::span<const cd> a, double L) {
  const std::size_t n = a.size();  // N + 1
  cvec A(n + 1, cd{});
  auto coeff = [&](std::size_t k) { return k < n ? a[k] : cd{}; };
  for (std::size_t k = 1; k <= n; ++k) {
    const double ck1 = k == 1 ? 2.0 : 1.0;
    A[k] = L * (ck1 * coeff(k - 1) - coeff(k + 1)) / (2.0 * static_cast<double>(k));
  }
  return A;
}

cd cheb_evaluate(std::span<const cd> a, double x) {
  if (a.empty()) return {};
  cd b1{}, b2{};
  const double two_x = 2.0 * x;
  for (std::size_t k = a.size() - 1; k >= 1; --k) {
    const cd b0 = a[k] + two_x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return a[0] + x * b1 - b2;
}

cd cheb_value_at_plus_one(std::span<const cd> a) {
  cd acc{};
  for (const auto& v : a) acc += v;
  return acc;
}

cd cheb_value_at_minus_one(std::span<const cd> a) {
  cd acc{};
  for (std::size_t k = 0; k < a.size(); ++k) acc += (k % 2 == 0) ? a[k] : -a[k];
  return acc;
}

cd cheb_value_at_zero(std::span<const cd> a) {
  // T_k(0) = cos(k pi / 2)
  cd acc{};
  for (std::size_t k = 0; k < a.size(); k += 2) acc += (k % 4 == 0) ? a[k] : -a[k];
  return acc;
}

cvec spectral_interpolate(std::span<const cd> coeffs, double source_L,
                          std::span<const double> targets) {
  cvec out(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double x = targets[i] / source_L;
    if (!(std::abs(x) <= 1.0 + 1e-12)) {
      throw Error(ErrorKind::OutOfDomain, "interpolation target outside the source interval");
    }
    out[i] = cheb_evaluate(coeffs, std::clamp(x, -1.0, 1.0));
  }
  return out;
}

void spectral_filter_inplace(std::span<cd> coeffs, double eps) {
  for (auto& c : coeffs) {
    if (std::abs(c) < eps) c = cd{};
  }
}

cvec spectral_filter(std::span<const cd> coeffs, double eps) {
  cvec out(coeffs.begin(), coeffs.end());
  spectral_filter_inplace(out, eps);
  return out;
}

}  // namespace filament
