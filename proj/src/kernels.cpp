#include "filament/kernels.hpp"

namespace filament::kernels {

namespace {

inline Vec3 stencil(std::span<const Vec3> T, std::size_t i, double inv_ds2, Metric m) {
  const Vec3 d2 = inv_ds2 * (T[i + 1] - 2.0 * T[i] + T[i - 1]);
  return wedge_pm(T[i], d2, m);
}

inline std::complex<double> nonlinear_at(std::complex<double> z, std::complex<double> zs,
                                         double sgn) {
  const double denom = 1.0 + sgn * std::norm(z);
  const std::complex<double> conj_z_zs2 = std::conj(z) * zs * zs;
  // -+ 2i * w / denom, with w = conj(z) zs^2
  return std::complex<double>(2.0 * sgn * conj_z_zs2.imag(), -2.0 * sgn * conj_z_zs2.real()) /
         denom;
}

}  // namespace

void fd_rhs_serial(std::span<const Vec3> T, double ds, Metric m, std::span<Vec3> out) {
  const std::size_t n = T.size();
  const double inv_ds2 = 1.0 / (ds * ds);
  out[0] = Vec3{};
  out[n - 1] = Vec3{};
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = stencil(T, i, inv_ds2, m);
}

void fd_rhs_parallel(std::span<const Vec3> T, double ds, Metric m, std::span<Vec3> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(T.size());
  const double inv_ds2 = 1.0 / (ds * ds);
  out[0] = Vec3{};
  out[n - 1] = Vec3{};
#pragma omp parallel for schedule(static) if (T.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 1; i < n - 1; ++i) {
    out[i] = stencil(T, static_cast<std::size_t>(i), inv_ds2, m);
  }
}

void axpy_parallel(std::span<const Vec3> base, double h, std::span<const Vec3> k,
                   std::span<Vec3> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(base.size());
#pragma omp parallel for schedule(static) if (base.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = base[i] + h * k[i];
}

void nonlinear_serial(std::span<const std::complex<double>> z,
                      std::span<const std::complex<double>> zs, Metric m,
                      std::span<std::complex<double>> out) {
  const double sgn = sign(m);
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = nonlinear_at(z[i], zs[i], sgn);
}

void nonlinear_parallel(std::span<const std::complex<double>> z,
                        std::span<const std::complex<double>> zs, Metric m,
                        std::span<std::complex<double>> out) {
  const double sgn = sign(m);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(z.size());
#pragma omp parallel for schedule(static) if (z.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = nonlinear_at(z[i], zs[i], sgn);
}

}  // namespace filament::kernels
