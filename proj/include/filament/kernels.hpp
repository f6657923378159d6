#pragma once

// Per-node kernels of the two solvers. Each has an OpenMP version and a
// serial reference; both evaluate the same expression per node, so their
// outputs agree bit for bit.

#include <complex>
#include <span>

#include "filament/geometry.hpp"

namespace filament::kernels {

/// Below this many nodes the OpenMP versions run on the calling thread.
inline constexpr std::size_t kParallelThreshold = 2048;

/// out_i = T_i ^ (T_{i+1} - 2 T_i + T_{i-1}) / ds^2 on interior nodes, zero
/// on the two end nodes.
void fd_rhs_serial(std::span<const Vec3> T, double ds, Metric m, std::span<Vec3> out);
void fd_rhs_parallel(std::span<const Vec3> T, double ds, Metric m, std::span<Vec3> out);

/// out = base + h * k, node by node.
void axpy_parallel(std::span<const Vec3> base, double h, std::span<const Vec3> k,
                   std::span<Vec3> out);

/// Nonlinear term of the projected equation at the nodes:
///   N = -+ 2i conj(z) z_s^2 / (1 +- |z|^2)
void nonlinear_serial(std::span<const std::complex<double>> z,
                      std::span<const std::complex<double>> zs, Metric m,
                      std::span<std::complex<double>> out);
void nonlinear_parallel(std::span<const std::complex<double>> z,
                        std::span<const std::complex<double>> zs, Metric m,
                        std::span<std::complex<double>> out);

}  // namespace filament::kernels
