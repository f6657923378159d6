// Serial reference vs OpenMP kernels, plus the per-step spectral pieces.

#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <vector>

#include "filament/chebyshev.hpp"
#include "filament/kernels.hpp"
#include "filament/tau_solver.hpp"

namespace {

using filament::Metric;
using filament::Vec3;
using cd = std::complex<double>;

std::vector<Vec3> tangents(std::size_t n) {
  std::vector<Vec3> T(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 0.01 * static_cast<double>(i);
    T[i] = Vec3{std::sin(a) * 0.3, std::cos(a) * 0.3, std::sqrt(1.0 - 0.09)};
  }
  return T;
}

std::vector<cd> field(std::size_t n, double scale) {
  std::vector<cd> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 0.001 * static_cast<double>(i);
    z[i] = scale * cd(std::sin(a), std::cos(3.0 * a));
  }
  return z;
}

void BM_FdRhsSerial(benchmark::State& state) {
  const auto T = tangents(static_cast<std::size_t>(state.range(0)));
  std::vector<Vec3> out(T.size());
  for (auto _ : state) {
    filament::kernels::fd_rhs_serial(T, 0.01, Metric::Euclidean, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FdRhsParallel(benchmark::State& state) {
  const auto T = tangents(static_cast<std::size_t>(state.range(0)));
  std::vector<Vec3> out(T.size());
  for (auto _ : state) {
    filament::kernels::fd_rhs_parallel(T, 0.01, Metric::Euclidean, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_NonlinearSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto z = field(n, 0.1);
  const auto zs = field(n, 0.5);
  std::vector<cd> out(n);
  for (auto _ : state) {
    filament::kernels::nonlinear_serial(z, zs, Metric::Euclidean, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_NonlinearParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto z = field(n, 0.1);
  const auto zs = field(n, 0.5);
  std::vector<cd> out(n);
  for (auto _ : state) {
    filament::kernels::nonlinear_parallel(z, zs, Metric::Euclidean, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ChebTransform(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  filament::ChebyshevTransform tr(N);
  auto v = field(static_cast<std::size_t>(N) + 1, 1.0);
  std::vector<cd> a(v.size());
  for (auto _ : state) {
    tr.forward(v, a);
    benchmark::DoNotOptimize(a.data());
  }
}

void BM_TauSolve(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const filament::TauHelmholtzSolver solver(N, 10.0, 1.5 / -1e-6);
  const auto f = field(static_cast<std::size_t>(N) + 1, 1.0);
  std::vector<cd> a(f.size());
  const filament::BoundaryRows rows{filament::BoundaryRowKind::Dirichlet, cd(0.1), cd(-0.1)};
  for (auto _ : state) {
    solver.solve(f, rows, a);
    benchmark::DoNotOptimize(a.data());
  }
}

}  // namespace

BENCHMARK(BM_FdRhsSerial)->Arg(1001)->Arg(10001)->Arg(100001);
BENCHMARK(BM_FdRhsParallel)->Arg(1001)->Arg(10001)->Arg(100001);
BENCHMARK(BM_NonlinearSerial)->Arg(1025)->Arg(16385)->Arg(131073);
BENCHMARK(BM_NonlinearParallel)->Arg(1025)->Arg(16385)->Arg(131073);
BENCHMARK(BM_ChebTransform)->Arg(1024)->Arg(16384);
BENCHMARK(BM_TauSolve)->Arg(1024)->Arg(16384);

BENCHMARK_MAIN();
