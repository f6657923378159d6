#pragma once

#include <complex>
#include <span>
#include <vector>

namespace filament {

using cd = std::complex<double>;
using cvec = std::vector<cd>;

/// Chebyshev-Gauss-Lobatto nodes s_i = L cos(i pi / N), i = 0..N. Index 0 is
/// s = +L, index N is s = -L, index N/2 is s = 0.
struct ChebyshevGrid {
  double L = 0.0;
  int N = 0;

  double node(int i) const;
  std::vector<double> nodes() const;
  std::size_t size() const { return static_cast<std::size_t>(N) + 1; }

  /// Throws BadLength unless N is even and >= 2, InvalidArgument unless L > 0.
  static ChebyshevGrid make(double L, int N);
};

/// DCT-I based transform between node values and Chebyshev coefficients
/// for one polynomial degree N. Owns an FFTW plan; const methods may be
/// called concurrently.
class ChebyshevTransform {
 public:
  explicit ChebyshevTransform(int N);
  ~ChebyshevTransform();
  ChebyshevTransform(ChebyshevTransform&& other) noexcept;
  ChebyshevTransform& operator=(ChebyshevTransform&& other) noexcept;
  ChebyshevTransform(const ChebyshevTransform&) = delete;
  ChebyshevTransform& operator=(const ChebyshevTransform&) = delete;

  int N() const { return N_; }

  /// values (N+1 node samples) -> coefficients a_0..a_N. Output may alias input.
  void forward(std::span<const cd> values, std::span<cd> coeffs) const;
  /// coefficients -> node values. Output may alias input.
  void inverse(std::span<const cd> coeffs, std::span<cd> values) const;

 private:
  int N_ = 0;
  void* plan_ = nullptr;
};

cvec cheb_transform(std::span<const cd> values);
cvec cheb_inverse(std::span<const cd> coeffs);

/// Coefficients b_k of d/ds of sum a_k T_k(s/L):
///   b_N = 0, c_{k-1} b_{k-1} = b_{k+1} + (2k/L) a_k, c_0 = 2.
void cheb_derivative(std::span<const cd> a, double L, std::span<cd> b);
cvec cheb_derivative(std::span<const cd> a, double L);

/// Coefficients (N+2 of them, constant term zero) of an s-antiderivative.
cvec cheb_antiderivative(std::span<const cd> a, double L);

/// sum a_k T_k(x) by the Clenshaw recurrence, x in [-1, 1].
cd cheb_evaluate(std::span<const cd> a, double x);
/// Closed forms at x = +1, -1 and 0.
cd cheb_value_at_plus_one(std::span<const cd> a);
cd cheb_value_at_minus_one(std::span<const cd> a);
cd cheb_value_at_zero(std::span<const cd> a);

/// Evaluates the series of a grid with half-width source_L at arbitrary
/// points. Throws OutOfDomain for points outside [-source_L, source_L].
cvec spectral_interpolate(std::span<const cd> coeffs, double source_L,
                          std::span<const double> targets);

inline constexpr double kFilterThreshold = 1e-14;

/// Zeroes every coefficient with modulus below eps.
void spectral_filter_inplace(std::span<cd> coeffs, double eps = kFilterThreshold);
cvec spectral_filter(std::span<const cd> coeffs, double eps = kFilterThreshold);

}  // namespace filament
