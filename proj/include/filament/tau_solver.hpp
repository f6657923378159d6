#pragma once

#include <span>
#include <vector>

#include "filament/chebyshev.hpp"

namespace filament {

enum class BoundaryRowKind { Dirichlet, Neumann };

/// Boundary rows of the implicit solve. Dirichlet prescribes z(-L), z(+L);
/// Neumann prescribes z_s(-L), z_s(+L).
struct BoundaryRows {
  BoundaryRowKind kind = BoundaryRowKind::Dirichlet;
  cd at_minus{};
  cd at_plus{};
};

/// Solves sigma a - i a_ss = f for Chebyshev coefficients a on [-L, L]:
/// the equations of degree 0..N-2 are enforced in coefficient space and the
/// last two rows are replaced by boundary rows. The integrated (quasi
/// tridiagonal) form of the operator is split by parity and each half is
/// solved in O(N) with one dense boundary row.
class TauHelmholtzSolver {
 public:
  TauHelmholtzSolver(int N, double L, double sigma);

  int N() const { return N_; }
  double L() const { return L_; }
  double sigma() const { return sigma_; }

  /// f holds N+1 coefficients of the right-hand side; a receives N+1
  /// coefficients. Throws SolverSingular when the boundary row is degenerate.
  void solve(std::span<const cd> f, const BoundaryRows& bc, std::span<cd> a) const;
  cvec solve(std::span<const cd> f, const BoundaryRows& bc) const;

 private:
  struct Half {
    int parity = 0;
    std::vector<int> k;      // degree of unknown r
    std::vector<cd> alpha;   // row r coefficient on x_{r-1}
    std::vector<cd> gamma;   // row r coefficient on x_{r+1}
    std::vector<cd> denom;   // backward-sweep pivots
    std::vector<cd> q;       // x_r = p_r + q_r x_{r-1}
    std::vector<cd> s;       // homogeneous part of x_r in terms of x_0
    cd ws_dirichlet{};
    cd ws_neumann{};
  };

  void build(Half& h) const;
  void solve_half(const Half& h, std::span<const cd> f, BoundaryRowKind kind, cd target,
                  std::span<cd> a) const;

  int N_;
  double L_;
  double sigma_;
  cd lambda_;
  cd kappa_;
  Half even_;
  Half odd_;
};

}  // namespace filament
