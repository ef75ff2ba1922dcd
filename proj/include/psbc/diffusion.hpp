#pragma once

#include <cstddef>
#include <span>

#include "psbc/core.hpp"

namespace psbc {

/// The discrete Laplacian D for a boundary condition, together with cached
/// factorizations of L = I - eps^2 D and of its transpose.
///
/// Neumann rows: (-2, 2, 0, ...), (..., 1, -2, 1, ...), (..., 0, 2, -2).
/// Periodic: circulant with stencil (1, -2, 1); needs n >= 3. For n = 1 the
/// Neumann operator is the zero matrix.
class DiffusionOperator {
 public:
  DiffusionOperator() = default;

  /// Throws ConfigError for Periodic with n < 3 or a negative/non-finite eps.
  static DiffusionOperator build(int n, BoundaryCondition bc, double eps);

  int n() const { return n_; }
  BoundaryCondition bc() const { return bc_; }
  double eps2() const { return eps2_; }

  void apply_d(std::span<const double> v, std::span<double> out) const;
  Vector apply_d(std::span<const double> v) const;
  /// out = (I - eps^2 D) v
  Vector apply_l(std::span<const double> v) const;

  /// Solves (I - eps^2 D) x = rhs. `out` may alias `rhs`.
  void solve_l(std::span<const double> rhs, std::span<double> out) const;
  Vector solve_l(std::span<const double> rhs) const;
  /// Solves (I - eps^2 D)^T x = rhs. `out` may alias `rhs`.
  void solve_l_transpose(std::span<const double> rhs, std::span<double> out) const;
  Vector solve_l_transpose(std::span<const double> rhs) const;

  /// Row-major dense copy of D.
  Vector dense_d() const;
  /// Row-major dense copy of L.
  Vector dense_l() const;

 private:
  // One tridiagonal system in factored (Thomas) form: sub[i] multiplies x[i-1],
  // sup[i] multiplies x[i+1]; cp and inv hold the eliminated super-diagonal
  // and the reciprocal pivots.
  struct Tridiagonal {
    Vector sub, diag, sup;
    Vector cp, inv;
    void factor();
    void solve(std::span<double> x) const;
  };

  void check(std::size_t size, const char* what) const;
  void cyclic_solve(std::span<double> x) const;

  int n_ = 0;
  BoundaryCondition bc_ = BoundaryCondition::Neumann;
  double eps2_ = 0.0;
  // Stencil weights of D: off-diagonals below/above, and the diagonal.
  Vector d_sub_, d_diag_, d_sup_;
  Tridiagonal l_;
  Tridiagonal lt_;
  // Periodic rank-one correction: z solves T z = u for the corrected system T.
  Vector z_;
  double corner_ = 0.0;
  double gamma_ = 0.0;
  double z_denom_ = 1.0;
};

/// Average of the neighbours of entry j (0-based). Neumann reflects at the
/// ends, so the first and last entries see a single neighbour; Periodic wraps.
double neighbor_average(std::span<const double> v, int j, BoundaryCondition bc);

}  // namespace psbc
