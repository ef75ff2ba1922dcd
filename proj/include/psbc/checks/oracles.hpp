#pragma once

#include <span>

#include "psbc/core.hpp"
#include "psbc/diffusion.hpp"

namespace psbc::oracle {

/// Solves the dense row-major n x n system A x = b by Gaussian elimination
/// with partial pivoting.
Vector dense_solve(std::span<const double> a, std::span<const double> b);

/// y = A x for a row-major rows x cols matrix.
Vector dense_matvec(std::span<const double> a, int rows, int cols, std::span<const double> x);

/// max_i sum_j |(L^{-1})_{ij}|, with the columns of L^{-1} obtained by
/// solving against the canonical basis vectors.
double inverse_inf_norm(const DiffusionOperator& op);

/// ||a - b||_inf / max(||b||_inf, tiny).
double relative_inf_error(std::span<const double> a, std::span<const double> b);

/// p(z) = -z^4 + z^3 + 2z - 1.
double quartic_bound_polynomial(double z);

}  // namespace psbc::oracle
