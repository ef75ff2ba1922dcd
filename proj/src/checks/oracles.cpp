#include "psbc/checks/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "psbc/error.hpp"

namespace psbc::oracle {

Vector dense_solve(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = b.size();
  if (a.size() != n * n) throw DimensionError("dense_solve: matrix is not n x n");
  Vector m(a.begin(), a.end());
  Vector x(b.begin(), b.end());
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r * n + col]) > std::abs(m[piv * n + col])) piv = r;
    if (m[piv * n + col] == 0.0) throw DomainError("dense_solve: singular matrix");
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m[piv * n + c], m[col * n + c]);
      std::swap(x[piv], x[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r * n + col] / m[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
      x[r] -= f * x[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= m[i * n + c] * x[c];
    x[i] = s / m[i * n + i];
  }
  return x;
}

Vector dense_matvec(std::span<const double> a, int rows, int cols, std::span<const double> x) {
  if (a.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) ||
      x.size() != static_cast<std::size_t>(cols))
    throw DimensionError("dense_matvec: shape mismatch");
  Vector y(static_cast<std::size_t>(rows), 0.0);
  for (int r = 0; r < rows; ++r) {
    double s = 0.0;
    for (int c = 0; c < cols; ++c) s += a[static_cast<std::size_t>(r) * cols + c] * x[static_cast<std::size_t>(c)];
    y[static_cast<std::size_t>(r)] = s;
  }
  return y;
}

double inverse_inf_norm(const DiffusionOperator& op) {
  const auto n = static_cast<std::size_t>(op.n());
  Vector row_sums(n, 0.0);
  Vector e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    const Vector col = op.solve_l(e);
    for (std::size_t i = 0; i < n; ++i) row_sums[i] += std::abs(col[i]);
  }
  return *std::max_element(row_sums.begin(), row_sums.end());
}

double relative_inf_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("relative_inf_error: length mismatch");
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    scale = std::max(scale, std::abs(b[i]));
  }
  return diff / std::max(scale, std::numeric_limits<double>::min());
}

double quartic_bound_polynomial(double z) { return ((-z + 1.0) * z * z + 2.0) * z - 1.0; }

}  // namespace psbc::oracle
