#include "psbc/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "psbc/error.hpp"

namespace psbc {

void DiffusionOperator::Tridiagonal::factor() {
  const std::size_t n = diag.size();
  cp.assign(n, 0.0);
  inv.assign(n, 0.0);
  inv[0] = 1.0 / diag[0];
  if (n > 1) cp[0] = sup[0] * inv[0];
  for (std::size_t i = 1; i < n; ++i) {
    inv[i] = 1.0 / (diag[i] - sub[i] * cp[i - 1]);
    if (i + 1 < n) cp[i] = sup[i] * inv[i];
  }
}

void DiffusionOperator::Tridiagonal::solve(std::span<double> x) const {
  const std::size_t n = diag.size();
  x[0] *= inv[0];
  for (std::size_t i = 1; i < n; ++i) x[i] = (x[i] - sub[i] * x[i - 1]) * inv[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
}

DiffusionOperator DiffusionOperator::build(int n, BoundaryCondition bc, double eps) {
  if (n < 1) throw ConfigError("diffusion operator needs n >= 1");
  if (bc == BoundaryCondition::Periodic && n < 3)
    throw ConfigError("periodic boundary conditions require n >= 3, got n=" + std::to_string(n));
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be a finite non-negative number");

  DiffusionOperator op;
  op.n_ = n;
  op.bc_ = bc;
  op.eps2_ = eps * eps;
  const auto un = static_cast<std::size_t>(n);
  op.d_sub_.assign(un, 1.0);
  op.d_sup_.assign(un, 1.0);
  op.d_diag_.assign(un, -2.0);
  if (bc == BoundaryCondition::Neumann) {
    op.d_sub_[0] = 0.0;
    op.d_sup_[un - 1] = 0.0;
    if (n == 1) {
      op.d_diag_[0] = 0.0;
    } else {
      op.d_sup_[0] = 2.0;
      op.d_sub_[un - 1] = 2.0;
    }
  }
  if (op.eps2_ == 0.0) return op;

  const double e2 = op.eps2_;
  auto& l = op.l_;
  l.diag.resize(un);
  l.sub.resize(un);
  l.sup.resize(un);
  for (std::size_t i = 0; i < un; ++i) {
    l.diag[i] = 1.0 - e2 * op.d_diag_[i];
    l.sub[i] = -e2 * op.d_sub_[i];
    l.sup[i] = -e2 * op.d_sup_[i];
  }

  if (bc == BoundaryCondition::Neumann) {
    l.sub[0] = 0.0;
    l.sup[un - 1] = 0.0;
    auto& t = op.lt_;
    t.diag = l.diag;
    t.sub.assign(un, 0.0);
    t.sup.assign(un, 0.0);
    for (std::size_t i = 1; i < un; ++i) t.sub[i] = l.sup[i - 1];
    for (std::size_t i = 0; i + 1 < un; ++i) t.sup[i] = l.sub[i + 1];
    l.factor();
    t.factor();
    return op;
  }

  // Periodic: L = T + u v^T with u = (gamma, 0, ..., 0, corner) and
  // v = (1, 0, ..., 0, corner / gamma). L is symmetric, so one factorization
  // serves both solves.
  op.corner_ = -e2;
  op.gamma_ = -l.diag[0];
  l.diag[0] -= op.gamma_;
  l.diag[un - 1] -= op.corner_ * op.corner_ / op.gamma_;
  l.sub[0] = 0.0;
  l.sup[un - 1] = 0.0;
  l.factor();
  op.z_.assign(un, 0.0);
  op.z_[0] = op.gamma_;
  op.z_[un - 1] = op.corner_;
  l.solve(op.z_);
  op.z_denom_ = 1.0 + op.z_[0] + op.corner_ * op.z_[un - 1] / op.gamma_;
  return op;
}

void DiffusionOperator::check(std::size_t size, const char* what) const {
  if (size != static_cast<std::size_t>(n_))
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(n_) + ", got " +
                         std::to_string(size));
}

void DiffusionOperator::apply_d(std::span<const double> v, std::span<double> out) const {
  check(v.size(), "apply_d");
  check(out.size(), "apply_d");
  const auto n = static_cast<std::size_t>(n_);
  if (n == 1) {
    out[0] = d_diag_[0] * v[0];
    return;
  }
  const bool periodic = bc_ == BoundaryCondition::Periodic;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? v[i - 1] : (periodic ? v[n - 1] : 0.0);
    const double right = i + 1 < n ? v[i + 1] : (periodic ? v[0] : 0.0);
    out[i] = (d_sub_[i] * left + d_diag_[i] * v[i]) + d_sup_[i] * right;
  }
}

Vector DiffusionOperator::apply_d(std::span<const double> v) const {
  Vector out(v.size());
  apply_d(v, out);
  return out;
}

Vector DiffusionOperator::apply_l(std::span<const double> v) const {
  Vector out = apply_d(v);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[i] - eps2_ * out[i];
  return out;
}

void DiffusionOperator::cyclic_solve(std::span<double> x) const {
  const std::size_t n = x.size();
  l_.solve(x);
  const double factor = (x[0] + corner_ * x[n - 1] / gamma_) / z_denom_;
  for (std::size_t i = 0; i < n; ++i) x[i] -= factor * z_[i];
}

void DiffusionOperator::solve_l(std::span<const double> rhs, std::span<double> out) const {
  check(rhs.size(), "solve_l");
  check(out.size(), "solve_l");
  if (out.data() != rhs.data()) std::copy(rhs.begin(), rhs.end(), out.begin());
  if (eps2_ == 0.0) return;
  if (bc_ == BoundaryCondition::Periodic)
    cyclic_solve(out);
  else
    l_.solve(out);
}

Vector DiffusionOperator::solve_l(std::span<const double> rhs) const {
  Vector out(rhs.size());
  solve_l(rhs, out);
  return out;
}

void DiffusionOperator::solve_l_transpose(std::span<const double> rhs, std::span<double> out) const {
  check(rhs.size(), "solve_l_transpose");
  check(out.size(), "solve_l_transpose");
  if (out.data() != rhs.data()) std::copy(rhs.begin(), rhs.end(), out.begin());
  if (eps2_ == 0.0) return;
  if (bc_ == BoundaryCondition::Periodic)
    cyclic_solve(out);
  else
    lt_.solve(out);
}

Vector DiffusionOperator::solve_l_transpose(std::span<const double> rhs) const {
  Vector out(rhs.size());
  solve_l_transpose(rhs, out);
  return out;
}

Vector DiffusionOperator::dense_d() const {
  const auto n = static_cast<std::size_t>(n_);
  Vector m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    m[i * n + i] += d_diag_[i];
    if (n == 1) break;
    if (i > 0)
      m[i * n + i - 1] += d_sub_[i];
    else if (bc_ == BoundaryCondition::Periodic)
      m[i * n + n - 1] += d_sub_[i];
    if (i + 1 < n)
      m[i * n + i + 1] += d_sup_[i];
    else if (bc_ == BoundaryCondition::Periodic)
      m[i * n] += d_sup_[i];
  }
  return m;
}

Vector DiffusionOperator::dense_l() const {
  const auto n = static_cast<std::size_t>(n_);
  Vector m = dense_d();
  for (auto& x : m) x *= -eps2_;
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] += 1.0;
  return m;
}

double neighbor_average(std::span<const double> v, int j, BoundaryCondition bc) {
  const int n = static_cast<int>(v.size());
  if (j < 0 || j >= n) throw DimensionError("neighbor_average: index " + std::to_string(j) + " out of range");
  if (n == 1) return v[0];
  if (bc == BoundaryCondition::Periodic) {
    const double left = v[static_cast<std::size_t>((j + n - 1) % n)];
    const double right = v[static_cast<std::size_t>((j + 1) % n)];
    return 0.5 * left + 0.5 * right;
  }
  if (j == 0) return v[1];
  if (j == n - 1) return v[static_cast<std::size_t>(n - 2)];
  return 0.5 * v[static_cast<std::size_t>(j - 1)] + 0.5 * v[static_cast<std::size_t>(j + 1)];
}

}  // namespace psbc
