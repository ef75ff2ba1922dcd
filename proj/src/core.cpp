#include "psbc/core.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "psbc/error.hpp"

namespace psbc {

std::string_view to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::Neumann ? "neumann" : "periodic";
}

std::string_view to_string(Subordination s) {
  return s == Subordination::Subordinate ? "subordinate" : "nonsubordinate";
}

std::string_view to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::Canonical: return "canonical";
    case BasisKind::Pca: return "pca";
    case BasisKind::Identity: return "identity";
  }
  return "canonical";
}

BoundaryCondition parse_boundary_condition(std::string_view text) {
  if (text == "neumann") return BoundaryCondition::Neumann;
  if (text == "periodic") return BoundaryCondition::Periodic;
  throw ConfigError("unknown boundary condition '" + std::string(text) + "'");
}

Subordination parse_subordination(std::string_view text) {
  if (text == "subordinate" || text == "true") return Subordination::Subordinate;
  if (text == "nonsubordinate" || text == "false") return Subordination::NonSubordinate;
  throw ConfigError("unknown subordination '" + std::string(text) + "'");
}

void Hyperparameters::validate() const {
  if (n_t < 1) throw ConfigError("n_t must be positive");
  if (n_u < 1) throw ConfigError("n_u must be positive");
  if (n_pt < 1 || n_pt > n_u) throw ConfigError("n_pt must lie in [1, n_u]");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be a finite non-negative number");
  if (shared_k < 1 || shared_k > n_t) throw ConfigError("shared_k must lie in [1, n_t]");
  if (bc == BoundaryCondition::Periodic && n_u < 3)
    throw ConfigError("periodic boundary conditions require n_u >= 3");
  for (double dt : {dt_u, dt_p, dt_star_u, dt_star_p})
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time steps must be positive and finite");
  if (dt_u > dt_star_u || dt_p > dt_star_p) throw ConfigError("time steps may not exceed their ceilings");
}

BasisMatrix BasisMatrix::canonical(int n_u, int n_pt) {
  if (n_pt < 1 || n_u < 1 || n_pt > n_u)
    throw DimensionError("canonical basis needs 1 <= n_pt <= n_u, got n_u=" + std::to_string(n_u) +
                         " n_pt=" + std::to_string(n_pt));
  BasisMatrix b;
  b.rows_ = n_u;
  b.cols_ = n_pt;
  b.kind_ = BasisKind::Canonical;
  // The first n_u mod n_pt blocks take one extra index.
  const int base = n_u / n_pt;
  const int extra = n_u % n_pt;
  b.offsets_.resize(static_cast<std::size_t>(n_pt) + 1);
  b.offsets_[0] = 0;
  for (int j = 0; j < n_pt; ++j) b.offsets_[j + 1] = b.offsets_[j] + base + (j < extra ? 1 : 0);
  return b;
}

BasisMatrix BasisMatrix::identity(int n) {
  BasisMatrix b = canonical(n, n);
  b.kind_ = BasisKind::Identity;
  return b;
}

BasisMatrix BasisMatrix::dense(int rows, int cols, Vector row_major, BasisKind kind) {
  if (rows < 1 || cols < 1 || cols > rows)
    throw DimensionError("dense basis needs 1 <= cols <= rows");
  if (row_major.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw DimensionError("dense basis entry count does not match its shape");
  for (double v : row_major)
    if (!std::isfinite(v)) throw DimensionError("dense basis has non-finite entries");
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      row_major.data(), rows, cols);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  if (qr.rank() < cols)
    throw DimensionError("basis columns are linearly dependent (rank " + std::to_string(qr.rank()) +
                         " < " + std::to_string(cols) + ")");
  BasisMatrix b;
  b.rows_ = rows;
  b.cols_ = cols;
  b.kind_ = kind;
  b.entries_ = std::move(row_major);
  return b;
}

double BasisMatrix::entry(int r, int c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw DimensionError("basis index out of range");
  if (!is_block()) return entries_[static_cast<std::size_t>(r) * cols_ + c];
  return (r >= offsets_[c] && r < offsets_[c + 1]) ? 1.0 : 0.0;
}

Vector BasisMatrix::to_dense() const {
  if (!is_block()) return entries_;
  Vector out(static_cast<std::size_t>(rows_) * cols_, 0.0);
  for (int j = 0; j < cols_; ++j)
    for (int r = offsets_[j]; r < offsets_[j + 1]; ++r) out[static_cast<std::size_t>(r) * cols_ + j] = 1.0;
  return out;
}

void BasisMatrix::apply(std::span<const double> w, std::span<double> out) const {
  if (w.size() != static_cast<std::size_t>(cols_) || out.size() != static_cast<std::size_t>(rows_))
    throw DimensionError("apply_basis: expected w of length " + std::to_string(cols_) + " and output of length " +
                         std::to_string(rows_));
  if (is_block()) {
    for (int j = 0; j < cols_; ++j)
      std::fill(out.begin() + offsets_[j], out.begin() + offsets_[j + 1], w[j]);
    return;
  }
  for (int r = 0; r < rows_; ++r) {
    const double* row = entries_.data() + static_cast<std::size_t>(r) * cols_;
    double acc = 0.0;
    for (int c = 0; c < cols_; ++c) acc += row[c] * w[c];
    out[r] = acc;
  }
}

Vector BasisMatrix::apply(std::span<const double> w) const {
  Vector out(static_cast<std::size_t>(rows_));
  apply(w, out);
  return out;
}

void BasisMatrix::pullback(std::span<const double> g, std::span<double> out) const {
  if (g.size() != static_cast<std::size_t>(rows_) || out.size() != static_cast<std::size_t>(cols_))
    throw DimensionError("basis_grad_pullback: expected g of length " + std::to_string(rows_) +
                         " and output of length " + std::to_string(cols_));
  if (is_block()) {
    for (int j = 0; j < cols_; ++j) {
      double acc = 0.0;
      for (int r = offsets_[j]; r < offsets_[j + 1]; ++r) acc += g[r];
      out[j] = acc;
    }
    return;
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (int r = 0; r < rows_; ++r) {
    const double* row = entries_.data() + static_cast<std::size_t>(r) * cols_;
    const double gr = g[r];
    for (int c = 0; c < cols_; ++c) out[c] += row[c] * gr;
  }
}

Vector BasisMatrix::pullback(std::span<const double> g) const {
  Vector out(static_cast<std::size_t>(cols_));
  pullback(g, out);
  return out;
}

BasisMatrix canonical_basis(int n_u, int n_pt) { return BasisMatrix::canonical(n_u, n_pt); }

Vector apply_basis(const BasisMatrix& b, std::span<const double> w) { return b.apply(w); }

Vector basis_grad_pullback(const BasisMatrix& b, std::span<const double> g_alpha) { return b.pullback(g_alpha); }

WeightStack WeightStack::filled(const Hyperparameters& hp, double value) {
  WeightStack s;
  s.n_p = hp.n_p();
  s.w_u.assign(static_cast<std::size_t>(hp.n_groups()), Vector(static_cast<std::size_t>(hp.n_pt), value));
  s.w_p.assign(static_cast<std::size_t>(hp.n_groups()), Vector(static_cast<std::size_t>(s.n_p), value));
  return s;
}

void WeightStack::check_shape(const Hyperparameters& hp) const {
  const auto groups = static_cast<std::size_t>(hp.n_groups());
  if (n_p != hp.n_p()) throw DimensionError("weight stack n_p does not match the subordination mode");
  if (w_u.size() != groups || w_p.size() != groups)
    throw DimensionError("weight stack must hold " + std::to_string(groups) + " layer groups");
  for (const auto& w : w_u)
    if (w.size() != static_cast<std::size_t>(hp.n_pt)) throw DimensionError("W_u group has wrong length");
  for (const auto& w : w_p)
    if (w.size() != static_cast<std::size_t>(n_p)) throw DimensionError("W_p group has wrong length");
}

LayerWeights expand_shared(const WeightStack& stack, const Hyperparameters& hp) {
  stack.check_shape(hp);
  LayerWeights out;
  out.w_u.reserve(static_cast<std::size_t>(hp.n_t));
  out.w_p.reserve(static_cast<std::size_t>(hp.n_t));
  for (int n = 0; n < hp.n_t; ++n) {
    out.w_u.push_back(stack.w_u[static_cast<std::size_t>(hp.group_of(n))]);
    out.w_p.push_back(stack.w_p[static_cast<std::size_t>(hp.group_of(n))]);
  }
  return out;
}

WeightStack contract_shared(const LayerWeights& per_layer, const Hyperparameters& hp) {
  if (per_layer.w_u.size() != static_cast<std::size_t>(hp.n_t) ||
      per_layer.w_p.size() != static_cast<std::size_t>(hp.n_t))
    throw DimensionError("contract_shared expects one entry per layer");
  WeightStack out = WeightStack::filled(hp, 0.0);
  for (int n = 0; n < hp.n_t; ++n) {
    auto& gu = out.w_u[static_cast<std::size_t>(hp.group_of(n))];
    auto& gp = out.w_p[static_cast<std::size_t>(hp.group_of(n))];
    const auto& lu = per_layer.w_u[static_cast<std::size_t>(n)];
    const auto& lp = per_layer.w_p[static_cast<std::size_t>(n)];
    if (lu.size() != gu.size() || lp.size() != gp.size()) throw DimensionError("contract_shared: layer shape mismatch");
    for (std::size_t i = 0; i < gu.size(); ++i) gu[i] += lu[i];
    for (std::size_t i = 0; i < gp.size(); ++i) gp[i] += lp[i];
  }
  return out;
}

}  // namespace psbc
