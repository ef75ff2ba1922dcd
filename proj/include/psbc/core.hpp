#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace psbc {

using Vector = std::vector<double>;

enum class BoundaryCondition { Neumann, Periodic };
enum class Subordination { Subordinate, NonSubordinate };

std::string_view to_string(BoundaryCondition bc);
std::string_view to_string(Subordination s);
BoundaryCondition parse_boundary_condition(std::string_view text);
Subordination parse_subordination(std::string_view text);

/// Architecture and step-size settings of one classifier.
///
/// `dt_u`/`dt_p` are the live time steps. They are recomputed from the
/// weights during training and never exceed their ceilings `dt_star_u` and
/// `dt_star_p` (the values the steps start from).
struct Hyperparameters {
  int n_t = 2;
  int n_u = 784;
  int n_pt = 196;
  double eps = 0.0;
  double dt_u = 0.1;
  double dt_p = 0.1;
  double dt_star_u = 0.1;
  double dt_star_p = 0.1;
  int shared_k = 1;
  BoundaryCondition bc = BoundaryCondition::Neumann;
  Subordination subordination = Subordination::Subordinate;

  int n_p() const { return subordination == Subordination::Subordinate ? n_pt : 1; }
  int n_groups() const { return (n_t + shared_k - 1) / shared_k; }
  int group_of(int layer) const { return layer / shared_k; }

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
};

enum class BasisKind { Canonical, Pca, Identity };

std::string_view to_string(BasisKind kind);

/// N_u x N_pt linear parameterization of per-feature coefficients.
///
/// Canonical bases are stored as consecutive index blocks (column j is the
/// indicator of block j); Pca bases are stored densely, row-major. Identity is
/// the square canonical case used for the phase parameterization.
class BasisMatrix {
 public:
  BasisMatrix() = default;

  static BasisMatrix canonical(int n_u, int n_pt);
  static BasisMatrix identity(int n);
  /// Dense basis from row-major entries. Throws DimensionError when the
  /// columns are not linearly independent.
  static BasisMatrix dense(int rows, int cols, Vector row_major, BasisKind kind = BasisKind::Pca);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  BasisKind kind() const { return kind_; }
  bool is_block() const { return kind_ != BasisKind::Pca; }

  double entry(int r, int c) const;
  Vector to_dense() const;

  /// Block boundaries for block kinds: column j covers rows [offsets[j], offsets[j+1]).
  std::span<const int> block_offsets() const { return offsets_; }
  std::span<const double> dense_entries() const { return entries_; }

  void apply(std::span<const double> w, std::span<double> out) const;
  Vector apply(std::span<const double> w) const;
  /// out = B^T g.
  void pullback(std::span<const double> g, std::span<double> out) const;
  Vector pullback(std::span<const double> g) const;

  friend bool operator==(const BasisMatrix&, const BasisMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  BasisKind kind_ = BasisKind::Canonical;
  std::vector<int> offsets_;
  Vector entries_;
};

BasisMatrix canonical_basis(int n_u, int n_pt);
Vector apply_basis(const BasisMatrix& b, std::span<const double> w);
Vector basis_grad_pullback(const BasisMatrix& b, std::span<const double> g_alpha);

/// Trainable weights, one entry per stored layer group.
struct WeightStack {
  std::vector<Vector> w_u;  // each of length n_pt
  std::vector<Vector> w_p;  // each of length n_p
  int n_p = 1;

  static WeightStack filled(const Hyperparameters& hp, double value);
  /// Throws DimensionError when shapes disagree with `hp`.
  void check_shape(const Hyperparameters& hp) const;

  friend bool operator==(const WeightStack&, const WeightStack&) = default;
};

/// Weights expanded to one entry per layer.
struct LayerWeights {
  std::vector<Vector> w_u;
  std::vector<Vector> w_p;
};

LayerWeights expand_shared(const WeightStack& stack, const Hyperparameters& hp);
/// Adjoint of expand_shared: per-layer vectors summed into their group slot
/// in ascending layer order.
WeightStack contract_shared(const LayerWeights& per_layer, const Hyperparameters& hp);

// Bistable nonlinearity f(u, w) = u (1 - u) (u - w) and its partials. The
// evaluation order here is the reference order the SIMD kernels reproduce.
inline double reaction(double u, double w) { return (u * (1.0 - u)) * (u - w); }
inline double reaction_du(double u, double w) {
  return ((-3.0 * u) * u + (2.0 * (1.0 + w)) * u) - w;
}
inline double reaction_dw(double u, double /*w*/) { return -(u * (1.0 - u)); }

}  // namespace psbc
