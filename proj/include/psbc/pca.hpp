#pragma once

#include <span>

#include "psbc/core.hpp"
#include "psbc/dataset.hpp"

namespace psbc {

struct PcaBasis {
  int n_u = 0;
  int n_pt = 0;
  Vector components;  // n_u x n_pt, row-major; column j is the j-th principal axis
  Vector mean;        // centring vector
  Vector explained;   // eigenvalues, non-increasing

  BasisMatrix to_basis() const;
};

/// Leading n_pt eigenvectors of the sample covariance of `train`, each
/// signed so that its largest-magnitude entry is positive. Throws
/// DimensionError naming the achieved rank when fewer than n_pt eigenvalues
/// are numerically non-zero.
PcaBasis pca_basis(const Dataset& train, int n_pt);

/// Diameter of conv({0, 1} united with the entries of B W over all groups.
double irec_diameter_general(const BasisMatrix& basis, std::span<const Vector> groups);

}  // namespace psbc
