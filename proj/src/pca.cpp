#include "psbc/pca.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "psbc/error.hpp"
#include "psbc/propagation.hpp"

namespace psbc {

BasisMatrix PcaBasis::to_basis() const { return BasisMatrix::dense(n_u, n_pt, components, BasisKind::Pca); }

PcaBasis pca_basis(const Dataset& train, int n_pt) {
  train.check();
  const int n_u = train.n_u;
  if (n_pt < 1 || n_pt > n_u) throw DimensionError("PCA needs 1 <= n_pt <= n_u");
  if (train.size() < static_cast<std::size_t>(n_pt) || train.size() < 2)
    throw DimensionError("PCA needs at least max(2, n_pt) samples");

  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMat> x(train.features.data(), static_cast<Eigen::Index>(train.size()), n_u);
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const RowMat centered = x.rowwise() - mean;
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(train.size() - 1);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw Error("covariance eigendecomposition failed");

  const Eigen::VectorXd& values = eig.eigenvalues();  // ascending
  const double top = std::max(values(n_u - 1), 0.0);
  const double tol = std::max(top, 1.0) * 1e-12 * n_u;
  int rank = 0;
  for (int i = 0; i < n_u; ++i)
    if (values(i) > tol) ++rank;
  if (rank < n_pt)
    throw DimensionError("training data has rank " + std::to_string(rank) + ", fewer than n_pt = " +
                         std::to_string(n_pt) + " principal components");

  PcaBasis out;
  out.n_u = n_u;
  out.n_pt = n_pt;
  out.mean.assign(mean.data(), mean.data() + n_u);
  out.components.assign(static_cast<std::size_t>(n_u) * static_cast<std::size_t>(n_pt), 0.0);
  for (int j = 0; j < n_pt; ++j) {
    const int src = n_u - 1 - j;
    out.explained.push_back(values(src));
    Eigen::VectorXd v = eig.eigenvectors().col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    for (int r = 0; r < n_u; ++r)
      out.components[static_cast<std::size_t>(r) * static_cast<std::size_t>(n_pt) + static_cast<std::size_t>(j)] = v(r);
  }
  return out;
}

double irec_diameter_general(const BasisMatrix& basis, std::span<const Vector> groups) {
  std::vector<Vector> lifted;
  lifted.reserve(groups.size());
  for (const auto& g : groups) lifted.push_back(basis.apply(g));
  return coefficient_range(lifted).diameter();
}

}  // namespace psbc
