#include <doctest.h>

#include <cmath>
#include <random>

#include "psbc/error.hpp"
#include "psbc/pca.hpp"

using namespace psbc;

namespace {

double col_dot(const PcaBasis& p, int a, int b) {
  double s = 0.0;
  for (int r = 0; r < p.n_u; ++r) s += p.components[r * p.n_pt + a] * p.components[r * p.n_pt + b];
  return s;
}

Dataset gaussian_rows(int n, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Dataset ds;
  ds.n_u = d;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) ds.features.push_back(g(rng) * (1.0 + j));
    ds.labels.push_back(i % 2);
  }
  return ds;
}

}  // namespace

TEST_CASE("axis-aligned data gives canonical axes ordered by variance") {
  Dataset ds;
  ds.n_u = 3;
  // Variances 1/2, 8, 2 along the three axes (values +-s on one axis at a time).
  const double s[3] = {0.5, 2.0, 1.0};
  for (int j = 0; j < 3; ++j)
    for (double sign : {1.0, -1.0})
      for (int rep = 0; rep < 2; ++rep) {
        Vector row(3, 0.0);
        row[j] = sign * s[j] * 2.0;
        ds.features.insert(ds.features.end(), row.begin(), row.end());
        ds.labels.push_back(0);
      }
  const PcaBasis p = pca_basis(ds, 3);
  const int order[3] = {1, 2, 0};
  for (int c = 0; c < 3; ++c)
    for (int r = 0; r < 3; ++r) CHECK(p.components[r * 3 + c] == doctest::Approx(r == order[c] ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
  CHECK(p.explained[0] >= p.explained[1]);
  CHECK(p.explained[1] >= p.explained[2]);
}

TEST_CASE("points on a diagonal line") {
  Dataset ds;
  ds.n_u = 2;
  for (double t : {-1.0, 0.0, 0.5, 2.0}) {
    ds.features.push_back(t);
    ds.features.push_back(t);
    ds.labels.push_back(0);
  }
  const PcaBasis p = pca_basis(ds, 1);
  CHECK(p.components[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(p.components[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_WITH_AS(pca_basis(ds, 2), doctest::Contains("rank 1"), DimensionError);
}

TEST_CASE("orthonormal components and lossless reconstruction") {
  const Dataset ds = gaussian_rows(60, 6, 81);
  const PcaBasis p = pca_basis(ds, 6);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) CHECK(std::abs(col_dot(p, a, b) - (a == b ? 1.0 : 0.0)) <= 1e-10);
  for (int j = 0; j < 6; ++j) {
    // Largest-magnitude entry positive.
    double best = 0.0;
    for (int r = 0; r < 6; ++r)
      if (std::abs(p.components[r * 6 + j]) > std::abs(best)) best = p.components[r * 6 + j];
    CHECK(best > 0.0);
  }
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto x = ds.row(i);
    Vector coef(6, 0.0), rec(p.mean);
    for (int j = 0; j < 6; ++j)
      for (int r = 0; r < 6; ++r) coef[j] += p.components[r * 6 + j] * (x[r] - p.mean[r]);
    for (int r = 0; r < 6; ++r)
      for (int j = 0; j < 6; ++j) rec[r] += p.components[r * 6 + j] * coef[j];
    for (int r = 0; r < 6; ++r) CHECK(std::abs(rec[r] - x[r]) <= 1e-10);
  }
}

TEST_CASE("projected data is decorrelated") {
  const Dataset ds = gaussian_rows(200, 5, 82);
  const PcaBasis p = pca_basis(ds, 3);
  const std::size_t n = ds.size();
  std::vector<Vector> proj(n, Vector(3, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (int j = 0; j < 3; ++j)
      for (int r = 0; r < 5; ++r) proj[i][j] += p.components[r * 3 + j] * (ds.row(i)[r] - p.mean[r]);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double c = 0.0;
      for (const auto& v : proj) c += v[a] * v[b];
      c /= static_cast<double>(n - 1);
      if (a == b)
        CHECK(c == doctest::Approx(p.explained[a]).epsilon(1e-8));
      else
        CHECK(std::abs(c) <= 1e-8 * p.explained[0]);
    }
  CHECK(pca_basis(ds, 3).components == p.components);
  CHECK(p.to_basis().kind() == BasisKind::Pca);
}

TEST_CASE("general IREC diameter") {
  std::vector<Vector> groups{{0.2, 0.9, 0.4}};
  CHECK(irec_diameter_general(canonical_basis(6, 3), groups) == 1.0);
  groups = {{-0.3, 1.7, 0.4}, {0.0, 0.0, 2.2}};
  CHECK(irec_diameter_general(canonical_basis(6, 3), groups) ==
        coefficient_range(canonical_basis(6, 3), groups).diameter());
  CHECK(irec_diameter_general(canonical_basis(6, 3), groups) == doctest::Approx(2.5).epsilon(1e-15));
  const auto b = BasisMatrix::dense(3, 3, Vector{1, 1, 1, 0, 1, 0, 0, 0, 1});
  CHECK(irec_diameter_general(b, std::vector<Vector>{{1.0, 1.0, 1.0}}) == 3.0);
}

TEST_CASE("PCA input checks") {
  const Dataset ds = gaussian_rows(3, 4, 83);
  CHECK_THROWS_AS(pca_basis(ds, 5), DimensionError);
  CHECK_THROWS_AS(pca_basis(ds.head(1), 1), DimensionError);
}
