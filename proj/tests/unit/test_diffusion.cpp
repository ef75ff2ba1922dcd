#include <doctest.h>

#include <cmath>
#include <random>

#include "psbc/checks/oracles.hpp"
#include "psbc/diffusion.hpp"
#include "psbc/error.hpp"

using namespace psbc;

namespace {

Vector random_vector(std::mt19937_64& rng, int n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector v(static_cast<std::size_t>(n));
  for (double& x : v) x = dist(rng);
  return v;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("D for three points") {
  const auto neumann = DiffusionOperator::build(3, BoundaryCondition::Neumann, 0.5);
  CHECK(neumann.dense_d() == Vector{-2, 2, 0, 1, -2, 1, 0, 2, -2});
  const auto periodic = DiffusionOperator::build(3, BoundaryCondition::Periodic, 0.5);
  CHECK(periodic.dense_d() == Vector{-2, 1, 1, 1, -2, 1, 1, 1, -2});
  CHECK(DiffusionOperator::build(1, BoundaryCondition::Neumann, 1.0).dense_d() == Vector{0});
}

TEST_CASE("D annihilates constants and matches the dense product") {
  std::mt19937_64 rng(21);
  for (auto bc : {BoundaryCondition::Neumann, BoundaryCondition::Periodic})
    for (int n = 3; n <= 40; ++n) {
      const auto op = DiffusionOperator::build(n, bc, 0.3);
      for (double gamma : {1.0, -2.5, 0.37}) {
        const Vector d1 = op.apply_d(Vector(static_cast<std::size_t>(n), gamma));
        for (double v : d1) CHECK(v == 0.0);
      }
      const Vector v = random_vector(rng, n);
      const Vector oracle = oracle::dense_matvec(op.dense_d(), n, n, v);
      const Vector got = op.apply_d(v);
      for (int i = 0; i < n; ++i) CHECK(std::abs(got[i] - oracle[i]) <= 1e-14);
    }
  const auto op = DiffusionOperator::build(3, BoundaryCondition::Neumann, 0.0);
  CHECK(op.apply_d(Vector{0, 1, 0}) == Vector{2, -2, 2});
}

TEST_CASE("solve_l against the dense oracle") {
  std::mt19937_64 rng(22);
  for (auto bc : {BoundaryCondition::Neumann, BoundaryCondition::Periodic})
    for (int n : {3, 4, 5, 8, 17, 64, 200})
      for (double eps : {0.0, 0.1, 1.0, 3.0}) {
        const auto op = DiffusionOperator::build(n, bc, eps);
        const Vector rhs = random_vector(rng, n);
        const Vector x = op.solve_l(rhs);
        const Vector oracle = oracle::dense_solve(op.dense_l(), rhs);
        CHECK(oracle::relative_inf_error(x, oracle) <= 1e-10);
        const Vector back = op.apply_l(x);
        for (int i = 0; i < n; ++i) CHECK(std::abs(back[i] - rhs[i]) <= 1e-10);
        if (eps == 0.0) CHECK(x == rhs);
        // Constants are eigenvectors with eigenvalue one.
        const Vector c = op.solve_l(Vector(static_cast<std::size_t>(n), 0.75));
        for (double v : c) CHECK(v == doctest::Approx(0.75).epsilon(1e-12));
      }
}

TEST_CASE("transpose solve") {
  std::mt19937_64 rng(23);
  for (auto bc : {BoundaryCondition::Neumann, BoundaryCondition::Periodic})
    for (int n : {3, 6, 31}) {
      const auto op = DiffusionOperator::build(n, bc, 0.7);
      const Vector a = random_vector(rng, n), b = random_vector(rng, n);
      CHECK(std::abs(dot(op.solve_l(a), b) - dot(a, op.solve_l_transpose(b))) <= 1e-10);
      if (bc == BoundaryCondition::Periodic) CHECK(oracle::relative_inf_error(op.solve_l_transpose(a), op.solve_l(a)) <= 1e-14);
      // Dense oracle of the transposed system.
      Vector lt = op.dense_l();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) std::swap(lt[i * n + j], lt[j * n + i]);
      CHECK(oracle::relative_inf_error(op.solve_l_transpose(a), oracle::dense_solve(lt, a)) <= 1e-10);
    }
  const auto id = DiffusionOperator::build(5, BoundaryCondition::Neumann, 0.0);
  const Vector v{1, 2, 3, 4, 5};
  CHECK(id.solve_l_transpose(v) == v);
}

TEST_CASE("in-place solves") {
  const auto op = DiffusionOperator::build(9, BoundaryCondition::Periodic, 0.4);
  std::mt19937_64 rng(24);
  Vector v = random_vector(rng, 9);
  const Vector expected = op.solve_l(v);
  op.solve_l(v, v);
  CHECK(v == expected);
}

TEST_CASE("operator construction errors") {
  CHECK_THROWS_AS(DiffusionOperator::build(2, BoundaryCondition::Periodic, 0.1), ConfigError);
  CHECK_THROWS_AS(DiffusionOperator::build(4, BoundaryCondition::Neumann, -1.0), ConfigError);
  CHECK_THROWS_AS(DiffusionOperator::build(4, BoundaryCondition::Neumann, NAN), ConfigError);
  const auto op = DiffusionOperator::build(4, BoundaryCondition::Neumann, 0.1);
  CHECK_THROWS_AS(op.solve_l(Vector{1, 2}), DimensionError);
}

TEST_CASE("neighbour average") {
  CHECK(neighbor_average(Vector{1, 2, 3}, 1, BoundaryCondition::Neumann) == 2.0);
  CHECK(neighbor_average(Vector{4, 4, 4, 4}, 0, BoundaryCondition::Periodic) == 4.0);
  CHECK(neighbor_average(Vector{4, 4, 4, 4}, 3, BoundaryCondition::Neumann) == 4.0);
  // The sign of (D v)_j agrees with the sign of average - v_j.
  std::mt19937_64 rng(25);
  for (auto bc : {BoundaryCondition::Neumann, BoundaryCondition::Periodic})
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 3 + trial % 10;
      const auto op = DiffusionOperator::build(n, bc, 1.0);
      const Vector v = random_vector(rng, n);
      const Vector dv = op.apply_d(v);
      for (int j = 0; j < n; ++j) {
        const double diff = neighbor_average(v, j, bc) - v[j];
        CHECK((dv[j] > 0) == (diff > 0));
        CHECK((dv[j] < 0) == (diff < 0));
      }
    }
}

TEST_CASE("discrete maximum principle on small grids") {
  std::mt19937_64 rng(26);
  for (auto bc : {BoundaryCondition::Neumann, BoundaryCondition::Periodic})
    for (int n = 3; n <= 12; ++n)
      for (double eps : {0.0, 0.25, 2.0}) {
        const auto op = DiffusionOperator::build(n, bc, eps);
        CHECK(oracle::inverse_inf_norm(op) <= 1.0 + 1e-12);
        const Vector v = random_vector(rng, n, 0.0, 1.0);
        for (double x : op.solve_l(v)) CHECK(x >= 0.0);
      }
}
