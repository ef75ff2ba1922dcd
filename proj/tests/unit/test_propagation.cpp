#include <doctest.h>

#include <cmath>
#include <random>

#include "psbc/error.hpp"
#include "psbc/propagation.hpp"

using namespace psbc;

namespace {

Hyperparameters small_hp(int n_u, int n_pt, int n_t) {
  Hyperparameters hp;
  hp.n_u = n_u;
  hp.n_pt = n_pt;
  hp.n_t = n_t;
  hp.shared_k = 1;
  hp.eps = 0.0;
  return hp;
}

}  // namespace

TEST_CASE("single Euler step with constant alpha") {
  Hyperparameters hp = small_hp(1, 1, 1);
  WeightStack w = WeightStack::filled(hp, 0.5);
  const auto model = PsbcModel::create(hp, w);
  const Vector x{0.6};
  const Trajectory t = forward(model, x);
  REQUIRE(t.u_layers.size() == 2);
  CHECK(t.u_layers[1][0] == doctest::Approx(0.6024).epsilon(1e-15));
  // The phase starts at one half, which is a root when beta = 1/2.
  CHECK(t.p_layers[0][0] == 0.5);
  CHECK(t.p_layers[1][0] == 0.5);
}

TEST_CASE("zero and one are fixed points") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (auto bc : {BoundaryCondition::Neumann, BoundaryCondition::Periodic}) {
    Hyperparameters hp = small_hp(6, 3, 4);
    hp.eps = 0.5;
    hp.bc = bc;
    WeightStack w = WeightStack::filled(hp, 0.0);
    for (auto& g : w.w_u)
      for (double& v : g) v = dist(rng);
    hp.dt_u = hp.dt_star_u = 0.05;
    const auto model = PsbcModel::create(hp, w);
    for (double c : {0.0, 1.0}) {
      const Trajectory t = forward(model, Vector(6, c));
      for (const auto& layer : t.u_layers)
        for (double v : layer) CHECK(v == doctest::Approx(c).epsilon(1e-14).scale(1.0));
    }
  }
}

TEST_CASE("inputs outside the unit box are rejected") {
  Hyperparameters hp = small_hp(2, 1, 1);
  const auto model = PsbcModel::create(hp, WeightStack::filled(hp, 0.5));
  CHECK_THROWS_AS(forward(model, Vector{0.5, 1.01}), DomainError);
  CHECK_THROWS_AS(forward(model, Vector{-0.01, 0.5}), DomainError);
  CHECK_THROWS_AS(forward(model, Vector{0.5}), DimensionError);
}

TEST_CASE("non-finite propagation is reported") {
  Hyperparameters hp = small_hp(1, 1, 40);
  hp.dt_u = hp.dt_star_u = 1.0;
  const auto model = PsbcModel::create(hp, WeightStack::filled(hp, 1e6));
  CHECK_THROWS_AS(forward(model, Vector{0.9}), PropagationError);
}

TEST_CASE("phase lift") {
  CHECK(phase_lift(Vector{0.5}, canonical_basis(3, 1)) == Vector{0.5, 0.5, 0.5});
  CHECK(phase_lift(Vector{0.2, 0.9}, canonical_basis(4, 2)) == Vector{0.2, 0.2, 0.9, 0.9});
  CHECK(phase_lift(Vector{0.1, 0.2, 0.3}, canonical_basis(3, 3)) == Vector{0.1, 0.2, 0.3});
  Hyperparameters hp = small_hp(4, 2, 1);
  CHECK(subordinate_basis(hp) == canonical_basis(4, 2));
  hp.subordination = Subordination::NonSubordinate;
  CHECK(subordinate_basis(hp) == canonical_basis(4, 1));
}

TEST_CASE("flip map") {
  const Vector u{0.1, 0.7, 1.0};
  CHECK(flip_map(u, Vector{0, 0, 0}) == u);
  const Vector flipped = flip_map(u, Vector{1, 1, 1});
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(flipped[i] == doctest::Approx(1.0 - u[i]).epsilon(1e-15));
  for (double v : flip_map(u, Vector{0.5, 0.5, 0.5})) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    Vector r(5);
    for (double& v : r) v = dist(rng);
    const Vector ones(5, 1.0);
    // 1 - (1 - r) == r is exact for r in [0.5, 1]; check the involution on those entries.
    for (double& v : r) v = 0.5 + 0.5 * v;
    CHECK(flip_map(flip_map(r, ones), ones) == r);
  }
}

TEST_CASE("discriminant") {
  CHECK(label_from_score(0.6) == 1);
  CHECK(label_from_score(0.2) == 0);
  CHECK(label_from_score(0.5) == 1);
  CHECK(label_from_vector(Vector{0.5, 0.5}) == 1);
  CHECK(label_from_vector(Vector{0.1, 0.3}) == 0);
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> dist(-0.5, 1.5);
  for (int i = 0; i < 2000; ++i) {
    Vector f(1 + i % 9);
    double sum = 0.0;
    for (double& v : f) sum += (v = dist(rng));
    CHECK(label_from_vector(f) == label_from_score(sum / static_cast<double>(f.size())));
  }
}

TEST_CASE("cost") {
  Hyperparameters hp = small_hp(2, 1, 1);
  // alpha = 1/2 and beta = 1/2 leave x = (1/2, 1/2) and P = 1/2 in place: Mean(S) = 1/2.
  const auto model = PsbcModel::create(hp, WeightStack::filled(hp, 0.5));
  const Vector half{0.5, 0.5};
  CHECK(score(model, half) == 0.5);
  std::vector<Example> one{{half, 1}};
  CHECK(cost(model, one) == 0.125);
  // x = 1 stays at 1 and the flip with p = 1/2 yields 1/2 again; use beta = 0 so P decays towards 0.
  WeightStack w = WeightStack::filled(hp, 0.5);
  const Vector a{0.2, 0.9}, b{0.4, 0.1}, c{1.0, 0.0};
  std::vector<Example> batch{{a, 1}, {b, 0}, {c, 1}};
  std::vector<Example> reversed{{c, 1}, {b, 0}, {a, 1}};
  w.w_p[0][0] = 0.3;
  const auto m2 = PsbcModel::create(hp, w);
  CHECK(cost(m2, batch) == doctest::Approx(cost(m2, reversed)).epsilon(1e-15));
  CHECK_THROWS_AS(cost(m2, std::span<const Example>{}), DomainError);
}

TEST_CASE("invariant box") {
  std::vector<Vector> alpha{{0.2, 0.8}, {0.5, 0.5}};
  std::vector<Vector> beta{{0.5}};
  auto box = invariant_box(alpha, beta);
  CHECK(box.l_alpha == 0.0);
  CHECK(box.r_alpha == 1.0);
  CHECK(box.m_alpha == 1.0);
  alpha = {{-0.5, 1.0}, {2.0, 0.3}};
  box = invariant_box(alpha, beta);
  CHECK(box.l_alpha == -0.5);
  CHECK(box.r_alpha == 2.0);
  CHECK(box.m_alpha == 15.625);
  CHECK(box.m_beta == 1.0);
}

TEST_CASE("check_invariant accepts IREC trajectories and rejects fabricated ones") {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double eps : {0.0, 0.5}) {
    Hyperparameters hp = small_hp(8, 4, 6);
    hp.eps = eps;
    WeightStack w = WeightStack::filled(hp, 0.0);
    for (auto& g : w.w_u)
      for (double& v : g) v = unit(rng);
    for (auto& g : w.w_p)
      for (double& v : g) v = unit(rng);
    auto model = PsbcModel::create(hp, w);
    Vector x(8);
    for (double& v : x) v = unit(rng);
    const Trajectory t = forward(model, x);
    const auto box = invariant_box(layer_coefficients(model));
    CHECK(check_invariant(t, box, hp.dt_u, hp.dt_p));
    Trajectory bad = t;
    bad.u_layers.back()[3] = 2.0 + 2.0 * hp.dt_u;
    CHECK_FALSE(check_invariant(bad, box, hp.dt_u, hp.dt_p));
  }
}

TEST_CASE("IREC step") {
  CHECK(irec_step(1.0, 1.0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(irec_step(1.0, 0.1) == 0.1);
  CHECK(irec_step(2.5, 1.0) == doctest::Approx(0.0923760430703401).epsilon(1e-12));
  Hyperparameters hp = small_hp(4, 2, 2);
  WeightStack w = WeightStack::filled(hp, 0.5);
  w.w_u[0][1] = -0.5;
  w.w_u[1][0] = 2.0;
  const auto r = irec_dt(canonical_basis(4, 2), w, 1.0, 1.0);
  CHECK(r.diam_alpha == 2.5);
  CHECK(r.dt_u == doctest::Approx(1.0 / (std::sqrt(3.0) * 6.25)).epsilon(1e-15));
  CHECK(r.dt_p == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  const auto clamped = irec_dt(canonical_basis(4, 2), WeightStack::filled(hp, 0.3), 0.1, 0.2);
  CHECK(clamped.dt_u == 0.1);
  CHECK(clamped.dt_p == 0.2);
}

TEST_CASE("coefficient range through a dense basis") {
  // A row summing to 3 with W = 1 gives an alpha entry of 3.
  const auto b = BasisMatrix::dense(3, 3, Vector{1, 1, 1, 0, 1, 0, 0, 0, 1});
  std::vector<Vector> groups{{1.0, 1.0, 1.0}};
  const auto range = coefficient_range(b, groups);
  CHECK(range.lo == 0.0);
  CHECK(range.hi == 3.0);
  CHECK(range.diameter() == 3.0);
  const auto canon = coefficient_range(canonical_basis(6, 3), std::vector<Vector>{{0.1, 0.9, 0.4}});
  CHECK(canon.diameter() == 1.0);
}

TEST_CASE("Allen-Cahn end states with constant coefficients") {
  SimulationSetup setup;
  setup.eps = 0.0;
  const Vector u0 = figure_initial_condition(setup.n_u);
  for (double a : {0.9, -0.8}) {
    const Vector alpha(static_cast<std::size_t>(setup.n_u), a);
    const Trajectory t = allen_cahn_simulate(alpha, u0, setup);
    REQUIRE(t.u_layers.size() == 301);
    for (std::size_t m = 0; m < u0.size(); ++m) {
      const double limit = u0[m] < a ? 0.0 : (u0[m] > a ? 1.0 : a);
      CHECK(std::abs(t.u_layers.back()[m] - limit) <= 1e-2);
    }
  }
}

TEST_CASE("alpha profiles") {
  const auto step = parse_alpha_profile("step");
  CHECK(step(0.25) == -2.0);
  CHECK(step(0.5) == 2.0);
  CHECK(parse_alpha_profile("const:0.9")(0.3) == 0.9);
  CHECK(parse_alpha_profile("parabola")(0.0) == doctest::Approx(4.0 - 8.0 * 0.04).epsilon(1e-15));
  CHECK_THROWS_AS(parse_alpha_profile("cubic"), ConfigError);
  const Vector s = sample_profile(parse_alpha_profile("step"), 4);
  CHECK(s == Vector{-2, -2, 2, 2});
  const Vector u0 = figure_initial_condition(2);
  CHECK(u0[0] == doctest::Approx(0.5 - 0.5 * std::sin(M_PI * -0.5)).epsilon(1e-15));
}
