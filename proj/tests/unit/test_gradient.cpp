#include <doctest.h>

#include <cmath>
#include <random>

#include "psbc/checks/oracles.hpp"
#include "psbc/gradient.hpp"

using namespace psbc;

namespace {

struct RandomModel {
  PsbcModel model;
  std::vector<Vector> inputs;
  std::vector<Example> batch;
};

RandomModel random_model(Hyperparameters hp, std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  WeightStack w = WeightStack::filled(hp, 0.0);
  for (auto& g : w.w_u)
    for (double& v : g) v = unit(rng);
  for (auto& g : w.w_p)
    for (double& v : g) v = unit(rng);
  RandomModel r{PsbcModel::create(hp, w), {}, {}};
  for (int i = 0; i < samples; ++i) {
    Vector x(static_cast<std::size_t>(hp.n_u));
    for (double& v : x) v = unit(rng);
    r.inputs.push_back(std::move(x));
  }
  for (int i = 0; i < samples; ++i) r.batch.push_back({r.inputs[static_cast<std::size_t>(i)], i % 2});
  return r;
}

double rel_error(const GradientStack& g, const GradientStack& fd) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t q = 0; q < g.g_w_u.size(); ++q) {
    for (std::size_t i = 0; i < g.g_w_u[q].size(); ++i) {
      diff = std::max(diff, std::abs(g.g_w_u[q][i] - fd.g_w_u[q][i]));
      scale = std::max(scale, std::abs(fd.g_w_u[q][i]));
    }
    for (std::size_t i = 0; i < g.g_w_p[q].size(); ++i) {
      diff = std::max(diff, std::abs(g.g_w_p[q][i] - fd.g_w_p[q][i]));
      scale = std::max(scale, std::abs(fd.g_w_p[q][i]));
    }
  }
  return diff / std::max(scale, 1e-300);
}

}  // namespace

TEST_CASE("exact prediction gives a zero gradient") {
  // x = 1 is a fixed point of U, and beta = 1/2 + 2/dt_p sends P from 1/2 to 0
  // in one step, so S = 1 exactly and the residual vanishes for y = 1.
  Hyperparameters hp;
  hp.n_u = 3;
  hp.n_pt = 3;
  hp.n_t = 1;
  hp.dt_p = hp.dt_star_p = 0.5;
  WeightStack w = WeightStack::filled(hp, 4.5);
  w.w_u[0] = {0.2, 0.7, 1.3};
  const auto model = PsbcModel::create(hp, w);
  const Vector x{1.0, 1.0, 1.0};
  const Trajectory t = forward(model, x);
  for (double p : t.p_layers.back()) CHECK(p == 0.0);
  const double m = score(model, t);
  CHECK(m == 1.0);
  CHECK(head_seed(m, 1, 3) == 0.0);
  std::vector<Example> batch{{x, 1}};
  CHECK(cost(model, batch) == 0.0);
  CHECK(backward(model, t, 1).max_abs() == 0.0);
}

TEST_CASE("scalar model matches the closed form") {
  Hyperparameters hp;
  hp.n_u = 1;
  hp.n_pt = 1;
  hp.n_t = 1;
  hp.dt_u = hp.dt_star_u = 0.1;
  hp.dt_p = hp.dt_star_p = 0.2;
  WeightStack w = WeightStack::filled(hp, 0.0);
  const double alpha = 0.3, beta = 0.8, x = 0.7;
  w.w_u[0][0] = alpha;
  w.w_p[0][0] = beta;
  const auto model = PsbcModel::create(hp, w);
  for (int y : {0, 1}) {
    const double u1 = x + 0.1 * x * (1 - x) * (x - alpha);
    const double p1 = 0.5 + 0.2 * 0.5 * 0.5 * (0.5 - beta);
    const double s = u1 + p1 * (1 - 2 * u1);
    const double d_alpha = (s - y) * (1 - 2 * p1) * 0.1 * (-x * (1 - x));
    const double d_beta = (s - y) * (1 - 2 * u1) * 0.2 * (-0.25);
    const GradientStack g = backward(model, forward(model, Vector{x}), y);
    CHECK(g.g_w_u[0][0] == doctest::Approx(d_alpha).epsilon(1e-12));
    CHECK(g.g_w_p[0][0] == doctest::Approx(d_beta).epsilon(1e-12));
  }
}

TEST_CASE("backward matches central differences") {
  int config = 0;
  for (auto bc : {BoundaryCondition::Neumann, BoundaryCondition::Periodic})
    for (auto sub : {Subordination::Subordinate, Subordination::NonSubordinate})
      for (int k : {1, 3}) {
        Hyperparameters hp;
        hp.n_u = 8;
        hp.n_pt = 4;
        hp.n_t = 3;
        hp.shared_k = k;
        hp.eps = 0.25;
        hp.bc = bc;
        hp.subordination = sub;
        auto r = random_model(hp, 40 + static_cast<std::uint64_t>(config++), 3);
        const GradientStack g = batch_gradient(r.model, r.batch);
        const GradientStack fd = finite_difference_gradient(r.model, r.batch, 1e-6);
        CHECK(rel_error(g, fd) <= 1e-5);
      }
}

TEST_CASE("batch gradient averages per-sample gradients") {
  Hyperparameters hp;
  hp.n_u = 6;
  hp.n_pt = 2;
  hp.n_t = 2;
  auto r = random_model(hp, 50, 2);
  std::vector<Example> one{r.batch[0]};
  const GradientStack single = backward(r.model, forward(r.model, r.batch[0].x), r.batch[0].y);
  const GradientStack batched = batch_gradient(r.model, one);
  CHECK(rel_error(batched, single) <= 1e-15);
  std::vector<Example> twice{r.batch[0], r.batch[0]};
  CHECK(rel_error(batch_gradient(r.model, twice), single) <= 1e-15);
}

TEST_CASE("finite differences are exact to second order") {
  // The cost is smooth; halving h shrinks the gap to the backward pass roughly fourfold.
  Hyperparameters hp;
  hp.n_u = 4;
  hp.n_pt = 2;
  hp.n_t = 2;
  auto r = random_model(hp, 51, 2);
  const GradientStack g = batch_gradient(r.model, r.batch);
  const double e1 = rel_error(g, finite_difference_gradient(r.model, r.batch, 1e-2));
  const double e2 = rel_error(g, finite_difference_gradient(r.model, r.batch, 5e-3));
  CHECK(e2 < e1 / 3.0);
}

TEST_CASE("inviscid blocks decouple") {
  // With eps = 0 block 1 evolves on its own; its features start at the
  // fixed point 0, where d f / d alpha = -u (1 - u) vanishes.
  Hyperparameters hp;
  hp.n_u = 4;
  hp.n_pt = 2;
  hp.n_t = 2;
  WeightStack w = WeightStack::filled(hp, 0.4);
  const auto model = PsbcModel::create(hp, w);
  const Vector x{0.3, 0.8, 0.0, 0.0};
  const GradientStack g = backward(model, forward(model, x), 1);
  for (const auto& layer : g.g_w_u) CHECK(layer[1] == 0.0);
  CHECK(g.g_w_u[0][0] != 0.0);
}
