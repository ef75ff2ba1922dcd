#include "psbc/checks/suites.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

#include "psbc/checks/oracles.hpp"
#include "psbc/error.hpp"
#include "psbc/gradient.hpp"
#include "psbc/kernels.hpp"
#include "psbc/propagation.hpp"

namespace psbc::suites {
namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Vector random_vector(Rng& rng, std::size_t n, double lo, double hi) {
  Vector v(n);
  for (auto& x : v) x = uniform(rng, lo, hi);
  return v;
}

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct ModelShape {
  int n_u = 4;
  int n_pt = 4;
  int n_t = 1;
  int shared_k = 1;
  double eps = 0.0;
  BoundaryCondition bc = BoundaryCondition::Neumann;
  Subordination sub = Subordination::Subordinate;
};

Hyperparameters shape_hp(const ModelShape& s, double dt_u, double dt_p) {
  Hyperparameters hp;
  hp.n_u = s.n_u;
  hp.n_pt = s.n_pt;
  hp.n_t = s.n_t;
  hp.shared_k = s.shared_k;
  hp.eps = s.eps;
  hp.bc = s.bc;
  hp.subordination = s.sub;
  hp.dt_u = hp.dt_star_u = dt_u;
  hp.dt_p = hp.dt_star_p = dt_p;
  return hp;
}

WeightStack random_weights(const Hyperparameters& hp, Rng& rng, double lo, double hi) {
  WeightStack w = WeightStack::filled(hp, 0.0);
  for (auto& g : w.w_u)
    for (auto& v : g) v = uniform(rng, lo, hi);
  for (auto& g : w.w_p)
    for (auto& v : g) v = uniform(rng, lo, hi);
  return w;
}

/// Model whose steps are exactly `factor` times the IREC bound.
PsbcModel model_at_irec(const ModelShape& s, WeightStack w, double factor) {
  Hyperparameters hp = shape_hp(s, 1.0, 1.0);
  const BasisMatrix basis = BasisMatrix::canonical(s.n_u, s.n_pt);
  const IrecResult r = irec_dt(basis, w, 1e300, 1e300);
  hp.dt_u = hp.dt_star_u = factor * r.dt_u;
  hp.dt_p = hp.dt_star_p = factor * r.dt_p;
  return PsbcModel::create(hp, basis, std::move(w));
}

ModelShape random_shape(Rng& rng, int max_n_u, int max_n_t) {
  ModelShape s;
  s.n_u = uniform_int(rng, 1, max_n_u);
  s.n_pt = uniform_int(rng, 1, s.n_u);
  s.n_t = uniform_int(rng, 1, max_n_t);
  s.shared_k = uniform_int(rng, 0, 1) ? s.n_t : 1;
  const double eps_values[] = {0.0, 0.25, 1.0};
  s.eps = eps_values[uniform_int(rng, 0, 2)];
  s.bc = (s.n_u >= 3 && uniform_int(rng, 0, 1)) ? BoundaryCondition::Periodic : BoundaryCondition::Neumann;
  s.sub = uniform_int(rng, 0, 1) ? Subordination::Subordinate : Subordination::NonSubordinate;
  return s;
}

Vector random_input(Rng& rng, int n_u) {
  // A quarter of the inputs sit on the corners of the unit box.
  Vector x(static_cast<std::size_t>(n_u));
  const bool corner = uniform_int(rng, 0, 3) == 0;
  for (auto& v : x) v = corner ? static_cast<double>(uniform_int(rng, 0, 1)) : uniform(rng, 0.0, 1.0);
  return x;
}

// How far outside [l, r] the trajectory gets, in units of the allowed spill dt*m.
double spill_ratio(const Trajectory& traj, const InvariantBox& box, double dt_u, double dt_p) {
  double worst = 0.0;
  auto scan = [&](const std::vector<Vector>& layers, double l, double r, double margin) {
    for (const auto& layer : layers)
      for (double v : layer) {
        const double out = std::max({l - v, v - r, 0.0});
        worst = std::max(worst, out / margin);
      }
  };
  scan(traj.u_layers, box.l_alpha, box.r_alpha, dt_u * box.m_alpha);
  scan(traj.p_layers, box.l_beta, box.r_beta, dt_p * box.m_beta);
  return worst;
}

}  // namespace

SuiteResult gradient_oracle(int configurations, std::uint64_t seed, double tolerance) {
  SuiteResult res;
  res.name = "gradient oracle";
  struct Combo {
    int n_u, n_pt, n_t, shared_k;
    double eps;
    BoundaryCondition bc;
    Subordination sub;
  };
  std::vector<Combo> combos;
  for (int n_u : {4, 8, 16})
    for (int n_pt : {1, n_u / 2, n_u})
      for (int n_t : {1, 2, 4})
        for (int shared : {1, n_t})
          for (double eps : {0.0, 0.25})
            for (auto bc : {BoundaryCondition::Neumann, BoundaryCondition::Periodic})
              for (auto sub : {Subordination::Subordinate, Subordination::NonSubordinate})
                combos.push_back({n_u, n_pt, n_t, shared, eps, bc, sub});
  Rng rng(seed);
  std::shuffle(combos.begin(), combos.end(), rng);
  for (int i = 0; i < configurations; ++i) {
    const Combo& c = combos[static_cast<std::size_t>(i) % combos.size()];
    const ModelShape s{c.n_u, c.n_pt, c.n_t, c.shared_k, c.eps, c.bc, c.sub};
    Hyperparameters hp = shape_hp(s, 0.2, 0.2);
    WeightStack w = random_weights(hp, rng, -0.5, 1.5);
    const IrecResult r = irec_dt(BasisMatrix::canonical(s.n_u, s.n_pt), w, 0.2, 0.2);
    hp.dt_u = r.dt_u;
    hp.dt_p = r.dt_p;
    const PsbcModel model = PsbcModel::create(hp, std::move(w));
    std::vector<Vector> xs;
    std::vector<Example> batch;
    const int n = uniform_int(rng, 1, 4);
    for (int k = 0; k < n; ++k) xs.push_back(random_vector(rng, static_cast<std::size_t>(s.n_u), 0.0, 1.0));
    for (int k = 0; k < n; ++k) batch.push_back({xs[static_cast<std::size_t>(k)], uniform_int(rng, 0, 1)});

    const GradientStack g = batch_gradient(model, batch);
    const GradientStack fd = finite_difference_gradient(model, batch, 1e-6);
    Vector a, b;
    for (std::size_t k = 0; k < g.g_w_u.size(); ++k) {
      a.insert(a.end(), g.g_w_u[k].begin(), g.g_w_u[k].end());
      a.insert(a.end(), g.g_w_p[k].begin(), g.g_w_p[k].end());
      b.insert(b.end(), fd.g_w_u[k].begin(), fd.g_w_u[k].end());
      b.insert(b.end(), fd.g_w_p[k].begin(), fd.g_w_p[k].end());
    }
    const double err = oracle::relative_inf_error(a, b);
    ++res.checks;
    res.worst = std::max(res.worst, err);
    if (!(err <= tolerance)) ++res.failures;
  }
  res.detail = "max relative error " + fmt("%.3e", res.worst) + " over " + std::to_string(res.checks) +
               " configurations";
  return res;
}

SuiteResult invariant_region(int draws, std::uint64_t seed) {
  SuiteResult res;
  res.name = "invariant region";
  Rng rng(seed);
  for (int i = 0; i < draws; ++i) {
    const ModelShape s = random_shape(rng, 24, 12);
    const Hyperparameters probe = shape_hp(s, 1.0, 1.0);
    PsbcModel model = model_at_irec(s, random_weights(probe, rng, -2.0, 2.0), 1.0);
    const InvariantBox box = invariant_box(layer_coefficients(model));
    ++res.checks;
    try {
      const Trajectory traj = forward(model, random_input(rng, s.n_u));
      res.worst = std::max(res.worst, spill_ratio(traj, box, model.hp.dt_u, model.hp.dt_p));
      if (!check_invariant(traj, box, model.hp.dt_u, model.hp.dt_p)) ++res.failures;
    } catch (const PropagationError&) {
      ++res.failures;
    }
  }
  res.detail = std::to_string(res.failures) + " of " + std::to_string(res.checks) +
               " trajectories left the box; largest spill " + fmt("%.3g", res.worst) + " of the allowed margin";
  return res;
}

SuiteResult irec_counterexample(int random_draws, std::uint64_t seed, double factor) {
  SuiteResult res;
  res.name = "IREC counterexample search";
  Rng rng(seed);
  long long escapes = 0;
  auto probe = [&](PsbcModel& model, const Vector& x) {
    ++res.checks;
    const InvariantBox box = invariant_box(layer_coefficients(model));
    try {
      const Trajectory traj = forward(model, x);
      res.worst = std::max(res.worst, spill_ratio(traj, box, model.hp.dt_u, model.hp.dt_p));
      if (!check_invariant(traj, box, model.hp.dt_u, model.hp.dt_p)) ++escapes;
    } catch (const PropagationError&) {
      ++escapes;
      res.worst = INFINITY;
    }
  };

  // Unstructured draws, as in the invariant-region suite but with larger steps.
  for (int i = 0; i < random_draws; ++i) {
    const ModelShape s = random_shape(rng, 24, 50);
    const Hyperparameters hp = shape_hp(s, 1.0, 1.0);
    PsbcModel model = model_at_irec(s, random_weights(hp, rng, -2.0, 2.0), factor);
    probe(model, random_input(rng, s.n_u));
  }

  // Structured scalar search: eps = 0, each layer's coefficient picked from
  // the ends of [l, r] to push the state as far out as possible.
  const double ends[][2] = {{0.0, 1.0}, {-0.5, 1.0}, {0.0, 1.5}, {-2.0, 2.0}, {-1.0, 3.0}, {-3.0, 1.0}, {-0.2, 0.1}};
  for (const auto& e : ends) {
    const double l = std::min(0.0, e[0]);
    const double r = std::max(1.0, e[1]);
    const double dt = factor / (std::sqrt(3.0) * (r - l) * (r - l));
    for (int start = 0; start <= 20; ++start) {
      double u = start / 20.0;
      Vector alphas;
      for (int n = 0; n < 50; ++n) {
        double best_a = l;
        double best_out = -1.0;
        for (double a : {l, r, 0.5 * (l + r)}) {
          const double next = u + dt * reaction(u, a);
          const double out = std::max(l - next, next - r);
          if (out > best_out) {
            best_out = out;
            best_a = a;
          }
        }
        alphas.push_back(best_a);
        u = u + dt * reaction(u, best_a);
      }
      ModelShape s;
      s.n_u = 1;
      s.n_pt = 1;
      s.n_t = 50;
      s.shared_k = 1;
      s.sub = Subordination::NonSubordinate;
      Hyperparameters hp = shape_hp(s, dt, dt);
      WeightStack w = WeightStack::filled(hp, 0.5);
      for (int n = 0; n < 50; ++n) w.w_u[static_cast<std::size_t>(n)][0] = alphas[static_cast<std::size_t>(n)];
      // Pin the range so the box is exactly [l, r] even if one end was never chosen.
      w.w_p[0][0] = l;
      w.w_p[1][0] = r;
      hp.dt_u = hp.dt_star_u = dt;
      hp.dt_p = hp.dt_star_p = dt;
      PsbcModel model = PsbcModel::create(hp, std::move(w));
      Vector x{start / 20.0};
      // Recompute dt from the stored coefficients so the ratio to the bound is exact.
      const IrecResult bound = irec_dt(model.basis_u, model.weights, 1e300, 1e300);
      model.hp.dt_u = model.hp.dt_star_u = factor * bound.dt_u;
      model.hp.dt_p = model.hp.dt_star_p = factor * bound.dt_p;
      probe(model, x);
    }
  }
  res.failures = escapes > 0 ? 0 : 1;
  res.detail = std::to_string(escapes) + " escapes in " + std::to_string(res.checks) + " trajectories at dt = " +
               fmt("%g", factor) + " x bound; largest spill " + fmt("%.3g", res.worst) + " of the allowed margin";
  return res;
}

SuiteResult maximum_principle(int n_lo, int n_hi, int cone_vectors, std::uint64_t seed) {
  SuiteResult res;
  res.name = "maximum principle";
  Rng rng(seed);
  const double eps_values[] = {0.0, 1.0 / 16.0, 0.25, 1.0, 4.0};
  double worst_norm = 0.0;
  double worst_cone = 0.0;
  std::ostringstream issues;
  for (int n = std::max(n_lo, 1); n <= n_hi; ++n)
    for (double eps : eps_values)
      for (auto bc : {BoundaryCondition::Neumann, BoundaryCondition::Periodic}) {
        if (bc == BoundaryCondition::Periodic && n < 3) continue;
        const DiffusionOperator op = DiffusionOperator::build(n, bc, eps);
        const auto un = static_cast<std::size_t>(n);

        const double norm = oracle::inverse_inf_norm(op);
        worst_norm = std::max(worst_norm, norm);
        ++res.checks;
        if (!(norm <= 1.0 + 1e-12)) {
          ++res.failures;
          issues << " norm(n=" << n << ")=" << norm;
        }

        const Vector dones = op.apply_d(Vector(un, 1.0));
        ++res.checks;
        if (!std::all_of(dones.begin(), dones.end(), [](double v) { return v == 0.0; })) ++res.failures;

        for (int k = 0; k < cone_vectors; ++k) {
          Vector v = random_vector(rng, un, 0.0, 1.0);
          if (k % 3 == 0)
            for (auto& e : v)
              if (uniform_int(rng, 0, 1)) e = 0.0;
          const Vector s = op.solve_l(v);
          const double lo = *std::min_element(s.begin(), s.end());
          worst_cone = std::min(worst_cone, lo);
          ++res.checks;
          if (!(lo >= -1e-12)) ++res.failures;

          const Vector w = random_vector(rng, un, -1.0, 1.0);
          const Vector dw = op.apply_d(w);
          const auto imin = static_cast<std::size_t>(std::min_element(w.begin(), w.end()) - w.begin());
          const auto imax = static_cast<std::size_t>(std::max_element(w.begin(), w.end()) - w.begin());
          ++res.checks;
          if (!(dw[imin] >= 0.0 && dw[imax] <= 0.0)) ++res.failures;
          // Sign of (D w)_j against the neighbour average.
          for (std::size_t j = 0; j < un; ++j) {
            const double gap = neighbor_average(w, static_cast<int>(j), bc) - w[j];
            if (std::abs(gap) <= 1e-12 || n == 1) continue;
            ++res.checks;
            if ((dw[j] > 0.0) != (gap > 0.0)) ++res.failures;
          }
        }
      }
  res.worst = worst_norm;
  res.detail = "max ||L^-1||_inf " + fmt("%.17g", worst_norm) + ", min solve on the cone " + fmt("%.3g", worst_cone) +
               issues.str();
  return res;
}

SuiteResult polynomial_lemma(int samples, std::uint64_t seed) {
  SuiteResult res;
  res.name = "polynomial lemma";
  Rng rng(seed);
  const double hi = 1.0 + 1.0 / std::sqrt(3.0);
  double lowest = INFINITY;
  for (int i = 0; i < samples; ++i) {
    const double z = uniform(rng, 1.0, hi);
    const double p = oracle::quartic_bound_polynomial(z);
    lowest = std::min(lowest, p);
    ++res.checks;
    if (!(p >= -1e-12)) ++res.failures;
  }
  res.worst = lowest;
  res.detail = "min p(z) = " + fmt("%.6g", lowest);
  return res;
}

SuiteResult monotonicity(int sequences, int max_layers, std::uint64_t seed) {
  SuiteResult res;
  res.name = "monotonicity";
  Rng rng(seed);
  long long violations = 0;
  for (int i = 0; i < sequences; ++i) {
    ModelShape s;
    s.n_u = 1;
    s.n_pt = 1;
    s.n_t = uniform_int(rng, 1, max_layers);
    s.sub = Subordination::NonSubordinate;
    const Hyperparameters hp = shape_hp(s, 0.099, 0.099);
    PsbcModel model = PsbcModel::create(hp, random_weights(hp, rng, 0.0, 1.0));
    double x = uniform(rng, 0.0, 1.0);
    double xt = uniform(rng, 0.0, 1.0);
    if (i % 10 == 0) xt = x;
    if (x < xt) std::swap(x, xt);
    const Trajectory a = forward(model, Vector{x});
    const Trajectory b = forward(model, Vector{xt});
    for (std::size_t n = 0; n < a.u_layers.size(); ++n) {
      ++res.checks;
      if (!(a.u_layers[n][0] >= b.u_layers[n][0])) ++violations;
    }
  }
  res.failures = violations;
  res.detail = std::to_string(violations) + " ordering violations over " + std::to_string(sequences) + " sequences";
  return res;
}

SuiteResult discriminant_equivalence(int vectors, std::uint64_t seed) {
  SuiteResult res;
  res.name = "discriminant equivalence";
  Rng rng(seed);
  for (int i = 0; i < vectors; ++i) {
    const auto n = static_cast<std::size_t>(uniform_int(rng, 1, 64));
    const Vector f = random_vector(rng, n, -1.0, 2.0);
    double s = 0.0;
    for (double v : f) s += v;
    ++res.checks;
    if (label_from_vector(f) != label_from_score(s / static_cast<double>(n))) ++res.failures;
  }
  res.detail = std::to_string(res.failures) + " disagreements in " + std::to_string(res.checks) + " vectors";
  return res;
}

SuiteResult allen_cahn_end_state() {
  SuiteResult res;
  res.name = "Allen-Cahn end state";
  SimulationSetup setup;
  setup.n_u = 20;
  setup.n_t = 300;
  setup.dt = 0.1;
  setup.eps = 0.0;
  const Vector u0 = figure_initial_condition(setup.n_u);
  for (double a : {-0.8, 0.9}) {
    const Vector alpha(static_cast<std::size_t>(setup.n_u), a);
    const Trajectory traj = allen_cahn_simulate(alpha, u0, setup);
    const Vector& last = traj.u_layers.back();
    for (std::size_t m = 0; m < u0.size(); ++m) {
      if (u0[m] == a) continue;
      const double limit = u0[m] > a ? 1.0 : 0.0;
      const double err = std::abs(last[m] - limit);
      res.worst = std::max(res.worst, err);
      ++res.checks;
      if (!(err <= 1e-2)) ++res.failures;
    }
  }
  res.detail = "max distance from the end state " + fmt("%.3e", res.worst);
  return res;
}

SuiteResult parallelization(int models, std::uint64_t seed) {
  SuiteResult res;
  res.name = "parallelization";
  Rng rng(seed);
  for (int i = 0; i < models; ++i) {
    ModelShape s;
    s.n_pt = uniform_int(rng, 1, 8);
    s.n_u = uniform_int(rng, s.n_pt, 5 * s.n_pt);
    s.n_t = uniform_int(rng, 1, 5);
    s.shared_k = uniform_int(rng, 0, 1) ? s.n_t : 1;
    s.bc = (s.n_u >= 3 && uniform_int(rng, 0, 1)) ? BoundaryCondition::Periodic : BoundaryCondition::Neumann;
    s.sub = Subordination::Subordinate;
    Hyperparameters hp = shape_hp(s, 0.3, 0.3);
    WeightStack w = random_weights(hp, rng, -0.5, 1.5);
    const IrecResult r = irec_dt(BasisMatrix::canonical(s.n_u, s.n_pt), w, 0.3, 0.3);
    hp.dt_u = r.dt_u;
    hp.dt_p = r.dt_p;
    const PsbcModel whole = PsbcModel::create(hp, std::move(w));
    const Vector x = random_vector(rng, static_cast<std::size_t>(s.n_u), 0.0, 1.0);
    const int y = uniform_int(rng, 0, 1);

    const LayerCoefficients coeffs = layer_coefficients(whole);
    Trajectory traj;
    forward(whole, coeffs, x, traj);
    const double g_s = head_seed(score(whole, traj), y, s.n_u);
    GradientStack grad = GradientStack::zeros(hp);
    BackwardWorkspace ws;
    backward_from_seed(whole, coeffs, traj, g_s, grad, ws);

    bool same = true;
    const auto offsets = whole.basis_u.block_offsets();
    for (int j = 0; j < s.n_pt; ++j) {
      const int lo = offsets[static_cast<std::size_t>(j)];
      const int hi = offsets[static_cast<std::size_t>(j) + 1];
      Hyperparameters bh = hp;
      bh.n_u = hi - lo;
      bh.n_pt = 1;
      bh.bc = BoundaryCondition::Neumann;  // eps = 0: no coupling either way
      WeightStack bw = WeightStack::filled(bh, 0.0);
      for (std::size_t g = 0; g < bw.w_u.size(); ++g) {
        bw.w_u[g][0] = whole.weights.w_u[g][static_cast<std::size_t>(j)];
        bw.w_p[g][0] = whole.weights.w_p[g][static_cast<std::size_t>(j)];
      }
      const PsbcModel part = PsbcModel::create(bh, std::move(bw));
      const LayerCoefficients pc = layer_coefficients(part);
      Trajectory pt;
      forward(part, pc, std::span<const double>(x).subspan(static_cast<std::size_t>(lo), static_cast<std::size_t>(hi - lo)), pt);
      for (std::size_t n = 0; n < pt.u_layers.size(); ++n) {
        for (int m = lo; m < hi; ++m)
          same = same && std::bit_cast<std::uint64_t>(pt.u_layers[n][static_cast<std::size_t>(m - lo)]) ==
                             std::bit_cast<std::uint64_t>(traj.u_layers[n][static_cast<std::size_t>(m)]);
        same = same && std::bit_cast<std::uint64_t>(pt.p_layers[n][0]) ==
                           std::bit_cast<std::uint64_t>(traj.p_layers[n][static_cast<std::size_t>(j)]);
      }
      GradientStack pg = GradientStack::zeros(bh);
      BackwardWorkspace pws;
      backward_from_seed(part, pc, pt, g_s, pg, pws);
      for (std::size_t g = 0; g < pg.g_w_u.size(); ++g) {
        same = same && std::bit_cast<std::uint64_t>(pg.g_w_u[g][0]) ==
                           std::bit_cast<std::uint64_t>(grad.g_w_u[g][static_cast<std::size_t>(j)]);
        same = same && std::bit_cast<std::uint64_t>(pg.g_w_p[g][0]) ==
                           std::bit_cast<std::uint64_t>(grad.g_w_p[g][static_cast<std::size_t>(j)]);
      }
    }
    ++res.checks;
    if (!same) ++res.failures;
  }
  res.detail = std::to_string(res.checks - res.failures) + " of " + std::to_string(res.checks) +
               " models matched bit for bit";
  return res;
}

SuiteResult solver_oracle(int systems, int max_n, std::uint64_t seed) {
  SuiteResult res;
  res.name = "solver oracle";
  Rng rng(seed);
  for (int i = 0; i < systems; ++i) {
    const auto bc = uniform_int(rng, 0, 1) ? BoundaryCondition::Periodic : BoundaryCondition::Neumann;
    const int n = uniform_int(rng, bc == BoundaryCondition::Periodic ? 3 : 1, max_n);
    const double eps = uniform(rng, 0.0, 2.0);
    const DiffusionOperator op = DiffusionOperator::build(n, bc, eps);
    const Vector rhs = random_vector(rng, static_cast<std::size_t>(n), -1.0, 1.0);
    const Vector l = op.dense_l();
    Vector lt(l.size());
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        lt[static_cast<std::size_t>(c) * n + r] = l[static_cast<std::size_t>(r) * n + c];
    const double e1 = oracle::relative_inf_error(op.solve_l(rhs), oracle::dense_solve(l, rhs));
    const double e2 = oracle::relative_inf_error(op.solve_l_transpose(rhs), oracle::dense_solve(lt, rhs));
    res.worst = std::max({res.worst, e1, e2});
    res.checks += 2;
    if (!(e1 <= 1e-10)) ++res.failures;
    if (!(e2 <= 1e-10)) ++res.failures;
  }
  res.detail = "max relative error " + fmt("%.3e", res.worst);
  return res;
}

SuiteResult kernel_equivalence(int trials, std::uint64_t seed) {
  SuiteResult res;
  res.name = "kernel equivalence";
  const kernels::KernelTable& ref = kernels::scalar_table();
  std::vector<const kernels::KernelTable*> variants;
  if (kernels::available(kernels::Variant::Avx2)) variants.push_back(kernels::avx2_table());
  if (variants.empty()) {
    res.checks = 1;
    res.detail = "no SIMD variant on this machine; scalar only";
    return res;
  }
  Rng rng(seed);
  auto bits_equal = [](const Vector& a, const Vector& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
    return true;
  };
  for (const auto* k : variants)
    for (int t = 0; t < trials; ++t) {
      const auto n = static_cast<std::size_t>(uniform_int(rng, 0, 70));
      const Vector u = random_vector(rng, n, -0.5, 1.5);
      const Vector w = random_vector(rng, n, -2.0, 2.0);
      const Vector mu = random_vector(rng, n, -1.0, 1.0);
      const double dt = uniform(rng, 0.0, 0.5);
      const double g = uniform(rng, -1.0, 1.0);
      Vector a1(n), a2(n), b1(n), b2(n), c1(n), c2(n);
      ref.reaction_step(u.data(), w.data(), dt, a1.data(), n);
      k->reaction_step(u.data(), w.data(), dt, a2.data(), n);
      bool ok = bits_equal(a1, a2);
      ref.reaction_adjoint(u.data(), w.data(), mu.data(), dt, a1.data(), b1.data(), n);
      k->reaction_adjoint(u.data(), w.data(), mu.data(), dt, a2.data(), b2.data(), n);
      ok = ok && bits_equal(a1, a2) && bits_equal(b1, b2);
      ref.flip_adjoint(u.data(), mu.data(), g, b1.data(), c1.data(), n);
      k->flip_adjoint(u.data(), mu.data(), g, b2.data(), c2.data(), n);
      ok = ok && bits_equal(b1, b2) && bits_equal(c1, c2);
      ok = ok && std::bit_cast<std::uint64_t>(ref.flip_sum(u.data(), mu.data(), n)) ==
                     std::bit_cast<std::uint64_t>(k->flip_sum(u.data(), mu.data(), n));
      ok = ok && std::bit_cast<std::uint64_t>(ref.sum(w.data(), n)) ==
                     std::bit_cast<std::uint64_t>(k->sum(w.data(), n));
      ++res.checks;
      if (!ok) ++res.failures;
    }
  res.detail = std::to_string(variants.size()) + " SIMD variant(s) checked over " + std::to_string(trials) + " trials";
  return res;
}

SuiteResult adjoint_identities(int trials, std::uint64_t seed) {
  SuiteResult res;
  res.name = "adjoint identities";
  Rng rng(seed);
  auto dot = [](const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  auto close = [](double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); };
  for (int t = 0; t < trials; ++t) {
    const int n_u = uniform_int(rng, 1, 40);
    const int n_pt = uniform_int(rng, 1, n_u);
    // Basis transpose, canonical and dense.
    const BasisMatrix canon = BasisMatrix::canonical(n_u, n_pt);
    Vector entries = random_vector(rng, static_cast<std::size_t>(n_u) * n_pt, -1.0, 1.0);
    for (int j = 0; j < n_pt; ++j) entries[static_cast<std::size_t>(j) * n_pt + j] += 4.0;  // full rank
    const BasisMatrix dense = BasisMatrix::dense(n_u, n_pt, entries);
    for (const BasisMatrix* b : {&canon, &dense}) {
      const Vector w = random_vector(rng, static_cast<std::size_t>(n_pt), -1.0, 1.0);
      const Vector g = random_vector(rng, static_cast<std::size_t>(n_u), -1.0, 1.0);
      ++res.checks;
      if (!close(dot(b->apply(w), g), dot(w, b->pullback(g)), 1e-12)) ++res.failures;
    }
    // Canonical bases preserve the sup norm.
    {
      const Vector w = random_vector(rng, static_cast<std::size_t>(n_pt), -3.0, 3.0);
      const Vector a = canon.apply(w);
      double nw = 0.0, na = 0.0;
      for (double v : w) nw = std::max(nw, std::abs(v));
      for (double v : a) na = std::max(na, std::abs(v));
      ++res.checks;
      if (nw != na) ++res.failures;
    }
    // Weight sharing.
    {
      Hyperparameters hp;
      hp.n_u = n_u;
      hp.n_pt = n_pt;
      hp.n_t = uniform_int(rng, 1, 6);
      hp.shared_k = uniform_int(rng, 0, 1) ? hp.n_t : 1;
      WeightStack w = WeightStack::filled(hp, 0.0);
      for (auto& g : w.w_u) g = random_vector(rng, g.size(), -1.0, 1.0);
      for (auto& g : w.w_p) g = random_vector(rng, g.size(), -1.0, 1.0);
      LayerWeights gl;
      for (int n = 0; n < hp.n_t; ++n) {
        gl.w_u.push_back(random_vector(rng, static_cast<std::size_t>(n_pt), -1.0, 1.0));
        gl.w_p.push_back(random_vector(rng, static_cast<std::size_t>(hp.n_p()), -1.0, 1.0));
      }
      const LayerWeights ew = expand_shared(w, hp);
      const WeightStack cg = contract_shared(gl, hp);
      double lhs = 0.0, rhs = 0.0;
      for (int n = 0; n < hp.n_t; ++n) lhs += dot(ew.w_u[static_cast<std::size_t>(n)], gl.w_u[static_cast<std::size_t>(n)]) +
                                               dot(ew.w_p[static_cast<std::size_t>(n)], gl.w_p[static_cast<std::size_t>(n)]);
      for (std::size_t g = 0; g < w.w_u.size(); ++g) rhs += dot(w.w_u[g], cg.w_u[g]) + dot(w.w_p[g], cg.w_p[g]);
      ++res.checks;
      if (!close(lhs, rhs, 1e-12)) ++res.failures;
    }
    // Implicit solve and its transpose.
    {
      const auto bc = (n_u >= 3 && uniform_int(rng, 0, 1)) ? BoundaryCondition::Periodic : BoundaryCondition::Neumann;
      const DiffusionOperator op = DiffusionOperator::build(n_u, bc, uniform(rng, 0.0, 1.5));
      const Vector a = random_vector(rng, static_cast<std::size_t>(n_u), -1.0, 1.0);
      const Vector b = random_vector(rng, static_cast<std::size_t>(n_u), -1.0, 1.0);
      ++res.checks;
      if (!close(dot(op.solve_l(a), b), dot(a, op.solve_l_transpose(b)), 1e-10)) ++res.failures;
    }
    // Reaction symmetry f(u, w) = -f(1 - u, 1 - w).
    {
      const double u = uniform(rng, -1.0, 2.0);
      const double w = uniform(rng, -1.0, 2.0);
      ++res.checks;
      if (!(std::abs(reaction(u, w) + reaction(1.0 - u, 1.0 - w)) <= 1e-12)) ++res.failures;
    }
  }
  res.detail = std::to_string(res.failures) + " failures in " + std::to_string(res.checks) + " identities";
  return res;
}

std::vector<NamedSuite> default_suites(double scale, std::uint64_t seed) {
  scale = std::clamp(scale, 1e-3, 1.0);
  auto n = [scale](int full) { return std::max(1, static_cast<int>(std::lround(full * scale))); };
  return {
      {"kernel equivalence", [=] { return kernel_equivalence(n(500), seed + 1); }},
      {"adjoint identities", [=] { return adjoint_identities(n(500), seed + 2); }},
      {"solver oracle", [=] { return solver_oracle(n(500), 256, seed + 3); }},
      {"maximum principle", [=] { return maximum_principle(3, 3 + n(61), n(100), seed + 4); }},
      {"discriminant equivalence", [=] { return discriminant_equivalence(n(10000), seed + 6); }},
      {"monotonicity", [=] { return monotonicity(n(10000), 50, seed + 7); }},
      {"invariant region", [=] { return invariant_region(n(1000), seed + 8); }},
      {"parallelization", [=] { return parallelization(n(100), seed + 9); }},
      {"Allen-Cahn end state", [] { return allen_cahn_end_state(); }},
      {"gradient oracle", [=] { return gradient_oracle(n(200), seed + 10); }},
  };
}

}  // namespace psbc::suites
