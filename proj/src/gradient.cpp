#include "psbc/gradient.hpp"

#include <algorithm>
#include <cmath>

#include "psbc/error.hpp"
#include "psbc/kernels.hpp"

namespace psbc {

GradientStack GradientStack::zeros(const Hyperparameters& hp) {
  const WeightStack w = WeightStack::filled(hp, 0.0);
  return GradientStack{w.w_u, w.w_p};
}

void GradientStack::scale(double s) {
  for (auto* fam : {&g_w_u, &g_w_p})
    for (auto& g : *fam)
      for (auto& v : g) v *= s;
}

void GradientStack::add(const GradientStack& other, double s) {
  if (other.g_w_u.size() != g_w_u.size() || other.g_w_p.size() != g_w_p.size())
    throw DimensionError("gradient stacks differ in shape");
  for (std::size_t k = 0; k < g_w_u.size(); ++k)
    for (std::size_t i = 0; i < g_w_u[k].size(); ++i) g_w_u[k][i] += s * other.g_w_u[k][i];
  for (std::size_t k = 0; k < g_w_p.size(); ++k)
    for (std::size_t i = 0; i < g_w_p[k].size(); ++i) g_w_p[k][i] += s * other.g_w_p[k][i];
}

double GradientStack::max_abs() const {
  double m = 0.0;
  for (const auto* fam : {&g_w_u, &g_w_p})
    for (const auto& g : *fam)
      for (double v : g) m = std::max(m, std::abs(v));
  return m;
}

double head_seed(double m, int y, int n_u) { return (m - y) / static_cast<double>(n_u); }

void backward_from_seed(const PsbcModel& model, const LayerCoefficients& coeffs, const Trajectory& traj, double g_s,
                        GradientStack& out, BackwardWorkspace& ws) {
  const auto& hp = model.hp;
  const auto n_t = static_cast<std::size_t>(hp.n_t);
  const auto n_u = static_cast<std::size_t>(hp.n_u);
  const auto n_p = static_cast<std::size_t>(hp.n_p());
  const auto n_pt = static_cast<std::size_t>(hp.n_pt);
  if (traj.u_layers.size() != n_t + 1 || traj.p_layers.size() != n_t + 1 || traj.u_layers.back().size() != n_u ||
      traj.p_layers.back().size() != n_p)
    throw DimensionError("backward: trajectory does not match the model");
  if (out.g_w_u.size() != static_cast<std::size_t>(hp.n_groups()))
    throw DimensionError("backward: gradient stack does not match the model");
  const auto& k = kernels::active();

  // Head: S = U + P~ (1 - 2U), summed.
  ws.p_tilde.resize(n_u);
  model.basis_sub.apply(traj.p_layers.back(), ws.p_tilde);
  ws.du.resize(n_u);
  ws.dpt.resize(n_u);
  k.flip_adjoint(traj.u_layers.back().data(), ws.p_tilde.data(), g_s, ws.du.data(), ws.dpt.data(), n_u);
  ws.dp.resize(n_p);
  model.basis_sub.pullback(ws.dpt, ws.dp);

  ws.layer_u.resize(n_t);
  ws.layer_p.resize(n_t);
  ws.mu.resize(n_u);
  ws.g_alpha.resize(n_u);

  // U chain: U^{n+1} = L^{-1}(U^n + dt f(U^n, alpha^n)).
  ws.lambda.assign(ws.du.begin(), ws.du.end());
  for (std::size_t n = n_t; n-- > 0;) {
    const auto g = static_cast<std::size_t>(hp.group_of(static_cast<int>(n)));
    model.diffusion.solve_l_transpose(ws.lambda, ws.mu);
    k.reaction_adjoint(traj.u_layers[n].data(), coeffs.alpha[g].data(), ws.mu.data(), hp.dt_u, ws.lambda.data(),
                       ws.g_alpha.data(), n_u);
    ws.layer_u[n].resize(n_pt);
    model.basis_u.pullback(ws.g_alpha, ws.layer_u[n]);
  }

  // P chain: same recursion with L = I.
  ws.mu.assign(ws.dp.begin(), ws.dp.end());
  ws.lambda.resize(n_p);
  for (std::size_t n = n_t; n-- > 0;) {
    const auto g = static_cast<std::size_t>(hp.group_of(static_cast<int>(n)));
    ws.layer_p[n].resize(n_p);
    k.reaction_adjoint(traj.p_layers[n].data(), coeffs.beta[g].data(), ws.mu.data(), hp.dt_p, ws.lambda.data(),
                       ws.layer_p[n].data(), n_p);
    std::swap(ws.mu, ws.lambda);
  }

  // Shared layers are summed into their group in ascending layer order.
  for (std::size_t n = 0; n < n_t; ++n) {
    const auto g = static_cast<std::size_t>(hp.group_of(static_cast<int>(n)));
    auto& gu = out.g_w_u[g];
    auto& gp = out.g_w_p[g];
    for (std::size_t i = 0; i < n_pt; ++i) gu[i] += ws.layer_u[n][i];
    for (std::size_t i = 0; i < n_p; ++i) gp[i] += ws.layer_p[n][i];
  }
}

GradientStack backward(const PsbcModel& model, const Trajectory& traj, int y) {
  BackwardWorkspace ws;
  GradientStack out = GradientStack::zeros(model.hp);
  const double m = score(model, traj);
  backward_from_seed(model, layer_coefficients(model), traj, head_seed(m, y, model.hp.n_u), out, ws);
  return out;
}

BatchEvaluation evaluate_batch(const PsbcModel& model, const LayerCoefficients& coeffs, std::span<const Example> batch,
                               BackwardWorkspace& ws) {
  if (batch.empty()) throw DomainError("evaluate_batch: empty batch");
  BatchEvaluation ev;
  ev.gradient = GradientStack::zeros(model.hp);
  const auto n_u = static_cast<std::size_t>(model.hp.n_u);
  double total = 0.0;
  ev.squared_residuals.reserve(batch.size());
  for (const auto& ex : batch) {
    if (ex.y != 0 && ex.y != 1) throw DomainError("labels must be 0 or 1");
    forward(model, coeffs, ex.x, ws.traj);
    ws.p_tilde.resize(n_u);
    model.basis_sub.apply(ws.traj.p_layers.back(), ws.p_tilde);
    const double m = flip_mean(ws.traj.u_layers.back(), ws.p_tilde);
    const double r = m - ex.y;
    total += r * r;
    ev.squared_residuals.push_back(r * r);
    if (label_from_score(m) == ex.y) ++ev.correct;
    backward_from_seed(model, coeffs, ws.traj, head_seed(m, ex.y, model.hp.n_u), ev.gradient, ws);
  }
  const double n = static_cast<double>(batch.size());
  ev.cost = total / (2.0 * n);
  ev.gradient.scale(1.0 / n);
  return ev;
}

GradientStack batch_gradient(const PsbcModel& model, std::span<const Example> batch) {
  BackwardWorkspace ws;
  return evaluate_batch(model, layer_coefficients(model), batch, ws).gradient;
}

GradientStack finite_difference_gradient(const PsbcModel& model, std::span<const Example> batch, double h) {
  if (!(h > 0.0)) throw DomainError("finite difference step must be positive");
  PsbcModel work = model;
  GradientStack out = GradientStack::zeros(model.hp);
  auto probe = [&](std::vector<Vector>& family, std::vector<Vector>& target) {
    for (std::size_t k = 0; k < family.size(); ++k)
      for (std::size_t i = 0; i < family[k].size(); ++i) {
        const double w0 = family[k][i];
        family[k][i] = w0 + h;
        const double up = cost(work, batch);
        family[k][i] = w0 - h;
        const double down = cost(work, batch);
        family[k][i] = w0;
        target[k][i] = (up - down) / (2.0 * h);
      }
  };
  probe(work.weights.w_u, out.g_w_u);
  probe(work.weights.w_p, out.g_w_p);
  return out;
}

}  // namespace psbc
