#include "psbc/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "psbc/error.hpp"
#include "psbc/kernels.hpp"

namespace psbc {

BasisMatrix subordinate_basis(const Hyperparameters& hp) {
  return BasisMatrix::canonical(hp.n_u, hp.n_p());
}

PsbcModel PsbcModel::create(const Hyperparameters& hp, WeightStack weights) {
  hp.validate();
  return create(hp, BasisMatrix::canonical(hp.n_u, hp.n_pt), std::move(weights));
}

PsbcModel PsbcModel::create(const Hyperparameters& hp, BasisMatrix basis_u, WeightStack weights) {
  hp.validate();
  PsbcModel m;
  m.hp = hp;
  m.basis_u = std::move(basis_u);
  m.basis_sub = subordinate_basis(hp);
  m.weights = std::move(weights);
  m.diffusion = DiffusionOperator::build(hp.n_u, hp.bc, hp.eps);
  m.validate();
  return m;
}

void PsbcModel::validate() const {
  hp.validate();
  if (basis_u.rows() != hp.n_u || basis_u.cols() != hp.n_pt)
    throw DimensionError("B_u must be " + std::to_string(hp.n_u) + " x " + std::to_string(hp.n_pt));
  if (!(basis_sub == subordinate_basis(hp)))
    throw ConfigError("B_sub does not match the subordination mode");
  weights.check_shape(hp);
  for (const auto* groups : {&weights.w_u, &weights.w_p})
    for (const auto& g : *groups)
      for (double v : g)
        if (!std::isfinite(v)) throw DomainError("weights must be finite");
  if (diffusion.n() != hp.n_u || diffusion.bc() != hp.bc || diffusion.eps2() != hp.eps * hp.eps)
    throw ConfigError("diffusion operator does not match the hyperparameters");
}

LayerCoefficients layer_coefficients(const PsbcModel& model) {
  LayerCoefficients c;
  c.alpha.reserve(model.weights.w_u.size());
  for (const auto& w : model.weights.w_u) c.alpha.push_back(model.basis_u.apply(w));
  c.beta = model.weights.w_p;
  return c;
}

void check_unit_box(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] >= 0.0 && x[i] <= 1.0))
      throw DomainError("input entry " + std::to_string(i) + " is outside [0, 1]");
}

Trajectory forward(const PsbcModel& model, std::span<const double> x) {
  Trajectory traj;
  forward(model, layer_coefficients(model), x, traj);
  return traj;
}

void forward(const PsbcModel& model, const LayerCoefficients& coeffs, std::span<const double> x, Trajectory& traj) {
  const auto& hp = model.hp;
  const auto n_u = static_cast<std::size_t>(hp.n_u);
  const auto n_p = static_cast<std::size_t>(hp.n_p());
  if (x.size() != n_u)
    throw DimensionError("forward: input has length " + std::to_string(x.size()) + ", expected " +
                         std::to_string(n_u));
  check_unit_box(x);
  const auto& k = kernels::active();
  traj.u_layers.resize(static_cast<std::size_t>(hp.n_t) + 1);
  traj.p_layers.resize(static_cast<std::size_t>(hp.n_t) + 1);
  traj.u_layers[0].assign(x.begin(), x.end());
  traj.p_layers[0].assign(n_p, 0.5);
  for (int n = 0; n < hp.n_t; ++n) {
    const auto g = static_cast<std::size_t>(hp.group_of(n));
    const auto& u = traj.u_layers[static_cast<std::size_t>(n)];
    const auto& p = traj.p_layers[static_cast<std::size_t>(n)];
    auto& u_next = traj.u_layers[static_cast<std::size_t>(n) + 1];
    auto& p_next = traj.p_layers[static_cast<std::size_t>(n) + 1];
    u_next.resize(n_u);
    p_next.resize(n_p);
    k.reaction_step(u.data(), coeffs.alpha[g].data(), hp.dt_u, u_next.data(), n_u);
    model.diffusion.solve_l(u_next, u_next);
    k.reaction_step(p.data(), coeffs.beta[g].data(), hp.dt_p, p_next.data(), n_p);
    // A sum is finite only if every term is.
    if (!std::isfinite(k.sum(u_next.data(), n_u)) || !std::isfinite(k.sum(p_next.data(), n_p)))
      throw PropagationError("non-finite state at layer " + std::to_string(n + 1));
  }
}

Vector phase_lift(std::span<const double> p, const BasisMatrix& basis_sub) { return basis_sub.apply(p); }

Vector flip_map(std::span<const double> u, std::span<const double> p_tilde) {
  if (u.size() != p_tilde.size()) throw DimensionError("flip_map: length mismatch");
  Vector out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] + p_tilde[i] * (1.0 - 2.0 * u[i]);
  return out;
}

double flip_mean(std::span<const double> u, std::span<const double> p_tilde) {
  if (u.size() != p_tilde.size() || u.empty()) throw DimensionError("flip_mean: length mismatch");
  return kernels::active().flip_sum(u.data(), p_tilde.data(), u.size()) / static_cast<double>(u.size());
}

double score(const PsbcModel& model, const Trajectory& traj) {
  const Vector pt = phase_lift(traj.p_layers.back(), model.basis_sub);
  return flip_mean(traj.u_layers.back(), pt);
}

double score(const PsbcModel& model, std::span<const double> x) { return score(model, forward(model, x)); }

int label_from_score(double m) { return std::abs(m - 1.0) <= std::abs(m) ? 1 : 0; }

int label_from_vector(std::span<const double> f) {
  double to_one = 0.0;
  double to_zero = 0.0;
  for (double v : f) {
    to_one += (v - 1.0) * (v - 1.0);
    to_zero += v * v;
  }
  return to_one <= to_zero ? 1 : 0;
}

int predict(const PsbcModel& model, std::span<const double> x) { return label_from_score(score(model, x)); }

double cost(const PsbcModel& model, std::span<const Example> batch) {
  if (batch.empty()) throw DomainError("cost: empty batch");
  const LayerCoefficients coeffs = layer_coefficients(model);
  Trajectory traj;
  double total = 0.0;
  for (const auto& ex : batch) {
    if (ex.y != 0 && ex.y != 1) throw DomainError("cost: labels must be 0 or 1");
    forward(model, coeffs, ex.x, traj);
    const double r = score(model, traj) - ex.y;
    total += r * r;
  }
  return total / (2.0 * static_cast<double>(batch.size()));
}

CoefficientRange coefficient_range(std::span<const Vector> groups) {
  CoefficientRange r;
  for (const auto& g : groups)
    for (double v : g) {
      r.lo = std::min(r.lo, v);
      r.hi = std::max(r.hi, v);
    }
  return r;
}

CoefficientRange coefficient_range(const BasisMatrix& basis, std::span<const Vector> groups) {
  if (basis.is_block()) return coefficient_range(groups);
  std::vector<Vector> lifted;
  lifted.reserve(groups.size());
  for (const auto& g : groups) lifted.push_back(basis.apply(g));
  return coefficient_range(lifted);
}

InvariantBox invariant_box(std::span<const Vector> alpha, std::span<const Vector> beta) {
  const CoefficientRange a = coefficient_range(alpha);
  const CoefficientRange b = coefficient_range(beta);
  InvariantBox box;
  box.l_alpha = a.lo;
  box.r_alpha = a.hi;
  box.m_alpha = std::pow(std::abs(a.lo) + std::abs(a.hi), 3);
  box.l_beta = b.lo;
  box.r_beta = b.hi;
  box.m_beta = std::pow(std::abs(b.lo) + std::abs(b.hi), 3);
  return box;
}

InvariantBox invariant_box(const LayerCoefficients& coeffs) { return invariant_box(coeffs.alpha, coeffs.beta); }

namespace {

bool inside(const std::vector<Vector>& layers, double lo, double hi) {
  for (const auto& layer : layers)
    for (double v : layer)
      if (!(v >= lo && v <= hi)) return false;
  return true;
}

}  // namespace

bool check_invariant(const Trajectory& traj, const InvariantBox& box, double dt_u, double dt_p) {
  constexpr double tol = 1e-12;
  return inside(traj.u_layers, box.l_alpha - dt_u * box.m_alpha - tol, box.r_alpha + dt_u * box.m_alpha + tol) &&
         inside(traj.p_layers, box.l_beta - dt_p * box.m_beta - tol, box.r_beta + dt_p * box.m_beta + tol);
}

double irec_step(double diameter, double dt_star) {
  return std::min(dt_star, 1.0 / (std::sqrt(3.0) * diameter * diameter));
}

IrecResult irec_dt(const BasisMatrix& basis_u, const WeightStack& weights, double dt_star_u, double dt_star_p) {
  IrecResult r;
  r.diam_alpha = coefficient_range(basis_u, weights.w_u).diameter();
  r.diam_beta = coefficient_range(weights.w_p).diameter();
  r.dt_u = irec_step(r.diam_alpha, dt_star_u);
  r.dt_p = irec_step(r.diam_beta, dt_star_p);
  return r;
}

IrecResult irec_dt(const PsbcModel& model) {
  return irec_dt(model.basis_u, model.weights, model.hp.dt_star_u, model.hp.dt_star_p);
}

}  // namespace psbc
