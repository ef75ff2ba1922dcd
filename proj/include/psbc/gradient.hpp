#pragma once

#include <span>
#include <vector>

#include "psbc/core.hpp"
#include "psbc/propagation.hpp"

namespace psbc {

/// Derivatives with respect to the stored weight groups; mirrors WeightStack.
struct GradientStack {
  std::vector<Vector> g_w_u;
  std::vector<Vector> g_w_p;

  static GradientStack zeros(const Hyperparameters& hp);
  void scale(double s);
  /// this += s * other
  void add(const GradientStack& other, double s = 1.0);
  /// Largest |entry| over both families.
  double max_abs() const;
};

/// Scratch buffers reused across backward passes.
struct BackwardWorkspace {
  Vector p_tilde, du, dpt, dp, mu, lambda, g_alpha;
  std::vector<Vector> layer_u;  // per-layer B_u^T g_alpha, summed into groups afterwards
  std::vector<Vector> layer_p;
  Trajectory traj;
};

/// dLoss/dS_i for the per-sample loss (m - y)^2 / 2, with m = Mean(S).
double head_seed(double m, int y, int n_u);

/// Accumulates the gradient of a loss whose derivative with respect to every
/// entry of S is `g_s` into `out`, i.e. out += g_s * dSum(S)/dW.
void backward_from_seed(const PsbcModel& model, const LayerCoefficients& coeffs, const Trajectory& traj, double g_s,
                        GradientStack& out, BackwardWorkspace& ws);

/// Gradient of (Mean(S) - y)^2 / 2 for one sample.
GradientStack backward(const PsbcModel& model, const Trajectory& traj, int y);

/// Cost, gradient and correct-prediction count over a batch, one pass.
struct BatchEvaluation {
  double cost = 0.0;
  GradientStack gradient;
  int correct = 0;
  Vector squared_residuals;  // (Mean(S) - y)^2 per example, in batch order
};

BatchEvaluation evaluate_batch(const PsbcModel& model, const LayerCoefficients& coeffs, std::span<const Example> batch,
                               BackwardWorkspace& ws);

/// Gradient of cost(): the average of the per-sample gradients.
GradientStack batch_gradient(const PsbcModel& model, std::span<const Example> batch);

/// Central differences of cost() in every stored weight coordinate, dt fixed.
GradientStack finite_difference_gradient(const PsbcModel& model, std::span<const Example> batch, double h);

}  // namespace psbc
