#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "psbc/core.hpp"
#include "psbc/diffusion.hpp"

namespace psbc {

/// One classifier: hyperparameters, bases, trainable weights and the
/// diffusion operator built from (n_u, bc, eps).
struct PsbcModel {
  Hyperparameters hp;
  BasisMatrix basis_u;
  BasisMatrix basis_sub;
  WeightStack weights;
  DiffusionOperator diffusion;

  /// Canonical B_u.
  static PsbcModel create(const Hyperparameters& hp, WeightStack weights);
  static PsbcModel create(const Hyperparameters& hp, BasisMatrix basis_u, WeightStack weights);

  /// Throws ConfigError/DimensionError if any component disagrees with hp.
  void validate() const;
};

/// Phase-lift matrix for a subordination mode: all-ones column or canonical (n_u, n_pt).
BasisMatrix subordinate_basis(const Hyperparameters& hp);

/// alpha = B_u W_u and beta = W_p, one entry per stored layer group.
struct LayerCoefficients {
  std::vector<Vector> alpha;
  std::vector<Vector> beta;
};

LayerCoefficients layer_coefficients(const PsbcModel& model);

/// U^[0..N_t] and P^[0..N_t].
struct Trajectory {
  std::vector<Vector> u_layers;
  std::vector<Vector> p_layers;
};

struct Example {
  std::span<const double> x;
  int y = 0;
};

/// Throws DomainError unless every entry lies in [0, 1].
void check_unit_box(std::span<const double> x);

Trajectory forward(const PsbcModel& model, std::span<const double> x);
/// Allocation-reusing form; `traj` is resized as needed.
void forward(const PsbcModel& model, const LayerCoefficients& coeffs, std::span<const double> x, Trajectory& traj);

Vector phase_lift(std::span<const double> p, const BasisMatrix& basis_sub);
Vector flip_map(std::span<const double> u, std::span<const double> p_tilde);
/// Mean of the flip map.
double flip_mean(std::span<const double> u, std::span<const double> p_tilde);

/// Mean(S) at the final layer of `traj`.
double score(const PsbcModel& model, const Trajectory& traj);
double score(const PsbcModel& model, std::span<const double> x);

/// 1 iff |m - 1| <= |m|.
int label_from_score(double m);
/// 1 iff ||F - 1||^2 <= ||F||^2.
int label_from_vector(std::span<const double> f);

int predict(const PsbcModel& model, std::span<const double> x);

/// (1 / (2 N)) * sum (Mean(S_i) - y_i)^2, summed in batch order.
double cost(const PsbcModel& model, std::span<const Example> batch);

/// conv({0, 1} united with a set of coefficient values).
struct CoefficientRange {
  double lo = 0.0;
  double hi = 1.0;
  double diameter() const { return hi - lo; }
};

CoefficientRange coefficient_range(std::span<const Vector> groups);
/// Range of B W over all groups. For block bases this reads W directly.
CoefficientRange coefficient_range(const BasisMatrix& basis, std::span<const Vector> groups);

struct InvariantBox {
  double l_alpha = 0.0, r_alpha = 1.0, m_alpha = 1.0;
  double l_beta = 0.0, r_beta = 1.0, m_beta = 1.0;
};

InvariantBox invariant_box(std::span<const Vector> alpha, std::span<const Vector> beta);
InvariantBox invariant_box(const LayerCoefficients& coeffs);

/// Every U entry in [l - dt_u m - 1e-12, r + dt_u m + 1e-12], and likewise for P.
bool check_invariant(const Trajectory& traj, const InvariantBox& box, double dt_u, double dt_p);

/// min(dt_star, 1 / (sqrt(3) diam^2)).
double irec_step(double diameter, double dt_star);

struct IrecResult {
  double dt_u = 0.0;
  double dt_p = 0.0;
  double diam_alpha = 1.0;
  double diam_beta = 1.0;
};

IrecResult irec_dt(const BasisMatrix& basis_u, const WeightStack& weights, double dt_star_u, double dt_star_p);
/// Uses the model's own ceilings.
IrecResult irec_dt(const PsbcModel& model);

// Standalone Allen-Cahn runs with a fixed coefficient profile.

struct SimulationSetup {
  int n_u = 20;
  int n_t = 300;
  double dt = 0.1;
  double eps = 0.3;
  BoundaryCondition bc = BoundaryCondition::Neumann;
};

using AlphaProfile = std::function<double(double)>;

/// "const:<v>", "step" (-2 left of 0.5, +2 from 0.5 on) or "parabola" (4 - 8 (x + 0.2)^2).
AlphaProfile parse_alpha_profile(std::string_view profile);
/// Samples at cell centres (m + 1/2) / n, m = 0..n-1.
Vector sample_profile(const AlphaProfile& profile, int n);
/// 1/2 - 1/2 sin(pi (2x - 1)) at cell centres.
Vector figure_initial_condition(int n);

Trajectory allen_cahn_simulate(std::span<const double> alpha, std::span<const double> u0, const SimulationSetup& setup);

/// One row per layer of U, comma separated, 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace psbc
