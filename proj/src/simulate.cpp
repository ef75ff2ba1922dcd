#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "psbc/error.hpp"
#include "psbc/propagation.hpp"

namespace psbc {

AlphaProfile parse_alpha_profile(std::string_view profile) {
  if (profile == "step") return [](double x) { return x < 0.5 ? -2.0 : 2.0; };
  if (profile == "parabola") return [](double x) { return 4.0 - 8.0 * (x + 0.2) * (x + 0.2); };
  if (profile.starts_with("const:")) {
    const std::string text(profile.substr(6));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(v))
      throw ConfigError("bad constant in alpha profile '" + std::string(profile) + "'");
    return [v](double) { return v; };
  }
  throw ConfigError("unknown alpha profile '" + std::string(profile) + "' (expected const:<v>, step or parabola)");
}

Vector sample_profile(const AlphaProfile& profile, int n) {
  if (n < 1) throw ConfigError("profile needs at least one grid point");
  Vector out(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) out[static_cast<std::size_t>(m)] = profile((m + 0.5) / n);
  return out;
}

Vector figure_initial_condition(int n) {
  return sample_profile([](double x) { return 0.5 - 0.5 * std::sin(std::numbers::pi * (2.0 * x - 1.0)); }, n);
}

Trajectory allen_cahn_simulate(std::span<const double> alpha, std::span<const double> u0, const SimulationSetup& setup) {
  if (alpha.size() != static_cast<std::size_t>(setup.n_u) || u0.size() != alpha.size())
    throw DimensionError("simulate: alpha and u0 must both have n_u entries");
  Hyperparameters hp;
  hp.n_t = setup.n_t;
  hp.n_u = setup.n_u;
  hp.n_pt = setup.n_u;
  hp.eps = setup.eps;
  hp.dt_u = hp.dt_p = hp.dt_star_u = hp.dt_star_p = setup.dt;
  hp.shared_k = setup.n_t;
  hp.bc = setup.bc;
  hp.subordination = Subordination::NonSubordinate;
  hp.validate();
  WeightStack w = WeightStack::filled(hp, 0.5);
  w.w_u[0].assign(alpha.begin(), alpha.end());
  const PsbcModel model = PsbcModel::create(hp, BasisMatrix::identity(setup.n_u), std::move(w));
  return forward(model, u0);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  char buf[32];
  for (const auto& layer : traj.u_layers) {
    for (std::size_t i = 0; i < layer.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", layer[i]);
      if (i) os << ',';
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace psbc
