#include "kernels_internal.hpp"

#include "psbc/core.hpp"

namespace psbc::kernels {
namespace {

void reaction_step(const double* u, const double* w, double dt, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = u[i] + dt * reaction(u[i], w[i]);
}

void reaction_adjoint(const double* u, const double* w, const double* mu, double dt, double* lambda, double* g_w,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double m = mu[i];
    lambda[i] = m * (1.0 + dt * reaction_du(u[i], w[i]));
    g_w[i] = m * (dt * reaction_dw(u[i], w[i]));
  }
}

double flip_sum(const double* u, const double* p, std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4)
    for (std::size_t l = 0; l < 4; ++l) s[l] += u[i + l] + p[i + l] * (1.0 - 2.0 * u[i + l]);
  double total = (s[0] + s[1]) + (s[2] + s[3]);
  for (std::size_t i = body; i < n; ++i) total += u[i] + p[i] * (1.0 - 2.0 * u[i]);
  return total;
}

void flip_adjoint(const double* u, const double* p, double g, double* du, double* dp, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    du[i] = g * (1.0 - 2.0 * p[i]);
    dp[i] = g * (1.0 - 2.0 * u[i]);
  }
}

double sum(const double* x, std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4)
    for (std::size_t l = 0; l < 4; ++l) s[l] += x[i + l];
  double total = (s[0] + s[1]) + (s[2] + s[3]);
  for (std::size_t i = body; i < n; ++i) total += x[i];
  return total;
}

constexpr KernelTable kScalar{"scalar", reaction_step, reaction_adjoint, flip_sum, flip_adjoint, sum};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace psbc::kernels
