#pragma once

#include <cstddef>
#include <string_view>

namespace psbc::kernels {

// Elementwise hot loops of the forward and backward passes. Every variant
// must produce results bitwise identical to the scalar reference: the SIMD
// code uses the same operation order and no fused multiply-add, and
// reductions use a fixed four-lane pairing (see `sum`).
struct KernelTable {
  std::string_view name;

  // out[i] = u[i] + dt * f(u[i], w[i])
  void (*reaction_step)(const double* u, const double* w, double dt, double* out, std::size_t n);

  // lambda[i] = mu[i] * (1 + dt * f_u(u[i], w[i]))
  // g_w[i]    = mu[i] * (dt * f_w(u[i], w[i]))
  void (*reaction_adjoint)(const double* u, const double* w, const double* mu, double dt, double* lambda,
                           double* g_w, std::size_t n);

  // Sum over i of u[i] + p[i] * (1 - 2 u[i]).
  double (*flip_sum)(const double* u, const double* p, std::size_t n);

  // du[i] = g * (1 - 2 p[i]), dp[i] = g * (1 - 2 u[i])
  void (*flip_adjoint)(const double* u, const double* p, double g, double* du, double* dp, std::size_t n);

  // Lanes i mod 4 are accumulated separately, combined as (s0 + s1) + (s2 + s3),
  // then the n mod 4 tail elements are added in order.
  double (*sum)(const double* x, std::size_t n);
};

enum class Variant { Scalar, Avx2 };

const KernelTable& scalar_table();
/// Null when the AVX2 variant was not compiled in.
const KernelTable* avx2_table();

/// True when the variant is compiled in and the CPU supports it.
bool available(Variant v);

/// The table used by the library. Chosen once at startup: AVX2 when
/// available unless PSBC_FORCE_SCALAR is set in the environment.
const KernelTable& active();

/// Overrides the runtime choice. Returns false (and changes nothing) when the
/// variant is unavailable.
bool set_active(Variant v);

}  // namespace psbc::kernels
