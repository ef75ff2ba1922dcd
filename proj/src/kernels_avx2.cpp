#include <immintrin.h>

#include "kernels_internal.hpp"

namespace psbc::kernels {
namespace {

// Each expression mirrors the scalar reference in core.hpp term by term.

inline __m256d reaction_v(__m256d u, __m256d w) {
  const __m256d one = _mm256_set1_pd(1.0);
  return _mm256_mul_pd(_mm256_mul_pd(u, _mm256_sub_pd(one, u)), _mm256_sub_pd(u, w));
}

inline __m256d reaction_du_v(__m256d u, __m256d w) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d a = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(-3.0), u), u);
  const __m256d b = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), _mm256_add_pd(one, w)), u);
  return _mm256_sub_pd(_mm256_add_pd(a, b), w);
}

inline __m256d reaction_dw_v(__m256d u) {
  const __m256d one = _mm256_set1_pd(1.0);
  return _mm256_xor_pd(_mm256_mul_pd(u, _mm256_sub_pd(one, u)), _mm256_set1_pd(-0.0));
}

inline __m256d flip_v(__m256d u, __m256d p) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  return _mm256_add_pd(u, _mm256_mul_pd(p, _mm256_sub_pd(one, _mm256_mul_pd(two, u))));
}

inline double lane_total(__m256d acc) {
  alignas(32) double s[4];
  _mm256_store_pd(s, acc);
  return (s[0] + s[1]) + (s[2] + s[3]);
}

void reaction_step(const double* u, const double* w, double dt, double* out, std::size_t n) {
  const __m256d vdt = _mm256_set1_pd(dt);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vu = _mm256_loadu_pd(u + i);
    const __m256d vw = _mm256_loadu_pd(w + i);
    _mm256_storeu_pd(out + i, _mm256_add_pd(vu, _mm256_mul_pd(vdt, reaction_v(vu, vw))));
  }
  for (; i < n; ++i) {
    const double r = (u[i] * (1.0 - u[i])) * (u[i] - w[i]);
    out[i] = u[i] + dt * r;
  }
}

void reaction_adjoint(const double* u, const double* w, const double* mu, double dt, double* lambda, double* g_w,
                      std::size_t n) {
  const __m256d vdt = _mm256_set1_pd(dt);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vu = _mm256_loadu_pd(u + i);
    const __m256d vw = _mm256_loadu_pd(w + i);
    const __m256d vm = _mm256_loadu_pd(mu + i);
    _mm256_storeu_pd(lambda + i, _mm256_mul_pd(vm, _mm256_add_pd(one, _mm256_mul_pd(vdt, reaction_du_v(vu, vw)))));
    _mm256_storeu_pd(g_w + i, _mm256_mul_pd(vm, _mm256_mul_pd(vdt, reaction_dw_v(vu))));
  }
  for (; i < n; ++i) {
    const double fu = ((-3.0 * u[i]) * u[i] + (2.0 * (1.0 + w[i])) * u[i]) - w[i];
    const double fw = -(u[i] * (1.0 - u[i]));
    lambda[i] = mu[i] * (1.0 + dt * fu);
    g_w[i] = mu[i] * (dt * fw);
  }
}

double flip_sum(const double* u, const double* p, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, flip_v(_mm256_loadu_pd(u + i), _mm256_loadu_pd(p + i)));
  double total = lane_total(acc);
  for (; i < n; ++i) total += u[i] + p[i] * (1.0 - 2.0 * u[i]);
  return total;
}

void flip_adjoint(const double* u, const double* p, double g, double* du, double* dp, std::size_t n) {
  const __m256d vg = _mm256_set1_pd(g);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vu = _mm256_loadu_pd(u + i);
    const __m256d vp = _mm256_loadu_pd(p + i);
    _mm256_storeu_pd(du + i, _mm256_mul_pd(vg, _mm256_sub_pd(one, _mm256_mul_pd(two, vp))));
    _mm256_storeu_pd(dp + i, _mm256_mul_pd(vg, _mm256_sub_pd(one, _mm256_mul_pd(two, vu))));
  }
  for (; i < n; ++i) {
    du[i] = g * (1.0 - 2.0 * p[i]);
    dp[i] = g * (1.0 - 2.0 * u[i]);
  }
}

double sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double total = lane_total(acc);
  for (; i < n; ++i) total += x[i];
  return total;
}

constexpr KernelTable kAvx2{"avx2", reaction_step, reaction_adjoint, flip_sum, flip_adjoint, sum};

}  // namespace

const KernelTable& avx2_table_impl() { return kAvx2; }

}  // namespace psbc::kernels
