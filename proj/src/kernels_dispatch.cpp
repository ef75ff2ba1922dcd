#include <atomic>
#include <cstdlib>

#include "kernels_internal.hpp"

namespace psbc::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(PSBC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* initial_choice() {
  const char* force = std::getenv("PSBC_FORCE_SCALAR");
  const bool forced = force != nullptr && *force != '\0' && *force != '0';
  if (!forced && available(Variant::Avx2)) return avx2_table();
  return &scalar_table();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{initial_choice()};
  return current;
}

}  // namespace

const KernelTable* avx2_table() {
#if defined(PSBC_HAVE_AVX2)
  return &avx2_table_impl();
#else
  return nullptr;
#endif
}

bool available(Variant v) {
  if (v == Variant::Scalar) return true;
  static const bool avx2 = avx2_table() != nullptr && cpu_has_avx2();
  return avx2;
}

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

bool set_active(Variant v) {
  if (!available(v)) return false;
  slot().store(v == Variant::Scalar ? &scalar_table() : avx2_table(), std::memory_order_release);
  return true;
}

}  // namespace psbc::kernels
