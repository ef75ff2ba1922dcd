#pragma once

#include "psbc/kernels.hpp"

namespace psbc::kernels {

#if defined(PSBC_HAVE_AVX2)
const KernelTable& avx2_table_impl();
#endif

}  // namespace psbc::kernels
