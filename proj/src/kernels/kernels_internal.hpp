#pragma once

#include "rfsense/kernels.hpp"

namespace rfsense::kernels::detail {

extern const KernelTable kScalarTable;
#if defined(RFSENSE_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

}  // namespace rfsense::kernels::detail
