#pragma once

#include "deepselect/kernels.hpp"

namespace deepselect::kernels::detail {

extern const KernelTable kScalarTable;
#if defined(DEEPSELECT_HAVE_AVX2_KERNELS)
extern const KernelTable kAvx2Table;
#endif

}  // namespace deepselect::kernels::detail
