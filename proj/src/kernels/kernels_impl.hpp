#pragma once

#include "rcd/kernels.hpp"

namespace rcd::kernels {

namespace scalar {
const Table& table();
}

#if defined(RCD_HAVE_X86_KERNELS)
namespace avx2 {
const Table& table();
}
namespace avx512 {
const Table& table();
}
#endif

}  // namespace rcd::kernels
