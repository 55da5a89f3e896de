#pragma once

#include "hardy/simd.hpp"

namespace hardy::simd::detail {

extern const KernelTable scalar_table;

#if defined(__x86_64__) || defined(_M_X64)
#define HARDY_HAVE_AVX2_TABLE 1
extern const KernelTable avx2_table;
#else
#define HARDY_HAVE_AVX2_TABLE 0
#endif

}  // namespace hardy::simd::detail
