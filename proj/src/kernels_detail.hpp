#pragma once

#include <complex>
#include <cstddef>

// Internal kernel plumbing: one Ops table per compiled variant. The
// dispatcher in kernels.cpp picks a table once and routes the public
// entry points through it.

namespace qvand::kernels::detail {

using Complex = std::complex<double>;

struct Ops {
  void (*axpy)(Complex* y, const Complex* x, Complex a, std::size_t m);
  void (*hadamard)(Complex* y, const Complex* d, const Complex* x, std::size_t m);
};

extern const Ops scalar_ops;

#if defined(QVAND_HAVE_AVX2)
extern const Ops avx2_ops;
bool avx2_supported();
#endif

#if defined(QVAND_HAVE_NEON)
extern const Ops neon_ops;
#endif

}  // namespace qvand::kernels::detail
