#include "kernels_detail.hpp"

#if defined(QVAND_HAVE_AVX2)

#include <immintrin.h>

// AVX2+FMA kernels for interleaved complex doubles, two complex values per
// 256-bit register. Complex multiply uses the fmaddsub idiom:
//   even lane: xr*br - xi*bi   (real part)
//   odd lane:  xi*br + xr*bi   (imag part)
// This file is compiled with -mavx2 -mfma; callers must check
// avx2_supported() before routing here.

namespace qvand::kernels::detail {
namespace {

void axpy_avx2(Complex* y, const Complex* x, Complex a, std::size_t m) {
  double* yd = reinterpret_cast<double*>(y);
  const double* xd = reinterpret_cast<const double*>(x);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
    __m256d x1 = _mm256_loadu_pd(xd + 2 * i + 4);
    __m256d y0 = _mm256_loadu_pd(yd + 2 * i);
    __m256d y1 = _mm256_loadu_pd(yd + 2 * i + 4);
    __m256d s0 = _mm256_permute_pd(x0, 0x5);  // swap re/im pairs
    __m256d s1 = _mm256_permute_pd(x1, 0x5);
    __m256d p0 = _mm256_fmaddsub_pd(x0, ar, _mm256_mul_pd(s0, ai));
    __m256d p1 = _mm256_fmaddsub_pd(x1, ar, _mm256_mul_pd(s1, ai));
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(y0, p0));
    _mm256_storeu_pd(yd + 2 * i + 4, _mm256_add_pd(y1, p1));
  }
  for (; i + 2 <= m; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    __m256d sw = _mm256_permute_pd(xv, 0x5);
    __m256d pr = _mm256_fmaddsub_pd(xv, ar, _mm256_mul_pd(sw, ai));
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, pr));
  }
  for (; i < m; ++i) y[i] += a * x[i];
}

void hadamard_avx2(Complex* y, const Complex* d, const Complex* x, std::size_t m) {
  double* yd = reinterpret_cast<double*>(y);
  const double* dd = reinterpret_cast<const double*>(d);
  const double* xd = reinterpret_cast<const double*>(x);
  std::size_t i = 0;
  for (; i + 2 <= m; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d dv = _mm256_loadu_pd(dd + 2 * i);
    __m256d dre = _mm256_movedup_pd(dv);        // [dr, dr, ...]
    __m256d dim = _mm256_permute_pd(dv, 0xF);   // [di, di, ...]
    __m256d sw = _mm256_permute_pd(xv, 0x5);
    __m256d pr = _mm256_fmaddsub_pd(xv, dre, _mm256_mul_pd(sw, dim));
    _mm256_storeu_pd(yd + 2 * i, pr);
  }
  for (; i < m; ++i) y[i] = d[i] * x[i];
}

}  // namespace

const Ops avx2_ops{axpy_avx2, hadamard_avx2};

bool avx2_supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace qvand::kernels::detail

#endif  // QVAND_HAVE_AVX2
