#include "kernels_detail.hpp"

#if defined(QVAND_HAVE_NEON)

#include <arm_neon.h>

// NEON kernels, one complex double per 128-bit register. aarch64 has NEON
// as a baseline feature, so no runtime probe is needed.

namespace qvand::kernels::detail {
namespace {

// y += a*x per element: [yr, yi] += [ar*xr - ai*xi, ar*xi + ai*xr]
void axpy_neon(Complex* y, const Complex* x, Complex a, std::size_t m) {
  double* yd = reinterpret_cast<double*>(y);
  const double* xd = reinterpret_cast<const double*>(x);
  const float64x2_t ar = vdupq_n_f64(a.real());
  const float64x2_t ai = vdupq_n_f64(a.imag());
  const float64x2_t sign = {-1.0, 1.0};
  for (std::size_t i = 0; i < m; ++i) {
    float64x2_t xv = vld1q_f64(xd + 2 * i);
    float64x2_t yv = vld1q_f64(yd + 2 * i);
    float64x2_t sw = vextq_f64(xv, xv, 1);  // [xi, xr]
    yv = vfmaq_f64(yv, xv, ar);
    yv = vfmaq_f64(yv, vmulq_f64(sw, sign), ai);
    vst1q_f64(yd + 2 * i, yv);
  }
}

void hadamard_neon(Complex* y, const Complex* d, const Complex* x, std::size_t m) {
  double* yd = reinterpret_cast<double*>(y);
  const double* dd = reinterpret_cast<const double*>(d);
  const double* xd = reinterpret_cast<const double*>(x);
  const float64x2_t sign = {-1.0, 1.0};
  for (std::size_t i = 0; i < m; ++i) {
    float64x2_t xv = vld1q_f64(xd + 2 * i);
    float64x2_t dv = vld1q_f64(dd + 2 * i);
    float64x2_t dre = vdupq_laneq_f64(dv, 0);
    float64x2_t dim = vdupq_laneq_f64(dv, 1);
    float64x2_t sw = vextq_f64(xv, xv, 1);
    float64x2_t pr = vmulq_f64(xv, dre);
    pr = vfmaq_f64(pr, vmulq_f64(sw, sign), dim);
    vst1q_f64(yd + 2 * i, pr);
  }
}

}  // namespace

const Ops neon_ops{axpy_neon, hadamard_neon};

}  // namespace qvand::kernels::detail

#endif  // QVAND_HAVE_NEON
