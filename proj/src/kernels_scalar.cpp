#include "kernels_detail.hpp"

// Reference kernels: straight loops over std::complex. Everything else is
// equivalence-tested against these.

namespace qvand::kernels::detail {
namespace {

void axpy_scalar(Complex* y, const Complex* x, Complex a, std::size_t m) {
  for (std::size_t i = 0; i < m; ++i) y[i] += a * x[i];
}

void hadamard_scalar(Complex* y, const Complex* d, const Complex* x, std::size_t m) {
  for (std::size_t i = 0; i < m; ++i) y[i] = d[i] * x[i];
}

}  // namespace

const Ops scalar_ops{axpy_scalar, hadamard_scalar};

}  // namespace qvand::kernels::detail
