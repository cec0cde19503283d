#include "qvand/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <cstring>

#include "kernels_detail.hpp"
#include "qvand/errors.hpp"

namespace qvand::kernels {

namespace {

using detail::Ops;

std::atomic<const Ops*> g_ops{nullptr};
std::atomic<Isa> g_isa{Isa::scalar};

const Ops* ops_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &detail::scalar_ops;
#if defined(QVAND_HAVE_AVX2)
    case Isa::avx2:
      return detail::avx2_supported() ? &detail::avx2_ops : nullptr;
#endif
#if defined(QVAND_HAVE_NEON)
    case Isa::neon:
      return &detail::neon_ops;
#endif
    default:
      return nullptr;
  }
}

const Ops& active_ops() {
  const Ops* p = g_ops.load(std::memory_order_acquire);
  if (!p) {
    select_best();
    p = g_ops.load(std::memory_order_acquire);
  }
  return *p;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "?";
}

std::vector<Isa> available() {
  std::vector<Isa> v;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon})
    if (ops_for(isa)) v.push_back(isa);
  return v;
}

Isa active() {
  active_ops();
  return g_isa.load(std::memory_order_acquire);
}

void select(Isa isa) {
  const Ops* p = ops_for(isa);
  if (!p)
    throw Error(std::string("kernel variant not available on this machine: ") + isa_name(isa));
  g_isa.store(isa, std::memory_order_release);
  g_ops.store(p, std::memory_order_release);
}

void select_best() {
  const char* env = std::getenv("QVAND_KERNEL");
  if (env && *env && std::strcmp(env, "auto") != 0) {
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (std::strcmp(env, isa_name(isa)) == 0) {
        select(isa);
        return;
      }
    }
    throw Error(std::string("QVAND_KERNEL: unknown kernel variant '") + env + "'");
  }
  auto have = available();
  select(have.back());  // enum order is scalar < simd variants
}

void axpy(Complex* y, const Complex* x, Complex a, std::size_t m) {
  active_ops().axpy(y, x, a, m);
}

void hadamard(Complex* y, const Complex* d, const Complex* x, std::size_t m) {
  active_ops().hadamard(y, d, x, m);
}

void toeplitz_lower_matvec(Complex* y, const Complex* col, const Complex* x, std::size_t n) {
  const Ops& o = active_ops();
  std::fill(y, y + n, Complex{});
  // column sweep: x[j] scatters col into y[j..n)
  for (std::size_t j = 0; j < n; ++j) o.axpy(y + j, col, x[j], n - j);
}

void toeplitz_upper_matvec(Complex* y, const Complex* col, const Complex* x, std::size_t n) {
  const Ops& o = active_ops();
  std::fill(y, y + n, Complex{});
  // diagonal sweep: col[k] pairs y[i] with x[i+k]
  for (std::size_t k = 0; k < n; ++k) o.axpy(y, x + k, col[k], n - k);
}

}  // namespace qvand::kernels
