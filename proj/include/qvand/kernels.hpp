#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qvand::kernels {

using Complex = std::complex<double>;

// Kernel variants for the complex-double backend. "scalar" is the portable
// reference; avx2/neon are compiled per-architecture and picked at runtime.
enum class Isa { scalar, avx2, neon };

const char* isa_name(Isa isa);

// Variants compiled in AND usable on this CPU; always contains Isa::scalar.
std::vector<Isa> available();

// Currently selected variant (runs selection on first use).
Isa active();

// Force a variant; throws qvand::Error if it is not available.
void select(Isa isa);

// Pick the best available variant. The QVAND_KERNEL environment variable
// (scalar|avx2|neon|auto) overrides the choice; unknown values throw.
void select_best();

// y[0..m) += a * x[0..m)
void axpy(Complex* y, const Complex* x, Complex a, std::size_t m);

// y[i] = d[i] * x[i] for i in [0, m); y == x aliasing is allowed.
void hadamard(Complex* y, const Complex* d, const Complex* x, std::size_t m);

// y = T x where T is lower-triangular Toeplitz with first column col:
// y[i] = sum_{j<=i} col[i-j] x[j]. y must not alias x or col.
void toeplitz_lower_matvec(Complex* y, const Complex* col, const Complex* x, std::size_t n);

// y = T^T x (unit upper / correlation form): y[i] = sum_{j>=i} col[j-i] x[j].
void toeplitz_upper_matvec(Complex* y, const Complex* col, const Complex* x, std::size_t n);

}  // namespace qvand::kernels
