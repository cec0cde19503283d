#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "qvand/dense.hpp"
#include "qvand/errors.hpp"
#include "qvand/factor.hpp"

namespace qvand {

// The solver's cost contract: a full solve is exactly 2 Toeplitz matvecs,
// 8 diagonal scalings, 1 application of the inverted pivot diagonal, and
// no substitution sweeps at all.
struct CostCounters {
  long toeplitz_matvecs = 0;
  long diagonal_scalings = 0;
  long diagonal_inversion_applies = 0;
  long back_substitutions = 0;
};

// x = L^{-1} b as five structured applications:
// L^{-1} = P * diag(q^{-i}) * T_at_1/q * diag(q^i) * P^{-1}.
template <class T>
std::vector<T> apply_L_inverse(const QVFactorization<T>& f, const std::vector<T>& b,
                               CostCounters* cc = nullptr) {
  if (static_cast<int>(b.size()) != f.dim())
    throw DimensionMismatch("apply_L_inverse: vector length does not match n");
  auto v = f.poch_inv().apply(b);
  v = f.qpow().apply(v);
  v = f.qexp_recip_q().apply(v);
  v = f.qpow_inv().apply(v);
  v = f.poch().apply(v);
  if (cc) {
    cc->diagonal_scalings += 4;
    cc->toeplitz_matvecs += 1;
  }
  return v;
}

// x = L^{-T} b: the same factors in reverse order, each transposed.
// Diagonals are their own transpose; the Toeplitz factor turns into an
// upper (correlation) matvec.
template <class T>
std::vector<T> apply_LT_inverse(const QVFactorization<T>& f, const std::vector<T>& b,
                                CostCounters* cc = nullptr) {
  if (static_cast<int>(b.size()) != f.dim())
    throw DimensionMismatch("apply_LT_inverse: vector length does not match n");
  auto v = f.poch().apply(b);
  v = f.qpow_inv().apply(v);
  v = f.qexp_recip_q().apply_transpose(v);
  v = f.qpow().apply(v);
  v = f.poch_inv().apply(v);
  if (cc) {
    cc->diagonal_scalings += 4;
    cc->toeplitz_matvecs += 1;
  }
  return v;
}

template <class T>
struct SolveReport {
  std::vector<T> x;
  CostCounters counters;
  // ||V x - b|| / ||b||, floating backend only (exact solutions are exact).
  std::optional<double> residual_norm;
};

// x = L^{-T} D^{-1} L^{-1} b. Matvecs and scalings only; the pivot
// reciprocals come from the factorization's cached diagonal.
template <class T>
SolveReport<T> solve(const QVFactorization<T>& f, const std::vector<T>& b) {
  SolveReport<T> rep;
  auto v = apply_L_inverse(f, b, &rep.counters);
  const auto& dinv = f.pivot_recip();
  if constexpr (scalar_traits<T>::is_exact) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = dinv[i] * v[i];
  } else {
    kernels::hadamard(v.data(), dinv.data(), v.data(), v.size());
  }
  rep.counters.diagonal_inversion_applies += 1;
  rep.x = apply_LT_inverse(f, v, &rep.counters);

  if constexpr (!scalar_traits<T>::is_exact) {
    auto r = vandermonde_apply(f.q(), rep.x);
    double rn = 0.0, bn = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double d = std::abs(r[i] - b[i]);
      rn += d * d;
      const double m = std::abs(b[i]);
      bn += m * m;
    }
    rep.residual_norm = bn > 0.0 ? std::sqrt(rn) / std::sqrt(bn) : std::sqrt(rn);
  }
  return rep;
}

// Reference solver on the exact backend: clear denominators per row, run
// fraction-free (Bareiss) elimination over integers, back-substitute in
// rationals. No entry ever needs gcd canonicalization during elimination.
inline std::vector<Rational> dense_solve_oracle(const DenseMatrix<Rational>& m,
                                                const std::vector<Rational>& b) {
  if (m.rows() != m.cols()) throw DimensionMismatch("oracle needs a square matrix");
  const int n = m.rows();
  if (static_cast<int>(b.size()) != n) throw DimensionMismatch("oracle rhs length mismatch");

  std::vector<std::vector<mpz_class>> a(static_cast<std::size_t>(n),
                                        std::vector<mpz_class>(static_cast<std::size_t>(n)));
  std::vector<mpz_class> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    mpz_class l = 1;
    for (int j = 0; j < n; ++j)
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).den().get_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), b[static_cast<std::size_t>(i)].den().get_mpz_t());
    for (int j = 0; j < n; ++j)
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          m(i, j).num() * mpz_class(l / m(i, j).den());
    const Rational& bi = b[static_cast<std::size_t>(i)];
    w[static_cast<std::size_t>(i)] = bi.num() * mpz_class(l / bi.den());
  }

  mpz_class prev = 1, t;
  for (int k = 0; k < n - 1; ++k) {
    int piv = -1;
    for (int r = k; r < n; ++r) {
      if (a[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) throw SingularMatrix("singular matrix in exact dense solve");
    if (piv != k) {
      std::swap(a[static_cast<std::size_t>(piv)], a[static_cast<std::size_t>(k)]);
      std::swap(w[static_cast<std::size_t>(piv)], w[static_cast<std::size_t>(k)]);
    }
    auto& rowk = a[static_cast<std::size_t>(k)];
    for (int i = k + 1; i < n; ++i) {
      auto& rowi = a[static_cast<std::size_t>(i)];
      const mpz_class aik = rowi[static_cast<std::size_t>(k)];
      for (int j = k + 1; j < n; ++j) {
        t = rowk[static_cast<std::size_t>(k)] * rowi[static_cast<std::size_t>(j)] -
            aik * rowk[static_cast<std::size_t>(j)];
        mpz_divexact(rowi[static_cast<std::size_t>(j)].get_mpz_t(), t.get_mpz_t(),
                     prev.get_mpz_t());
      }
      t = rowk[static_cast<std::size_t>(k)] * w[static_cast<std::size_t>(i)] -
          aik * w[static_cast<std::size_t>(k)];
      mpz_divexact(w[static_cast<std::size_t>(i)].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      rowi[static_cast<std::size_t>(k)] = 0;
    }
    prev = rowk[static_cast<std::size_t>(k)];
  }
  if (a[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(n - 1)] == 0)
    throw SingularMatrix("singular matrix in exact dense solve");

  std::vector<Rational> x(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    // acc = w[i] - sum_{j>i} a[i][j] x[j], assembled as one mpq
    Rational acc(mpq_class(w[static_cast<std::size_t>(i)]));
    for (int j = i + 1; j < n; ++j) {
      Rational term(mpq_class(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
      acc -= term * x[static_cast<std::size_t>(j)];
    }
    Rational diag(mpq_class(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]));
    x[static_cast<std::size_t>(i)] = acc / diag;
  }
  return x;
}

// Reference solver on the floating backend: partial-pivot Gaussian
// elimination; pivots below 1e-14 * max|entry| are treated as singular.
inline std::vector<Complex> dense_solve_oracle(const DenseMatrix<Complex>& m,
                                               const std::vector<Complex>& b) {
  if (m.rows() != m.cols()) throw DimensionMismatch("oracle needs a square matrix");
  const int n = m.rows();
  if (static_cast<int>(b.size()) != n) throw DimensionMismatch("oracle rhs length mismatch");

  DenseMatrix<Complex> a = m;
  std::vector<Complex> w = b;
  double max_entry = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) max_entry = std::max(max_entry, std::abs(a(i, j)));
  const double tiny = 1e-14 * max_entry;

  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int r = k + 1; r < n; ++r) {
      const double mag = std::abs(a(r, k));
      if (mag > best) {
        best = mag;
        piv = r;
      }
    }
    if (best <= tiny) throw SingularMatrix("numerically singular matrix in dense solve");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(w[static_cast<std::size_t>(k)], w[static_cast<std::size_t>(piv)]);
    }
    const Complex pivot = a(k, k);
    for (int i = k + 1; i < n; ++i) {
      const Complex mult = a(i, k) / pivot;
      if (mult == Complex(0.0, 0.0)) continue;
      // row update via the kernel axpy on the trailing row segment
      kernels::axpy(a.row(i) + k + 1, a.row(k) + k + 1, -mult,
                    static_cast<std::size_t>(n - k - 1));
      a(i, k) = Complex(0.0, 0.0);
      w[static_cast<std::size_t>(i)] -= mult * w[static_cast<std::size_t>(k)];
    }
  }

  std::vector<Complex> x(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    Complex acc = w[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) acc -= a(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] = acc / a(i, i);
  }
  return x;
}

}  // namespace qvand
