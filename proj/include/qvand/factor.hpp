#pragma once

#include <cmath>
#include <mutex>
#include <utility>
#include <vector>

#include "qvand/dense.hpp"
#include "qvand/errors.hpp"
#include "qvand/qpoch.hpp"
#include "qvand/toeplitz.hpp"

namespace qvand {

// Dense verification (residual check, factor dumps with --check) refuses to
// materialize n x n matrices above this cap unless the caller raises it.
inline constexpr int kDefaultDenseCap = 256;

// V[i][j] = q^{i*j}, with the powers read from one running product table.
template <class T>
DenseMatrix<T> build_vandermonde(const T& q, int n) {
  if (n < 1) throw DimensionMismatch("matrix dimension must be >= 1");
  if (scalar_traits<T>::is_zero(q)) throw ZeroQ();
  const std::size_t top = static_cast<std::size_t>(n - 1) * static_cast<std::size_t>(n - 1);
  std::vector<T> pw;
  pw.reserve(top + 1);
  pw.push_back(scalar_traits<T>::one());
  for (std::size_t k = 1; k <= top; ++k) pw.push_back(pw.back() * q);
  DenseMatrix<T> v(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      v(i, j) = pw[static_cast<std::size_t>(i) * static_cast<std::size_t>(j)];
  return v;
}

// y[i] = sum_j q^{ij} x[j] without forming the matrix: row i is the
// polynomial with coefficients x evaluated at q^i (Horner), O(n^2) total.
template <class T>
std::vector<T> vandermonde_apply(const T& q, const std::vector<T>& x) {
  if (x.empty()) throw DimensionMismatch("empty vector");
  if (scalar_traits<T>::is_zero(q)) throw ZeroQ();
  const std::size_t n = x.size();
  std::vector<T> y(n, scalar_traits<T>::zero());
  T point = scalar_traits<T>::one();  // q^i
  for (std::size_t i = 0; i < n; ++i) {
    T acc = x[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) acc = acc * point + x[j];
    y[i] = acc;
    point = point * q;
  }
  return y;
}

// The factorization V = L D L^T held in structured form. L itself is never
// stored: L = P T P^{-1} with P the diagonal of products (q;q)_i and T the
// unit lower Toeplitz q-exponential, so every part is O(n).
template <class T>
class QVFactorization {
 public:
  QVFactorization(QPochTable<T> tbl, LowerToeplitz<T> qexp, LowerToeplitz<T> qexp_recip,
                  DiagonalOp<T> poch, DiagonalOp<T> poch_inv, DiagonalOp<T> qpow,
                  DiagonalOp<T> qpow_inv, DiagonalOp<T> pivots)
      : tbl_(std::move(tbl)),
        qexp_(std::move(qexp)),
        qexp_recip_(std::move(qexp_recip)),
        poch_(std::move(poch)),
        poch_inv_(std::move(poch_inv)),
        qpow_(std::move(qpow)),
        qpow_inv_(std::move(qpow_inv)),
        pivots_(std::move(pivots)) {}

  int dim() const { return tbl_.size(); }
  const T& q() const { return tbl_.q(); }
  const QPochTable<T>& table() const { return tbl_; }

  // T: unit lower Toeplitz, col[k] = 1/(q;q)_k
  const LowerToeplitz<T>& qexp() const { return qexp_; }
  // the same operator at 1/q; the solver applies it instead of inverting T
  const LowerToeplitz<T>& qexp_recip_q() const { return qexp_recip_; }
  // P = diag((q;q)_i) and P^{-1}
  const DiagonalOp<T>& poch() const { return poch_; }
  const DiagonalOp<T>& poch_inv() const { return poch_inv_; }
  // diag(q^i) and diag(q^{-i}), the scalings that conjugate T into T^{-1}
  const DiagonalOp<T>& qpow() const { return qpow_; }
  const DiagonalOp<T>& qpow_inv() const { return qpow_inv_; }
  // D: pivot diagonal, d[i] = (-1)^i q^{i(i-1)/2} (q;q)_i
  const DiagonalOp<T>& pivots() const { return pivots_; }

  // 1/d[i], computed once on first use.
  const std::vector<T>& pivot_recip() const {
    std::call_once(pivot_recip_once_, [this] {
      std::vector<T> inv;
      inv.reserve(pivots_.diagonal().size());
      for (std::size_t i = 0; i < pivots_.diagonal().size(); ++i) {
        const T& d = pivots_.diagonal()[i];
        if (scalar_traits<T>::is_zero(d)) throw SingularPivot(static_cast<int>(i));
        inv.push_back(scalar_traits<T>::inverse(d));
      }
      pivot_recip_ = std::move(inv);
    });
    return pivot_recip_;
  }

  // L[i][j] is the Gaussian binomial [i choose j]_q.
  T l_entry(int i, int j) const {
    if (i < 0 || i >= dim() || j < 0 || j >= dim()) throw IndexError("l_entry out of range");
    if (j > i) return scalar_traits<T>::zero();
    return gaussian_binomial(i, j, tbl_);
  }

  T d_entry(int i) const {
    if (i < 0 || i >= dim()) throw IndexError("d_entry out of range");
    return pivots_.diagonal()[static_cast<std::size_t>(i)];
  }

  // L densified through its factored form: L[i][j] = p_i * t[i-j] / p_j.
  DenseMatrix<T> dense_L() const {
    const int n = dim();
    DenseMatrix<T> m(n, n);
    const auto& p = poch_.diagonal();
    const auto& pinv = poch_inv_.diagonal();
    const auto& t = qexp_.first_column();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j)
        m(i, j) = p[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(i - j)] *
                  pinv[static_cast<std::size_t>(j)];
    return m;
  }

 private:
  QPochTable<T> tbl_;
  LowerToeplitz<T> qexp_, qexp_recip_;
  DiagonalOp<T> poch_, poch_inv_, qpow_, qpow_inv_, pivots_;
  mutable std::once_flag pivot_recip_once_;
  mutable std::vector<T> pivot_recip_;
};

// Assembles the structured factorization in O(n) time and memory.
// Throws ZeroQ / DegenerateQ via the table guard.
template <class T>
QVFactorization<T> factorize(const T& q, int n, double eps = default_guard_eps<T>()) {
  QPochTable<T> tbl(q, n, eps);
  auto qexp = qexp_toeplitz(tbl);
  auto qexp_recip = qexp_toeplitz_recip_q(tbl);
  auto poch = poch_diagonal(tbl);
  auto poch_inv = poch_diagonal_inverse(tbl);
  auto qpow = power_diagonal(q, 1, n);
  auto qpow_inv = power_diagonal(q, -1, n);

  // d[i] = (-1)^i q^{i(i-1)/2} (q;q)_i; the triangular power grows by
  // multiplying in q^{i-1} at step i.
  std::vector<T> d;
  d.reserve(static_cast<std::size_t>(n));
  T tri = scalar_traits<T>::one();
  for (int i = 0; i < n; ++i) {
    if (i > 0) tri = tri * tbl.q_power(i - 1);
    T val = tri * tbl.qq(i);
    d.push_back(i % 2 ? -val : val);
  }

  return QVFactorization<T>(std::move(tbl), std::move(qexp), std::move(qexp_recip),
                            std::move(poch), std::move(poch_inv), std::move(qpow),
                            std::move(qpow_inv), DiagonalOp<T>(std::move(d)));
}

struct ResidualReport {
  bool exact;           // true when computed on the exact backend
  bool exact_zero;      // exact backend: V - L D L^T is identically zero
  double max_abs;       // largest residual entry magnitude (double estimate)
  double relative_fro;  // float backend: ||V - L D L^T||_F / ||V||_F
};

namespace detail {

// Exact residual, integerized: rows of L and the pivot diagonal are scaled
// by denominator LCMs so the triple product runs over mpz without per-op
// canonicalization. Entry (i,j) and (j,i) agree by symmetry of both sides,
// so only the lower triangle is checked.
inline ResidualReport residual_exact(const QVFactorization<Rational>& f) {
  const int n = f.dim();
  const auto L = f.dense_L();
  const auto& dpiv = f.pivots().diagonal();

  std::vector<std::vector<mpz_class>> ln(static_cast<std::size_t>(n));
  std::vector<mpz_class> lam(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    mpz_class l = 1;
    for (int j = 0; j <= i; ++j)
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), L(i, j).den().get_mpz_t());
    lam[static_cast<std::size_t>(i)] = l;
    auto& row = ln[static_cast<std::size_t>(i)];
    row.resize(static_cast<std::size_t>(i) + 1);
    for (int j = 0; j <= i; ++j)
      row[static_cast<std::size_t>(j)] = L(i, j).num() * mpz_class(l / L(i, j).den());
  }
  mpz_class dl = 1;
  for (int i = 0; i < n; ++i)
    mpz_lcm(dl.get_mpz_t(), dl.get_mpz_t(), dpiv[static_cast<std::size_t>(i)].den().get_mpz_t());
  std::vector<mpz_class> e(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Rational& d = dpiv[static_cast<std::size_t>(i)];
    e[static_cast<std::size_t>(i)] = d.num() * mpz_class(dl / d.den());
  }

  const Rational q = f.q();
  const std::size_t top = static_cast<std::size_t>(n - 1) * static_cast<std::size_t>(n - 1);
  std::vector<Rational> pw;
  pw.reserve(top + 1);
  pw.push_back(Rational(1));
  for (std::size_t k = 1; k <= top; ++k) pw.push_back(pw.back() * q);

  bool zero = true;
  double max_abs = 0.0;
  mpz_class acc, term, rhs;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      acc = 0;
      for (int k = 0; k <= j; ++k) {
        term = ln[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
               e[static_cast<std::size_t>(k)];
        term *= ln[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
        acc += term;
      }
      const Rational& v = pw[static_cast<std::size_t>(i) * static_cast<std::size_t>(j)];
      rhs = lam[static_cast<std::size_t>(i)] * lam[static_cast<std::size_t>(j)];
      rhs *= dl;
      rhs *= v.num();
      bool match = false;
      if (mpz_divisible_p(rhs.get_mpz_t(), v.den().get_mpz_t())) {
        mpz_divexact(rhs.get_mpz_t(), rhs.get_mpz_t(), v.den().get_mpz_t());
        match = (acc == rhs);
      }
      if (!match) {
        zero = false;
        // slow path, only on a failed entry: exact difference as mpq
        mpq_class got(acc, lam[static_cast<std::size_t>(i)] * lam[static_cast<std::size_t>(j)] * dl);
        Rational diff = Rational(std::move(got)) - v;  // ctor canonicalizes
        max_abs = std::max(max_abs, scalar_traits<Rational>::abs_estimate(diff));
      }
    }
  }
  return ResidualReport{true, zero, zero ? 0.0 : max_abs, 0.0};
}

inline ResidualReport residual_float(const QVFactorization<Complex>& f) {
  const int n = f.dim();
  auto v = build_vandermonde(f.q(), n);
  auto l = f.dense_L();
  auto w = l.transposed();
  w.scale_rows(f.pivots().diagonal());
  auto m = l * w;
  double num = 0.0, den = 0.0, max_abs = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double dv = std::abs(m(i, j) - v(i, j));
      num += dv * dv;
      max_abs = std::max(max_abs, dv);
      const double vv = std::abs(v(i, j));
      den += vv * vv;
    }
  }
  const double rel = den > 0.0 ? std::sqrt(num) / std::sqrt(den) : 0.0;
  return ResidualReport{false, num == 0.0, max_abs, rel};
}

}  // namespace detail

// Dense check of V = L D L^T. Exact backend reports an exact-zero flag,
// the floating backend a relative Frobenius norm. Guarded by the dense cap
// since it materializes n x n matrices.
template <class T>
ResidualReport residual(const QVFactorization<T>& f, int dense_cap = kDefaultDenseCap) {
  if (f.dim() > dense_cap)
    throw Error("dense residual check refused: n = " + std::to_string(f.dim()) +
                " exceeds cap " + std::to_string(dense_cap));
  if constexpr (scalar_traits<T>::is_exact)
    return detail::residual_exact(f);
  else
    return detail::residual_float(f);
}

// Closed form of the m-banded product: the composition
// T * diag(q^{-mi}) * T_at_1/q * diag(q^{mi}) collapses to a lower Toeplitz
// operator with column (q^{1-m};q)_j / (q;q)_j, which vanishes for j >= m.
template <class T>
struct BandedToeplitzResult {
  int bandwidth;                 // m: number of possibly nonzero diagonals
  LowerToeplitz<T> closed_form;  // col[j] = (q^{1-m};q)_j / (q;q)_j, zero for j >= m
  T q;
  double eps;

  // Verification hook: the same operator assembled the long way round, as a
  // dense product of the four factors. Oracle for the closed form.
  DenseMatrix<T> composed_dense() const {
    const int n = closed_form.dim();
    QPochTable<T> tbl(q, n, eps);
    auto left = qexp_toeplitz(tbl).to_dense();
    auto right = qexp_toeplitz_recip_q(tbl).to_dense();
    right.scale_rows(power_diagonal(q, -bandwidth, n).diagonal());
    right.scale_cols(power_diagonal(q, bandwidth, n).diagonal());
    return left * right;
  }
};

template <class T>
BandedToeplitzResult<T> banded_toeplitz_product(const T& q, int m, int n,
                                                double eps = default_guard_eps<T>()) {
  if (m < 1) throw IndexError("band parameter must be >= 1");
  QPochTable<T> tbl(q, n, eps);
  const T one = scalar_traits<T>::one();

  // z = q^{1-m} by repeated multiplication of 1/q
  T z = one;
  {
    const T qi = scalar_traits<T>::inverse(q);
    for (int l = 0; l < m - 1; ++l) z = z * qi;
  }

  // col[j] = (z;q)_j / (q;q)_j for j < m; the factor (1 - z q^{m-1}) = 0
  // makes every later coefficient vanish, so they are set to zero
  // structurally (exact on both backends).
  std::vector<T> col(static_cast<std::size_t>(n), scalar_traits<T>::zero());
  T num = one;  // (z;q)_j
  T zq = z;     // z q^j
  for (int j = 0; j < n && j < m; ++j) {
    col[static_cast<std::size_t>(j)] = num * tbl.qq_recip(j);
    num = num * (one - zq);
    zq = zq * q;
  }
  return BandedToeplitzResult<T>{m, LowerToeplitz<T>(std::move(col)), q, eps};
}

}  // namespace qvand
