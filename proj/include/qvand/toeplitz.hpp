#pragma once

#include <type_traits>
#include <utility>
#include <vector>

#include "qvand/dense.hpp"
#include "qvand/errors.hpp"
#include "qvand/kernels.hpp"
#include "qvand/qpoch.hpp"

namespace qvand {

// Lower-triangular Toeplitz operator, stored as its first column only.
// These commute under multiplication (they are truncated power series in
// the shift matrix), which several identity checks rely on.
template <class T>
class LowerToeplitz {
 public:
  explicit LowerToeplitz(std::vector<T> first_col) : col_(std::move(first_col)) {
    if (col_.empty()) throw DimensionMismatch("empty Toeplitz column");
  }

  static LowerToeplitz identity(int n) {
    if (n < 1) throw DimensionMismatch("identity size must be >= 1");
    std::vector<T> c(static_cast<std::size_t>(n), scalar_traits<T>::zero());
    c[0] = scalar_traits<T>::one();
    return LowerToeplitz(std::move(c));
  }

  int dim() const { return static_cast<int>(col_.size()); }
  const std::vector<T>& first_column() const { return col_; }
  bool unit_diagonal() const { return col_[0] == scalar_traits<T>::one(); }

  // y[i] = sum_{j<=i} col[i-j] x[j]
  std::vector<T> apply(const std::vector<T>& x) const {
    check_len(x);
    const std::size_t n = col_.size();
    std::vector<T> y(n, scalar_traits<T>::zero());
    if constexpr (std::is_same_v<T, Complex>) {
      kernels::toeplitz_lower_matvec(y.data(), col_.data(), x.data(), n);
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        if (scalar_traits<T>::is_zero(x[j])) continue;
        for (std::size_t k = 0; k < n - j; ++k) y[j + k] += col_[k] * x[j];
      }
    }
    return y;
  }

  // y = T^T x: y[i] = sum_{j>=i} col[j-i] x[j]
  std::vector<T> apply_transpose(const std::vector<T>& x) const {
    check_len(x);
    const std::size_t n = col_.size();
    std::vector<T> y(n, scalar_traits<T>::zero());
    if constexpr (std::is_same_v<T, Complex>) {
      kernels::toeplitz_upper_matvec(y.data(), col_.data(), x.data(), n);
    } else {
      for (std::size_t k = 0; k < n; ++k) {
        if (scalar_traits<T>::is_zero(col_[k])) continue;
        for (std::size_t i = 0; i < n - k; ++i) y[i] += col_[k] * x[i + k];
      }
    }
    return y;
  }

  DenseMatrix<T> to_dense() const {
    const int n = dim();
    DenseMatrix<T> m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) m(i, j) = col_[static_cast<std::size_t>(i - j)];
    return m;
  }

 private:
  void check_len(const std::vector<T>& x) const {
    if (x.size() != col_.size()) throw DimensionMismatch("Toeplitz matvec length mismatch");
  }

  std::vector<T> col_;
};

// Product of two lower Toeplitz operators is lower Toeplitz; its first
// column is a applied to b's first column (truncated series product).
template <class T>
LowerToeplitz<T> toeplitz_product(const LowerToeplitz<T>& a, const LowerToeplitz<T>& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("Toeplitz product dimension mismatch");
  return LowerToeplitz<T>(a.apply(b.first_column()));
}

// Diagonal operator.
template <class T>
class DiagonalOp {
 public:
  explicit DiagonalOp(std::vector<T> diag) : d_(std::move(diag)) {
    if (d_.empty()) throw DimensionMismatch("empty diagonal");
  }

  static DiagonalOp identity(int n) {
    if (n < 1) throw DimensionMismatch("identity size must be >= 1");
    return DiagonalOp(std::vector<T>(static_cast<std::size_t>(n), scalar_traits<T>::one()));
  }

  int dim() const { return static_cast<int>(d_.size()); }
  const std::vector<T>& diagonal() const { return d_; }

  std::vector<T> apply(const std::vector<T>& x) const {
    if (x.size() != d_.size()) throw DimensionMismatch("diagonal apply length mismatch");
    const std::size_t n = d_.size();
    std::vector<T> y(n, scalar_traits<T>::zero());
    if constexpr (std::is_same_v<T, Complex>) {
      kernels::hadamard(y.data(), d_.data(), x.data(), n);
    } else {
      for (std::size_t i = 0; i < n; ++i) y[i] = d_[i] * x[i];
    }
    return y;
  }

  DiagonalOp inverse() const {
    std::vector<T> inv;
    inv.reserve(d_.size());
    for (std::size_t i = 0; i < d_.size(); ++i) {
      if (scalar_traits<T>::is_zero(d_[i])) throw SingularPivot(static_cast<int>(i));
      inv.push_back(scalar_traits<T>::inverse(d_[i]));
    }
    return DiagonalOp(std::move(inv));
  }

  DenseMatrix<T> to_dense() const {
    const int n = dim();
    DenseMatrix<T> m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = d_[static_cast<std::size_t>(i)];
    return m;
  }

 private:
  std::vector<T> d_;
};

// S^j, the j-th power of the down-shift matrix (ones on subdiagonal j).
struct ShiftPower {
  int n;
  int j;

  ShiftPower(int n_, int j_) : n(n_), j(j_) {
    if (n < 1 || j < 0) throw IndexError("shift power needs n >= 1 and j >= 0");
  }

  // (S^j x)[i] = x[i-j] for i >= j, else 0. j >= n gives the zero vector.
  template <class T>
  std::vector<T> apply(const std::vector<T>& x) const {
    if (static_cast<int>(x.size()) != n) throw DimensionMismatch("shift apply length mismatch");
    std::vector<T> y(static_cast<std::size_t>(n), scalar_traits<T>::zero());
    for (int i = j; i < n; ++i) y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i - j)];
    return y;
  }

  template <class T>
  DenseMatrix<T> to_dense() const {
    DenseMatrix<T> m(n, n);
    for (int i = j; i < n; ++i) m(i, i - j) = scalar_traits<T>::one();
    return m;
  }
};

// Unit lower Toeplitz whose column is the reciprocal product table:
// col[k] = 1/(q;q)_k. As a series in the shift matrix this is the
// q-exponential sum_k S^k/(q;q)_k truncated at dimension n.
template <class T>
LowerToeplitz<T> qexp_toeplitz(const QPochTable<T>& tbl) {
  const int n = tbl.size();
  std::vector<T> col;
  col.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) col.push_back(tbl.qq_recip(k));
  return LowerToeplitz<T>(std::move(col));
}

// Same operator built at 1/q: col[k] = 1/(q^{-1};q^{-1})_k. The running
// products mirror QPochTable's, just with the reciprocal base.
template <class T>
LowerToeplitz<T> qexp_toeplitz_recip_q(const QPochTable<T>& tbl) {
  const int n = tbl.size();
  const T one = scalar_traits<T>::one();
  const T qi = scalar_traits<T>::inverse(tbl.q());
  std::vector<T> col;
  col.reserve(static_cast<std::size_t>(n));
  col.push_back(one);
  T qip = one;  // q^{-k}
  T fac = one;  // (q^{-1};q^{-1})_k
  for (int k = 1; k < n; ++k) {
    qip = qip * qi;
    fac = fac * (one - qip);
    col.push_back(scalar_traits<T>::inverse(fac));
  }
  return LowerToeplitz<T>(std::move(col));
}

// Closed-form inverse of qexp_toeplitz: with t[k] = 1/(q^{-1};q^{-1})_k the
// inverse column is c[0] = 1, c[k] = t[k] - t[k-1]. This is the
// "multiply by (I - S)" form of the inverse; no substitution is performed.
template <class T>
LowerToeplitz<T> qexp_toeplitz_inverse(const QPochTable<T>& tbl) {
  const auto recip = qexp_toeplitz_recip_q(tbl).first_column();
  const int n = tbl.size();
  std::vector<T> col;
  col.reserve(static_cast<std::size_t>(n));
  col.push_back(scalar_traits<T>::one());
  for (int k = 1; k < n; ++k)
    col.push_back(recip[static_cast<std::size_t>(k)] - recip[static_cast<std::size_t>(k - 1)]);
  return LowerToeplitz<T>(std::move(col));
}

// diag((q;q)_0, ..., (q;q)_{n-1}) and its inverse.
template <class T>
DiagonalOp<T> poch_diagonal(const QPochTable<T>& tbl) {
  std::vector<T> d;
  d.reserve(static_cast<std::size_t>(tbl.size()));
  for (int i = 0; i < tbl.size(); ++i) d.push_back(tbl.qq(i));
  return DiagonalOp<T>(std::move(d));
}

template <class T>
DiagonalOp<T> poch_diagonal_inverse(const QPochTable<T>& tbl) {
  std::vector<T> d;
  d.reserve(static_cast<std::size_t>(tbl.size()));
  for (int i = 0; i < tbl.size(); ++i) d.push_back(tbl.qq_recip(i));
  return DiagonalOp<T>(std::move(d));
}

// diag(q^{m i}) for i = 0..n-1, m any integer. The step q^m accumulates by
// repeated multiplication of q (or 1/q for negative m).
template <class T>
DiagonalOp<T> power_diagonal(const T& q, int m, int n) {
  if (n < 1) throw DimensionMismatch("power diagonal size must be >= 1");
  if (m < 0 && scalar_traits<T>::is_zero(q)) throw ZeroQ();
  const T one = scalar_traits<T>::one();
  T step = one;
  {
    const T base = m >= 0 ? q : scalar_traits<T>::inverse(q);
    const int reps = m >= 0 ? m : -m;
    for (int l = 0; l < reps; ++l) step = step * base;
  }
  std::vector<T> d;
  d.reserve(static_cast<std::size_t>(n));
  d.push_back(one);
  for (int i = 1; i < n; ++i) d.push_back(d[static_cast<std::size_t>(i - 1)] * step);
  return DiagonalOp<T>(std::move(d));
}

}  // namespace qvand
