#pragma once

#include <cstddef>
#include <vector>

#include "qvand/errors.hpp"
#include "qvand/scalar.hpp"

namespace qvand {

// Small row-major dense matrix used for verification and the reference
// solver. Deliberately minimal; the structured operators are the fast path.
template <class T>
class DenseMatrix {
 public:
  DenseMatrix(int rows, int cols)
      : rows_(rows),
        cols_(cols),
        a_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
           scalar_traits<T>::zero()) {
    if (rows < 0 || cols < 0) throw DimensionMismatch("negative matrix dimension");
  }

  static DenseMatrix identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = scalar_traits<T>::one();
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& operator()(int i, int j) { return a_[idx(i, j)]; }
  const T& operator()(int i, int j) const { return a_[idx(i, j)]; }

  T* row(int i) { return a_.data() + idx(i, 0); }
  const T* row(int i) const { return a_.data() + idx(i, 0); }

  DenseMatrix transposed() const {
    DenseMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<T> apply(const std::vector<T>& x) const {
    if (static_cast<int>(x.size()) != cols_)
      throw DimensionMismatch("matvec length mismatch");
    std::vector<T> y(static_cast<std::size_t>(rows_), scalar_traits<T>::zero());
    for (int i = 0; i < rows_; ++i) {
      T acc = scalar_traits<T>::zero();
      const T* r = row(i);
      for (int j = 0; j < cols_; ++j) acc += r[j] * x[static_cast<std::size_t>(j)];
      y[static_cast<std::size_t>(i)] = acc;
    }
    return y;
  }

  void scale_rows(const std::vector<T>& s) {
    if (static_cast<int>(s.size()) != rows_) throw DimensionMismatch("row scale length");
    for (int i = 0; i < rows_; ++i) {
      T* r = row(i);
      for (int j = 0; j < cols_; ++j) r[j] = s[static_cast<std::size_t>(i)] * r[j];
    }
  }

  void scale_cols(const std::vector<T>& s) {
    if (static_cast<int>(s.size()) != cols_) throw DimensionMismatch("col scale length");
    for (int i = 0; i < rows_; ++i) {
      T* r = row(i);
      for (int j = 0; j < cols_; ++j) r[j] = r[j] * s[static_cast<std::size_t>(j)];
    }
  }

 private:
  std::size_t idx(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw IndexError("matrix index out of range");
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(j);
  }

  int rows_, cols_;
  std::vector<T> a_;
};

// Plain i-k-j product. Zero operands are skipped, which halves the work on
// triangular inputs and costs nothing on the exact backend.
template <class T>
DenseMatrix<T> operator*(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matmul shape mismatch");
  DenseMatrix<T> c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (scalar_traits<T>::is_zero(aik)) continue;
      const T* brow = b.row(k);
      T* crow = c.row(i);
      for (int j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

}  // namespace qvand
