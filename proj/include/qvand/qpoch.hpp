#pragma once

#include <optional>
#include <vector>

#include "qvand/errors.hpp"
#include "qvand/scalar.hpp"

namespace qvand {

// (z;q)_k = prod_{l=0}^{k-1} (1 - z q^l); the empty product (k = 0) is 1.
// Factors accumulate by repeated multiplication, never pow().
template <class T>
T qpochhammer(const T& z, const T& q, int k) {
  if (k < 0) throw IndexError("qpochhammer needs k >= 0");
  const T one = scalar_traits<T>::one();
  T acc = one;
  T zq = z;
  for (int l = 0; l < k; ++l) {
    acc = acc * (one - zq);
    zq = zq * q;
  }
  return acc;
}

// Smallest j in [1, n-1] with q^j = 1, or nullopt when there is none.
// The floating backend tests |q^j - 1| <= eps; the exact backend compares
// exactly and ignores eps. Powers grow by repeated multiplication so the
// guard sees the same rounding as the tables built afterwards.
template <class T>
std::optional<int> degenerate_power(const T& q, int n, double eps = default_guard_eps<T>()) {
  const T one = scalar_traits<T>::one();
  T p = one;
  for (int j = 1; j <= n - 1; ++j) {
    p = p * q;
    if constexpr (scalar_traits<T>::is_exact) {
      if (p == one) return j;
    } else {
      if (scalar_traits<T>::abs_estimate(p - one) <= eps) return j;
    }
  }
  return std::nullopt;
}

// Throws ZeroQ / DegenerateQ; q values passing this are safe for every
// construction at dimension n.
template <class T>
void require_valid_q(const T& q, int n, double eps = default_guard_eps<T>()) {
  if (scalar_traits<T>::is_zero(q)) throw ZeroQ();
  if (auto j = degenerate_power(q, n, eps)) throw DegenerateQ(*j);
}

// Cached prefix tables for one (q, n): powers q^i, the products (q;q)_i and
// their reciprocals, for 0 <= i <= n-1. Construction runs the guard first,
// which makes every (q;q)_i here provably nonzero.
template <class T>
class QPochTable {
 public:
  QPochTable(const T& q, int n, double eps = default_guard_eps<T>())
      : q_(q), n_(n), eps_(eps) {
    if (n < 1) throw IndexError("table size must be >= 1");
    require_valid_q(q, n, eps);
    const T one = scalar_traits<T>::one();
    qpow_.reserve(n);
    qfac_.reserve(n);
    recip_.reserve(n);
    qpow_.push_back(one);
    qfac_.push_back(one);
    recip_.push_back(one);
    for (int i = 1; i < n; ++i) {
      qpow_.push_back(qpow_[i - 1] * q_);
      qfac_.push_back(qfac_[i - 1] * (one - qpow_[i]));
      recip_.push_back(scalar_traits<T>::inverse(qfac_[i]));
    }
  }

  int size() const { return n_; }
  const T& q() const { return q_; }
  double guard_eps() const { return eps_; }

  // (q;q)_i
  const T& qq(int i) const { return at(qfac_, i); }
  // 1/(q;q)_i
  const T& qq_recip(int i) const { return at(recip_, i); }
  // q^i
  const T& q_power(int i) const { return at(qpow_, i); }

 private:
  const T& at(const std::vector<T>& v, int i) const {
    if (i < 0 || i >= n_) throw IndexError("table index out of range");
    return v[static_cast<std::size_t>(i)];
  }

  T q_;
  int n_;
  double eps_;
  std::vector<T> qpow_, qfac_, recip_;
};

// Gaussian binomial [i choose j]_q = (q;q)_i / ((q;q)_j (q;q)_{i-j}).
// These are exactly the subdiagonal entries of the unit lower factor.
template <class T>
T gaussian_binomial(int i, int j, const QPochTable<T>& tbl) {
  if (j < 0 || j > i) throw IndexError("gaussian binomial needs 0 <= j <= i");
  if (i >= tbl.size()) throw IndexError("gaussian binomial index exceeds table");
  return tbl.qq(i) * tbl.qq_recip(j) * tbl.qq_recip(i - j);
}

}  // namespace qvand
