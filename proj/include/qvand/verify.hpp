#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qvand/factor.hpp"
#include "qvand/solve.hpp"

namespace qvand {

// One identity-suite outcome. Exact backend passes only on exact equality;
// the floating backend compares against tol. worst_deviation is 0 for a
// clean exact pass, otherwise max |got - want| / (1 + |want|).
struct SuiteResult {
  std::string name;
  bool pass;
  double worst_deviation;
};

inline constexpr double kFloatVerifyTol = 1e-8;

namespace detail {

template <class T>
struct DevTracker {
  bool exact_ok = true;
  double worst = 0.0;

  void note(const T& got, const T& want) {
    if constexpr (scalar_traits<T>::is_exact) {
      if (!(got == want)) {
        exact_ok = false;
        note_dev(got, want);
      }
    } else {
      note_dev(got, want);
    }
  }

  bool pass(double tol) const {
    if constexpr (scalar_traits<T>::is_exact)
      return exact_ok;
    else
      return worst <= tol;
  }

 private:
  void note_dev(const T& got, const T& want) {
    const double d = scalar_traits<T>::abs_estimate(got - want);
    const double s = 1.0 + scalar_traits<T>::abs_estimate(want);
    if (d / s > worst) worst = d / s;
  }
};

}  // namespace detail

// ---- seeded draws (mt19937_64 sequences are pinned by the standard, so
// ---- seeded runs reproduce bit-identically everywhere)

inline int draw_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Any rational with numerator in [-100,100], denominator in [1,100].
inline Rational random_rational(std::mt19937_64& rng) {
  return Rational(draw_int(rng, -100, 100), draw_int(rng, 1, 100));
}

// Nonzero rational with |q| != 1. The only rational roots of unity are +-1,
// so such q passes the degeneracy guard at every dimension.
inline Rational random_valid_q(std::mt19937_64& rng) {
  for (;;) {
    const int num = draw_int(rng, -100, 100);
    const int den = draw_int(rng, 1, 100);
    if (num == 0 || num == den || num == -den) continue;
    return Rational(num, den);
  }
}

// Uniform in [-1,1) per component.
inline Complex random_complex(std::mt19937_64& rng) {
  const double re = static_cast<double>(rng() >> 11) * 0x1p-52 - 1.0;
  const double im = static_cast<double>(rng() >> 11) * 0x1p-52 - 1.0;
  return Complex(re, im);
}

template <class T>
T random_vector_entry(std::mt19937_64& rng) {
  if constexpr (scalar_traits<T>::is_exact)
    return random_rational(rng);
  else
    return random_complex(rng);
}

// ---- identity suites (shared by `verify` and the acceptance checklist)

// V = L D L^T via the dense residual check.
template <class T>
SuiteResult check_ldlt_residual(const T& q, int n, double eps, double tol,
                                int dense_cap = kDefaultDenseCap) {
  auto f = factorize(q, n, eps);
  auto r = residual(f, dense_cap);
  if constexpr (scalar_traits<T>::is_exact)
    return SuiteResult{"ldlt-residual", r.exact_zero, r.exact_zero ? 0.0 : r.max_abs};
  else
    return SuiteResult{"ldlt-residual", r.relative_fro <= tol, r.relative_fro};
}

// Entrywise expansion of the factorization: for every grid point,
// q^{ij} = sum_{k<=min(i,j)} (-1)^k q^{k(k-1)/2} (q;q)_i (q;q)_j
//          / ((q;q)_k (q;q)_{i-k} (q;q)_{j-k}).
template <class T>
SuiteResult check_power_sum_identity(const T& q, int max_ij, double eps, double tol) {
  const int n = max_ij + 1;
  QPochTable<T> tbl(q, n, eps);
  const std::size_t top = static_cast<std::size_t>(max_ij) * static_cast<std::size_t>(max_ij);
  std::vector<T> pw;
  pw.reserve(top + 1);
  pw.push_back(scalar_traits<T>::one());
  for (std::size_t k = 1; k <= top; ++k) pw.push_back(pw.back() * q);

  // tri[k] = q^{k(k-1)/2}, running
  std::vector<T> tri;
  tri.reserve(static_cast<std::size_t>(n));
  tri.push_back(scalar_traits<T>::one());
  for (int k = 1; k < n; ++k) tri.push_back(tri.back() * tbl.q_power(k - 1));

  detail::DevTracker<T> dev;
  for (int i = 0; i <= max_ij; ++i) {
    for (int j = 0; j <= max_ij; ++j) {
      T sum = scalar_traits<T>::zero();
      const int kmax = i < j ? i : j;
      for (int k = 0; k <= kmax; ++k) {
        T term = tri[static_cast<std::size_t>(k)] * tbl.qq(i) * tbl.qq(j) * tbl.qq_recip(k) *
                 tbl.qq_recip(i - k) * tbl.qq_recip(j - k);
        sum = k % 2 ? sum - term : sum + term;
      }
      dev.note(sum, pw[static_cast<std::size_t>(i) * static_cast<std::size_t>(j)]);
    }
  }
  return SuiteResult{"power-sum-identity", dev.pass(tol), dev.worst};
}

// Three faces of the closed-form Toeplitz inverse:
// (a) T * T_at_1/q has an all-ones first column,
// (b) T * invert(T) is the identity,
// (c) diag(q^{-i}) T_at_1/q diag(q^i) equals invert(T) densely.
template <class T>
SuiteResult check_toeplitz_inverse(const T& q, int n, double eps, double tol) {
  QPochTable<T> tbl(q, n, eps);
  auto t = qexp_toeplitz(tbl);
  auto t_recip = qexp_toeplitz_recip_q(tbl);
  auto t_inv = qexp_toeplitz_inverse(tbl);
  const T one = scalar_traits<T>::one();
  const T zero = scalar_traits<T>::zero();

  detail::DevTracker<T> dev;
  auto ones_col = toeplitz_product(t, t_recip).first_column();
  for (const T& c : ones_col) dev.note(c, one);

  auto id_col = toeplitz_product(t, t_inv).first_column();
  for (std::size_t k = 0; k < id_col.size(); ++k) dev.note(id_col[k], k == 0 ? one : zero);

  auto scaled = t_recip.to_dense();
  scaled.scale_rows(power_diagonal(q, -1, n).diagonal());
  scaled.scale_cols(power_diagonal(q, 1, n).diagonal());
  auto closed = t_inv.to_dense();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) dev.note(scaled(i, j), closed(i, j));

  return SuiteResult{"toeplitz-inverse", dev.pass(tol), dev.worst};
}

// Banded product: the dense composition must match the closed form for each
// band parameter; the closed form's structural zeros below band m make this
// also assert that the composition is m-banded.
template <class T>
SuiteResult check_banded_products(const T& q, int n, int m_max, double eps, double tol) {
  detail::DevTracker<T> dev;
  for (int m = 1; m <= m_max; ++m) {
    auto banded = banded_toeplitz_product(q, m, n, eps);
    auto composed = banded.composed_dense();
    auto closed = banded.closed_form.to_dense();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) dev.note(composed(i, j), closed(i, j));
  }
  return SuiteResult{"banded-product", dev.pass(tol), dev.worst};
}

// (1/q;1/q)_j = (-1)^j q^{-j(j+1)/2} (q;q)_j for j = 0..max_j. Holds for
// any q != 0; no degeneracy guard is involved.
template <class T>
SuiteResult check_recip_poch_identity(const T& q, int max_j, double eps, double tol) {
  (void)eps;
  if (scalar_traits<T>::is_zero(q)) throw ZeroQ();
  const T one = scalar_traits<T>::one();
  const T qi = scalar_traits<T>::inverse(q);

  detail::DevTracker<T> dev;
  T lhs = one;       // (1/q;1/q)_j
  T fac = one;       // (q;q)_j
  T qpow = one;      // q^j
  T qipow = one;     // q^{-j}
  T tri_inv = one;   // q^{-j(j+1)/2}
  dev.note(lhs, one);
  for (int j = 1; j <= max_j; ++j) {
    qpow = qpow * q;
    qipow = qipow * qi;
    lhs = lhs * (one - qipow);
    fac = fac * (one - qpow);
    tri_inv = tri_inv * qipow;  // exponent -j(j+1)/2 steps by -j
    T rhs = tri_inv * fac;
    if (j % 2) rhs = -rhs;
    dev.note(lhs, rhs);
  }
  return SuiteResult{"reciprocal-pochhammer", dev.pass(tol), dev.worst};
}

// Draw x, push it through V, solve, and require the original back.
template <class T>
SuiteResult check_solve_roundtrip(const T& q, int n, double eps, double tol,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto f = factorize(q, n, eps);
  detail::DevTracker<T> dev;
  std::vector<T> x;
  x.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x.push_back(random_vector_entry<T>(rng));
  auto b = vandermonde_apply(q, x);
  auto rep = solve(f, b);
  for (int i = 0; i < n; ++i)
    dev.note(rep.x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i)]);
  return SuiteResult{"solve-roundtrip", dev.pass(tol), dev.worst};
}

// The `verify` command's fixed suite list.
template <class T>
std::vector<SuiteResult> run_verify_suites(const T& q, int n, double eps, int m_max,
                                           std::uint64_t seed, int dense_cap,
                                           double tol = kFloatVerifyTol) {
  std::vector<SuiteResult> out;
  out.push_back(check_ldlt_residual(q, n, eps, tol, dense_cap));
  out.push_back(check_power_sum_identity(q, n - 1, eps, tol));
  out.push_back(check_toeplitz_inverse(q, n, eps, tol));
  out.push_back(check_banded_products(q, n, m_max, eps, tol));
  out.push_back(check_recip_poch_identity(q, 63, eps, tol));
  out.push_back(check_solve_roundtrip(q, n, eps, tol, seed));
  return out;
}

}  // namespace qvand
