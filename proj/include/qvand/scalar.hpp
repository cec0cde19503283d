#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <string_view>

#include "qvand/errors.hpp"
#include "qvand/rational.hpp"

namespace qvand {

using Complex = std::complex<double>;

// The two scalar backends: exact rationals and complex doubles. Generic code
// is templated on the scalar type and pulls backend facts from these traits.
template <class T>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool is_exact = true;
  static constexpr const char* backend_name = "exact";
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static bool is_zero(const Rational& x) { return x.is_zero(); }
  static Rational inverse(const Rational& x) { return x.inverse(); }
  static double abs_estimate(const Rational& x) { return std::abs(x.to_double()); }
};

template <>
struct scalar_traits<Complex> {
  static constexpr bool is_exact = false;
  static constexpr const char* backend_name = "complex";
  static Complex zero() { return Complex(0.0, 0.0); }
  static Complex one() { return Complex(1.0, 0.0); }
  static bool is_zero(const Complex& x) { return x == Complex(0.0, 0.0); }
  static Complex inverse(const Complex& x) {
    if (is_zero(x)) throw Error("complex division by zero");
    return 1.0 / x;
  }
  static double abs_estimate(const Complex& x) { return std::abs(x); }
};

// Default tolerance for the degenerate-q guard: exact backend compares
// exactly, the floating backend allows |q^j - 1| <= eps.
template <class T>
constexpr double default_guard_eps() {
  return scalar_traits<T>::is_exact ? 0.0 : 1e-10;
}

namespace detail {

inline bool scan_digits(std::string_view s, std::size_t& pos) {
  std::size_t start = pos;
  while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
  return pos > start;
}

// strtod-style parse of one double out of s starting at pos.
inline double parse_double_at(std::string_view s, std::size_t& pos) {
  const char* first = s.data() + pos;
  const char* last = s.data() + s.size();
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr == first) throw ParseError("expected a number", pos);
  pos += static_cast<std::size_t>(ptr - first);
  return out;
}

}  // namespace detail

// Text grammar for exact scalars: "p" or "p/q" with optional leading '-',
// decimal digits only. The whole input must be consumed.
inline Rational parse_rational(std::string_view s) {
  std::size_t pos = 0;
  if (pos < s.size() && s[pos] == '-') ++pos;
  if (!detail::scan_digits(s, pos)) throw ParseError("expected digits in rational", pos);
  std::string num(s.substr(0, pos));
  std::string den = "1";
  std::size_t den_start = pos;
  if (pos < s.size() && s[pos] == '/') {
    ++pos;
    den_start = pos;
    if (!detail::scan_digits(s, pos)) throw ParseError("expected digits after '/'", pos);
    den = std::string(s.substr(den_start, pos - den_start));
  }
  if (pos != s.size()) throw ParseError("trailing characters in rational", pos);
  mpz_class n(num, 10), d(den, 10);
  if (d == 0) throw ParseError("zero denominator", den_start);
  mpq_class v(n, d);
  return Rational(std::move(v));  // ctor canonicalizes
}

// Complex scalars: "[re,im]" with doubles, or any valid rational/decimal
// text, which is promoted to a real complex value.
inline Complex parse_complex(std::string_view s) {
  if (!s.empty() && s.front() == '[') {
    std::size_t pos = 1;
    double re = detail::parse_double_at(s, pos);
    if (pos >= s.size() || s[pos] != ',') throw ParseError("expected ',' in complex literal", pos);
    ++pos;
    double im = detail::parse_double_at(s, pos);
    if (pos >= s.size() || s[pos] != ']') throw ParseError("expected ']' in complex literal", pos);
    ++pos;
    if (pos != s.size()) throw ParseError("trailing characters after complex literal", pos);
    return Complex(re, im);
  }
  if (s.find('/') != std::string_view::npos) return Complex(parse_rational(s).to_double(), 0.0);
  std::size_t pos = 0;
  double re = detail::parse_double_at(s, pos);
  if (pos != s.size()) throw ParseError("trailing characters in number", pos);
  return Complex(re, 0.0);
}

template <class T>
T parse_scalar(std::string_view s);

template <>
inline Rational parse_scalar<Rational>(std::string_view s) {
  return parse_rational(s);
}

template <>
inline Complex parse_scalar<Complex>(std::string_view s) {
  return parse_complex(s);
}

inline std::string format_scalar(const Rational& x) { return x.str(); }

// %.17g round-trips doubles exactly and keeps output deterministic.
inline std::string format_scalar(const Complex& x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "[%.17g,%.17g]", x.real(), x.imag());
  return std::string(buf);
}

// Integer power by square-and-multiply; negative exponents invert first.
// Library code builds powers by running products instead, this is for
// oracles and spot checks.
template <class T>
T pow_int(T base, long e) {
  if (e < 0) {
    base = scalar_traits<T>::inverse(base);
    e = -e;
  }
  T acc = scalar_traits<T>::one();
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

}  // namespace qvand
