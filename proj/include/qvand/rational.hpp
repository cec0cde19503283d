#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>

#include "qvand/errors.hpp"

namespace qvand {

// Arbitrary-precision rational, always held in canonical form (reduced,
// positive denominator). Thin wrapper over GMP's mpq_class that only exposes
// rational-by-rational arithmetic; mixing mpz and mpq operands in gmpxx can
// produce non-canonical values, which silently breaks mpq_equal.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(int n) : v_(n) {}
  Rational(long n) : v_(n) {}
  Rational(long num, long den) : v_(num, den) {
    if (den == 0) throw Error("rational with zero denominator");
    v_.canonicalize();
  }
  // Takes ownership; canonicalizes in case the caller assembled it from parts.
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw Error("rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
  friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
  friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
  friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }
  Rational operator-() const {
    Rational r;
    r.v_ = -v_;
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }

  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }

  Rational inverse() const {
    if (is_zero()) throw Error("rational division by zero");
    Rational r;
    r.v_ = 1 / v_;
    return r;
  }

  const mpz_class& num() const { return v_.get_num(); }
  const mpz_class& den() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  double to_double() const { return v_.get_d(); }
  // "p" or "p/q", matching the scalar text grammar.
  std::string str() const { return v_.get_str(); }

 private:
  mpq_class v_;
};

}  // namespace qvand
