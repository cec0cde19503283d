#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qvand {

// Base class for everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// q is a root of unity of order below the matrix dimension, so some
// factor (1 - q^j) vanishes and the factorization breaks down.
class DegenerateQ : public Error {
 public:
  explicit DegenerateQ(int j)
      : Error("degenerate q: q^" + std::to_string(j) +
              " = 1 inside the guarded range 1 <= j <= n-1"),
        witness(j) {}
  int witness;
};

// q = 0 is rejected up front: the inverse formulas need 1/q.
class ZeroQ : public Error {
 public:
  ZeroQ() : Error("q = 0 is not allowed: the triangular inverses require 1/q") {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : Error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
  std::size_t position;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

// A zero entry in the pivot diagonal. Unreachable when the q guard holds;
// kept as a defensive check for the floating backend (underflow).
class SingularPivot : public Error {
 public:
  explicit SingularPivot(int i)
      : Error("zero pivot at index " + std::to_string(i) + " in the diagonal factor"),
        index(i) {}
  int index;
};

}  // namespace qvand
