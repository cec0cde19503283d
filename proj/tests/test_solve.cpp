#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "qvand/solve.hpp"
#include "qvand/verify.hpp"

using namespace qvand;

namespace {

// forward-substitution inverse, independent of the structured path
DenseMatrix<Rational> lower_inverse_oracle(const DenseMatrix<Rational>& a) {
  const int n = a.rows();
  DenseMatrix<Rational> x(n, n);
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < n; ++i) {
      Rational acc = i == c ? Rational(1) : Rational(0);
      for (int k = 0; k < i; ++k) acc -= a(i, k) * x(k, c);
      x(i, c) = acc / a(i, i);
    }
  }
  return x;
}

std::vector<Rational> unit_vec(int n, int k) {
  std::vector<Rational> e(static_cast<std::size_t>(n), Rational(0));
  e[static_cast<std::size_t>(k)] = Rational(1);
  return e;
}

}  // namespace

TEST_CASE("apply_L_inverse frozen case") {
  // q=2, n=3: L = [[1],[1,1],[1,3,1]], so L [1,2,3]^T = [1,3,10]^T
  auto f = factorize(Rational(2), 3);
  std::vector<Rational> b{Rational(1), Rational(3), Rational(10)};
  CHECK(apply_L_inverse(f, b) ==
        std::vector<Rational>{Rational(1), Rational(2), Rational(3)});
}

TEST_CASE("triangular applies match dense inverse oracle") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    Rational q = random_valid_q(rng);
    const int n = 1 + static_cast<int>(rng() % 10);
    auto f = factorize(q, n);
    auto linv = lower_inverse_oracle(f.dense_L());
    auto linv_t = linv.transposed();
    for (int c = 0; c < n; ++c) {
      CHECK(apply_L_inverse(f, unit_vec(n, c)) == linv.apply(unit_vec(n, c)));
      CHECK(apply_LT_inverse(f, unit_vec(n, c)) == linv_t.apply(unit_vec(n, c)));
    }
    // unit-triangular fixed points: L^-1 e_{n-1} = e_{n-1}, L^-T e_0 = e_0
    CHECK(apply_L_inverse(f, unit_vec(n, n - 1)) == unit_vec(n, n - 1));
    CHECK(apply_LT_inverse(f, unit_vec(n, 0)) == unit_vec(n, 0));
  }

  auto f = factorize(Rational(2), 4);
  CHECK_THROWS_AS(apply_L_inverse(f, std::vector<Rational>(3, Rational(1))),
                  DimensionMismatch);
  CHECK_THROWS_AS(apply_LT_inverse(f, std::vector<Rational>(5, Rational(1))),
                  DimensionMismatch);
}

TEST_CASE("solve frozen cases") {
  // q=2, n=2: V = [[1,1],[1,2]], b = [1,0] -> x = [2,-1]
  auto f2 = factorize(Rational(2), 2);
  auto rep = solve(f2, std::vector<Rational>{Rational(1), Rational(0)});
  CHECK(rep.x == std::vector<Rational>{Rational(2), Rational(-1)});
  CHECK_FALSE(rep.residual_norm.has_value());

  // all-ones rhs is V's first column -> x = e0
  auto f5 = factorize(Rational(-5, 3), 5);
  auto rep2 = solve(f5, std::vector<Rational>(5, Rational(1)));
  CHECK(rep2.x == unit_vec(5, 0));

  // q=2, n=3, b = [1,2,4] is column 1 -> x = e1
  auto f3 = factorize(Rational(2), 3);
  auto rep3 = solve(f3, std::vector<Rational>{Rational(1), Rational(2), Rational(4)});
  CHECK(rep3.x == unit_vec(3, 1));
}

TEST_CASE("solve cost counters match the contract") {
  auto f = factorize(Rational(7, 2), 6);
  auto rep = solve(f, std::vector<Rational>(6, Rational(1)));
  CHECK(rep.counters.toeplitz_matvecs == 2);
  CHECK(rep.counters.diagonal_scalings == 8);
  CHECK(rep.counters.diagonal_inversion_applies == 1);
  CHECK(rep.counters.back_substitutions == 0);
}

TEST_CASE("structured solve equals the exact dense oracle") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    Rational q = random_valid_q(rng);
    const int n = 1 + static_cast<int>(rng() % 12);
    auto v = build_vandermonde(q, n);
    std::vector<Rational> b;
    for (int i = 0; i < n; ++i) b.push_back(random_rational(rng));
    auto structured = solve(factorize(q, n), b);
    auto oracle = dense_solve_oracle(v, b);
    CHECK(structured.x == oracle);
  }
}

TEST_CASE("structured solve tracks the float dense oracle") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 23);
    const double ang = -2.0 * 3.14159265358979323846 / n;
    Complex q(std::cos(ang), std::sin(ang));
    auto v = build_vandermonde(q, n);
    std::vector<Complex> b;
    for (int i = 0; i < n; ++i) b.push_back(random_complex(rng));
    auto structured = solve(factorize(q, n), b);
    auto oracle = dense_solve_oracle(v, b);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      worst = std::max(worst, std::abs(structured.x[static_cast<std::size_t>(i)] -
                                       oracle[static_cast<std::size_t>(i)]));
    CHECK(worst <= 1e-8);
    REQUIRE(structured.residual_norm.has_value());
    CHECK(*structured.residual_norm <= 1e-10);
  }
}

TEST_CASE("solve roundtrip recovers exact x") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 8; ++trial) {
    Rational q = random_valid_q(rng);
    const int n = 1 + static_cast<int>(rng() % 16);
    std::vector<Rational> x;
    for (int i = 0; i < n; ++i) x.push_back(random_rational(rng));
    auto b = vandermonde_apply(q, x);
    auto rep = solve(factorize(q, n), b);
    CHECK(rep.x == x);
  }
}

TEST_CASE("dense oracle rejects singular systems") {
  DenseMatrix<Rational> ones(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) ones(i, j) = Rational(1);
  CHECK_THROWS_AS(dense_solve_oracle(ones, std::vector<Rational>{Rational(1), Rational(2)}),
                  SingularMatrix);

  DenseMatrix<Complex> onesc(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) onesc(i, j) = Complex(1.0, 0.0);
  CHECK_THROWS_AS(
      dense_solve_oracle(onesc, std::vector<Complex>{Complex(1.0, 0.0), Complex(2.0, 0.0)}),
      SingularMatrix);

  // pivoting handles a leading zero fine
  DenseMatrix<Rational> perm(2, 2);
  perm(0, 1) = Rational(1);
  perm(1, 0) = Rational(1);
  auto x = dense_solve_oracle(perm, std::vector<Rational>{Rational(3), Rational(4)});
  CHECK(x == std::vector<Rational>{Rational(4), Rational(3)});
}

TEST_CASE("underflowed pivots surface as SingularPivot") {
  // q small enough that q^{i(i-1)/2} underflows to exactly 0 at i = 3:
  // the guard passes (|q^j - 1| ~ 1) but the pivot diagonal degenerates.
  auto f = factorize(Complex(1e-300, 0.0), 4);
  CHECK_THROWS_AS(f.pivot_recip(), SingularPivot);
  CHECK_THROWS_AS(solve(f, std::vector<Complex>(4, Complex(1.0, 0.0))), SingularPivot);
}

TEST_CASE("solve dimension checks") {
  auto f = factorize(Rational(2), 3);
  CHECK_THROWS_AS(solve(f, std::vector<Rational>(2, Rational(1))), DimensionMismatch);
}
