#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "qvand/factor.hpp"
#include "qvand/verify.hpp"

using namespace qvand;

TEST_CASE("Vandermonde build and apply") {
  auto v = build_vandermonde(Rational(2), 3);
  Rational want[3][3] = {{1, 1, 1}, {1, 2, 4}, {Rational(1), Rational(4), Rational(16)}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(v(i, j) == want[i][j]);

  // matrix-free apply equals the dense apply, entry for entry
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 8; ++trial) {
    Rational q = random_valid_q(rng);
    const int n = 1 + static_cast<int>(rng() % 9);
    std::vector<Rational> x;
    for (int i = 0; i < n; ++i) x.push_back(random_rational(rng));
    auto dense = build_vandermonde(q, n);
    CHECK(vandermonde_apply(q, x) == dense.apply(x));
  }

  CHECK_THROWS_AS(build_vandermonde(Rational(0), 3), ZeroQ);
  CHECK_THROWS_AS(build_vandermonde(Rational(2), 0), DimensionMismatch);

  // n = 1 edge: the 1x1 matrix [1] for any valid q
  auto v1 = build_vandermonde(Rational(-7, 2), 1);
  CHECK(v1(0, 0) == Rational(1));
}

TEST_CASE("factorization frozen values at q=2, n=3") {
  auto f = factorize(Rational(2), 3);
  CHECK(f.dim() == 3);
  CHECK(f.q() == Rational(2));

  // L = [[1],[1,1],[1,3,1]]
  Rational lwant[3][3] = {{1, 0, 0}, {1, 1, 0}, {1, 3, 1}};
  auto l = f.dense_L();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(l(i, j) == lwant[i][j]);
      CHECK(f.l_entry(i, j) == lwant[i][j]);
    }

  // D = diag(1, 1, 6): d1 = -(1-2) = 1, d2 = q^1 (q;q)_2 = 2*3 = 6
  CHECK(f.d_entry(0) == Rational(1));
  CHECK(f.d_entry(1) == Rational(1));
  CHECK(f.d_entry(2) == Rational(6));

  auto r = residual(f);
  CHECK(r.exact);
  CHECK(r.exact_zero);
  CHECK(r.max_abs == 0.0);

  CHECK_THROWS_AS(f.l_entry(3, 0), IndexError);
  CHECK_THROWS_AS(f.d_entry(-1), IndexError);
  CHECK(f.l_entry(0, 2) == Rational(0));
}

TEST_CASE("factorization pivots on the complex backend") {
  // q = -i, n = 2: D = diag(1, -(1+i))
  auto f = factorize(Complex(0.0, -1.0), 2);
  CHECK(f.d_entry(0) == Complex(1.0, 0.0));
  CHECK(std::abs(f.d_entry(1) - Complex(-1.0, -1.0)) <= 1e-15);
}

TEST_CASE("dense_L composition equals the closed-form entries") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    Rational q = random_valid_q(rng);
    const int n = 1 + static_cast<int>(rng() % 14);
    auto f = factorize(q, n);
    auto l = f.dense_L();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(l(i, j) == (j > i ? Rational(0) : gaussian_binomial(i, j, f.table())));
  }
}

TEST_CASE("residual flags a broken factorization") {
  auto good = factorize(Rational(3), 4);
  // rebuild with one pivot nudged off
  auto bad_pivots = good.pivots().diagonal();
  bad_pivots[2] += Rational(1, 7);
  QPochTable<Rational> tbl(Rational(3), 4);
  QVFactorization<Rational> bad(
      std::move(tbl), qexp_toeplitz(QPochTable<Rational>(Rational(3), 4)),
      qexp_toeplitz_recip_q(QPochTable<Rational>(Rational(3), 4)),
      poch_diagonal(QPochTable<Rational>(Rational(3), 4)),
      poch_diagonal_inverse(QPochTable<Rational>(Rational(3), 4)),
      power_diagonal(Rational(3), 1, 4), power_diagonal(Rational(3), -1, 4),
      DiagonalOp<Rational>(std::move(bad_pivots)));
  auto r = residual(bad);
  CHECK(r.exact);
  CHECK_FALSE(r.exact_zero);
  CHECK(r.max_abs > 0.0);
}

TEST_CASE("residual respects the dense cap") {
  auto f = factorize(Rational(2), 5);
  CHECK_THROWS_AS(residual(f, 4), Error);
  CHECK_NOTHROW(residual(f, 5));
}

TEST_CASE("residual on the DFT root stays tiny") {
  const int n = 16;
  const double ang = -2.0 * 3.14159265358979323846 / n;
  Complex q(std::cos(ang), std::sin(ang));
  auto f = factorize(q, n);
  auto r = residual(f);
  CHECK_FALSE(r.exact);
  CHECK(r.relative_fro <= 1e-10);
}

TEST_CASE("degeneracy guards fire through factorize") {
  CHECK_THROWS_AS(factorize(Rational(1), 2), DegenerateQ);
  CHECK_THROWS_AS(factorize(Rational(-1), 3), DegenerateQ);
  CHECK_NOTHROW(factorize(Rational(-1), 2));  // -1 is fine at n = 2
  CHECK_THROWS_AS(factorize(Rational(0), 3), ZeroQ);
  CHECK_THROWS_AS(factorize(Complex(0.0, 0.0), 3), ZeroQ);
  // primitive cube root of unity trips at j = 3 once n > 3
  const double ang = 2.0 * 3.14159265358979323846 / 3.0;
  Complex w(std::cos(ang), std::sin(ang));
  try {
    factorize(w, 4);
    FAIL("expected DegenerateQ");
  } catch (const DegenerateQ& e) {
    CHECK(e.witness == 3);
  }
}

TEST_CASE("banded product closed form: frozen columns") {
  // q=2, m=2, n=3: [1, -1/2, 0]
  auto b2 = banded_toeplitz_product(Rational(2), 2, 3);
  CHECK(b2.bandwidth == 2);
  CHECK(b2.closed_form.first_column() ==
        std::vector<Rational>{Rational(1), Rational(-1, 2), Rational(0)});
  // q=2, m=3, n=4: [1, -3/4, 1/8, 0]
  auto b3 = banded_toeplitz_product(Rational(2), 3, 4);
  CHECK(b3.closed_form.first_column() ==
        std::vector<Rational>{Rational(1), Rational(-3, 4), Rational(1, 8), Rational(0)});
  // m = 1 collapses to the identity
  auto b1 = banded_toeplitz_product(Rational(7, 3), 1, 5);
  auto col = b1.closed_form.first_column();
  CHECK(col[0] == Rational(1));
  for (std::size_t k = 1; k < col.size(); ++k) CHECK(col[k] == Rational(0));

  CHECK_THROWS_AS(banded_toeplitz_product(Rational(2), 0, 3), IndexError);
}

TEST_CASE("banded product: dense composition is the oracle") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 4; ++trial) {
    Rational q = random_valid_q(rng);
    const int n = 10;
    for (int m = 1; m <= 6; ++m) {
      auto banded = banded_toeplitz_product(q, m, n);
      auto composed = banded.composed_dense();
      auto closed = banded.closed_form.to_dense();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(composed(i, j) == closed(i, j));
      // bandwidth means subdiagonals >= m vanish
      const auto& c = banded.closed_form.first_column();
      for (int k = m; k < n; ++k) CHECK(c[static_cast<std::size_t>(k)] == Rational(0));
    }
  }
}

TEST_CASE("verify suites pass on healthy inputs") {
  for (auto res : run_verify_suites(Rational(3, 5), 12, 0.0, 6, 99, kDefaultDenseCap)) {
    CAPTURE(res.name);
    CHECK(res.pass);
    CHECK(res.worst_deviation == 0.0);
  }
  const int n = 8;
  const double ang = -2.0 * 3.14159265358979323846 / n;
  Complex q(std::cos(ang), std::sin(ang));
  for (auto res : run_verify_suites(q, n, 1e-10, 6, 99, kDefaultDenseCap)) {
    CAPTURE(res.name);
    CHECK(res.pass);
    CHECK(res.worst_deviation <= kFloatVerifyTol);
  }
}
