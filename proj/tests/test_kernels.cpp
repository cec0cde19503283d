#include <doctest.h>

#include <cstdlib>
#include <random>
#include <vector>

#include "qvand/errors.hpp"
#include "qvand/kernels.hpp"
#include "qvand/scalar.hpp"

using namespace qvand;
using kernels::Isa;

namespace {

std::vector<Complex> rnd_vec(std::mt19937_64& rng, std::size_t n) {
  std::vector<Complex> v(n);
  for (auto& c : v)
    c = Complex(static_cast<double>(rng() >> 11) * 0x1p-52 - 1.0,
                static_cast<double>(rng() >> 11) * 0x1p-52 - 1.0);
  return v;
}

double max_rel_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i] - b[i]) / (1.0 + std::abs(b[i]));
    if (d > worst) worst = d;
  }
  return worst;
}

struct IsaGuard {
  Isa saved;
  IsaGuard() : saved(kernels::active()) {}
  ~IsaGuard() { kernels::select(saved); }
};

}  // namespace

TEST_CASE("dispatch surface") {
  auto have = kernels::available();
  REQUIRE(!have.empty());
  CHECK(have.front() == Isa::scalar);
  for (Isa isa : have) {
    IsaGuard guard;
    kernels::select(isa);
    CHECK(kernels::active() == isa);
    CHECK(kernels::isa_name(isa) != nullptr);
  }
  // a variant outside available() must throw
  bool has_neon = false;
  for (Isa isa : have) has_neon = has_neon || isa == Isa::neon;
  if (!has_neon) CHECK_THROWS_AS(kernels::select(Isa::neon), Error);
}

TEST_CASE("QVAND_KERNEL env override") {
  IsaGuard guard;
  setenv("QVAND_KERNEL", "scalar", 1);
  kernels::select_best();
  CHECK(kernels::active() == Isa::scalar);
  setenv("QVAND_KERNEL", "auto", 1);
  kernels::select_best();
  CHECK(kernels::active() == kernels::available().back());
  setenv("QVAND_KERNEL", "bogus", 1);
  CHECK_THROWS_AS(kernels::select_best(), Error);
  unsetenv("QVAND_KERNEL");
}

TEST_CASE("axpy variants agree with the scalar reference") {
  std::mt19937_64 rng(17);
  for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{2}, std::size_t{3},
                        std::size_t{4}, std::size_t{5}, std::size_t{7}, std::size_t{8},
                        std::size_t{15}, std::size_t{33}, std::size_t{64}, std::size_t{501}}) {
    auto x = rnd_vec(rng, n);
    auto y0 = rnd_vec(rng, n);
    const Complex a(0.7, -0.3);

    IsaGuard guard;
    kernels::select(Isa::scalar);
    auto ref = y0;
    kernels::axpy(ref.data(), x.data(), a, n);
    // reference kernel is the plain loop, bit for bit
    auto plain = y0;
    for (std::size_t i = 0; i < n; ++i) plain[i] += a * x[i];
    CHECK(ref == plain);

    for (Isa isa : kernels::available()) {
      kernels::select(isa);
      auto got = y0;
      kernels::axpy(got.data(), x.data(), a, n);
      CHECK(max_rel_diff(got, ref) <= 1e-12);
    }
  }
}

TEST_CASE("hadamard variants agree and tolerate y == x") {
  std::mt19937_64 rng(19);
  for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3}, std::size_t{8},
                        std::size_t{17}, std::size_t{256}}) {
    auto d = rnd_vec(rng, n);
    auto x = rnd_vec(rng, n);

    IsaGuard guard;
    kernels::select(Isa::scalar);
    std::vector<Complex> ref(n);
    kernels::hadamard(ref.data(), d.data(), x.data(), n);

    for (Isa isa : kernels::available()) {
      kernels::select(isa);
      std::vector<Complex> got(n);
      kernels::hadamard(got.data(), d.data(), x.data(), n);
      CHECK(max_rel_diff(got, ref) <= 1e-12);
      // in-place
      auto inplace = x;
      kernels::hadamard(inplace.data(), d.data(), inplace.data(), n);
      CHECK(max_rel_diff(inplace, ref) <= 1e-12);
    }
  }
}

TEST_CASE("Toeplitz matvecs agree with a naive dense loop") {
  std::mt19937_64 rng(23);
  for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{5}, std::size_t{16},
                        std::size_t{63}, std::size_t{128}}) {
    auto col = rnd_vec(rng, n);
    auto x = rnd_vec(rng, n);

    std::vector<Complex> lower(n, Complex{}), upper(n, Complex{});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) lower[i] += col[i - j] * x[j];
      for (std::size_t j = i; j < n; ++j) upper[i] += col[j - i] * x[j];
    }

    IsaGuard guard;
    for (Isa isa : kernels::available()) {
      kernels::select(isa);
      std::vector<Complex> got(n);
      kernels::toeplitz_lower_matvec(got.data(), col.data(), x.data(), n);
      CHECK(max_rel_diff(got, lower) <= 1e-12);
      kernels::toeplitz_upper_matvec(got.data(), col.data(), x.data(), n);
      CHECK(max_rel_diff(got, upper) <= 1e-12);
    }
  }
}
