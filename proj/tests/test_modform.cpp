#include <doctest.h>

#include <cmath>
#include <numeric>

#include "congruum/modform.hpp"
#include "oracles.hpp"

using namespace congruum;

namespace {

int divisor_count(std::size_t n) {
  int d = 0;
  for (std::size_t k = 1; k * k <= n; ++k)
    if (n % k == 0) d += (k * k == n) ? 1 : 2;
  return d;
}

// q * prod (1 - q^{4n})^2 (1 - q^{8n})^2 by naive power-series products
std::vector<i64> eta_naive(std::size_t len) {
  std::vector<i64> c(len, 0);
  c[0] = 1;
  auto times = [&](std::size_t k) {
    for (std::size_t i = len; i-- > k;) c[i] -= c[i - k];
  };
  for (std::size_t n = 1; 4 * n < len; ++n) {
    times(4 * n);
    times(4 * n);
    if (8 * n < len) {
      times(8 * n);
      times(8 * n);
    }
  }
  return c;
}

}  // namespace

TEST_CASE("level 32 examples and product oracle") {
  const QExpansion f = coefficients_level32(3000);
  CHECK(f.level == 32);
  CHECK(f.length() == 3000);
  CHECK(f[1] == 1);
  CHECK(f[5] == -2);
  CHECK(5 + 1 - oracle::point_count_brute(5, -1, 0) == -2);
  const auto naive = eta_naive(3000);
  for (std::size_t n = 1; n <= 3000; ++n) REQUIRE(f[n] == naive[n - 1]);
  for (std::size_t n = 1; n <= 3000; ++n)
    if (n % 4 != 1) REQUIRE(f[n] == 0);
  CHECK(f.stride == 4);
}

TEST_CASE("level 64 examples") {
  const QExpansion g = coefficients_level64(3000);
  CHECK(g.level == 64);
  CHECK(g[1] == 1);
  CHECK(g[5] == 2);
  CHECK(g[3] == 0);
  CHECK(g[9] == -3);
  CHECK(5 + 1 - oracle::point_count_brute(5, -4, 0) == 2);
}

TEST_CASE("point_count against the double loop") {
  for (i64 p = 2; p < 400; ++p) {
    if (!oracle::is_prime_trial(p)) continue;
    for (auto [a4, a6] : std::vector<std::pair<i64, i64>>{{-1, 0}, {-4, 0}, {4, 0}, {-11, 14}, {-11, -14}, {3, 5}})
      REQUIRE(point_count(p, a4, a6) == oracle::point_count_brute(p, a4, a6));
  }
}

TEST_CASE("both expansions: CM vanishing, Hasse bound and multiplicativity") {
  for (const QExpansion& f : {coefficients_level32(5000), coefficients_level64(5000)}) {
    for (std::size_t n = 1; n <= 5000; ++n) {
      if (n % 4 != 1) REQUIRE(f[n] == 0);
      const double bound = divisor_count(n) * std::sqrt(static_cast<double>(n));
      REQUIRE(std::abs(static_cast<double>(f[n])) <= bound + 1e-9);
    }
    for (i64 p = 3; p < 5000; p += 4)
      if (oracle::is_prime_trial(p)) REQUIRE(f[static_cast<std::size_t>(p)] == 0);
    for (std::size_t m = 1; m <= 70; ++m)
      for (std::size_t n = 1; m * n <= 5000 && n <= 1000; ++n)
        if (std::gcd(m, n) == 1) REQUIRE(f[m * n] == f[m] * f[n]);
  }
}

TEST_CASE("level 64 primes match point counts on y^2 = x^3 - 4x") {
  const QExpansion g = coefficients_level64(10000);
  for (i64 p = 3; p < 10000; p += 2)
    if (oracle::is_prime_trial(p))
      REQUIRE(g[static_cast<std::size_t>(p)] == p + 1 - oracle::point_count_brute(p, -4, 0));
}

TEST_CASE("abel_map at large Im(tau) is dominated by q") {
  const hp::Prec prec = 256;
  const QExpansion f = coefficients_level32(2000);
  const hp::Complex tau(hp::Real("0.3", prec), hp::Real(10L, prec));
  const AbelValue v = abel_map(f, tau, 1e-60L);
  const hp::Complex q = hp::exp_2pi_i(tau);
  const hp::Real rel = hp::abs(v.z - q) / hp::abs(q);
  const hp::Real q4 = hp::abs(q) * hp::abs(q) * hp::abs(q) * hp::abs(q);
  CHECK(rel <= q4 * 2L);
  CHECK(v.terms >= 1);
}

TEST_CASE("abel_map: two targets agree, and tau + 1 gives the same value") {
  const hp::Prec prec = 256;
  for (const QExpansion& f : {coefficients_level32(1 << 13), coefficients_level64(1 << 13)}) {
    for (const char* y : {"0.05", "0.125", "0.4"}) {
      const hp::Complex tau(hp::Real("0.137", prec), hp::Real(y, prec));
      const AbelValue a = abel_map(f, tau, 1e-25L);
      const AbelValue b = abel_map(f, tau, 1e-35L);
      CHECK(a.terms <= b.terms);
      CHECK(hp::abs(a.z - b.z).to_ld() <= a.err + b.err);
      const hp::Complex tau1(tau.re + hp::Real(1L, prec), tau.im);
      const AbelValue c = abel_map(f, tau1, 1e-35L);
      CHECK(hp::abs(c.z - b.z).to_ld() <= 2 * b.err);
    }
  }
}

TEST_CASE("abel_map ceiling and argument checks") {
  const QExpansion f = coefficients_level32(500);
  const hp::Prec prec = 128;
  const hp::Complex low(hp::Real(0L, prec), hp::Real("0.001", prec));
  CHECK_THROWS_AS(abel_map(f, low, 1e-25L), AbelCeilingError);
  const hp::Complex bad(hp::Real(0L, prec), hp::Real(-1L, prec));
  CHECK_THROWS_AS(abel_map(f, bad, 1e-25L), std::invalid_argument);
  const hp::Complex ok(hp::Real(0L, prec), hp::Real(1L, prec));
  CHECK_THROWS_AS(abel_map(f, ok, 0.0L), std::invalid_argument);
  CHECK(abel_terms_needed(1.0, 1e-25L) < abel_terms_needed(0.1, 1e-25L));
  CHECK(abel_terms_needed(0.1, 1e-25L) < abel_terms_needed(0.1, 1e-50L));
}
