#include <doctest.h>

#include <set>

#include "congruum/arith.hpp"
#include "oracles.hpp"

using namespace congruum;

TEST_CASE("squarefree_split examples") {
  CHECK(squarefree_split(1).s == 1);
  CHECK(squarefree_split(1).c == 1);
  CHECK(squarefree_split(48).s == 3);
  CHECK(squarefree_split(48).c == 4);
  CHECK(squarefree_split(-50).s == -2);
  CHECK(squarefree_split(-50).c == 5);
  CHECK_THROWS_AS(squarefree_split(0), std::invalid_argument);
}

TEST_CASE("squarefree_split reconstructs every n in [-10^4, 10^4]") {
  for (i64 n = -10000; n <= 10000; ++n) {
    if (n == 0) continue;
    const auto [s, c] = squarefree_split(n);
    REQUIRE(c >= 1);
    REQUIRE(c * c * s == n);
    REQUIRE(oracle::squarefree_trial(s));
    REQUIRE((s > 0) == (n > 0));
  }
}

TEST_CASE("is_squarefree agrees with trial division") {
  for (u64 n = 1; n < 20000; ++n) REQUIRE(is_squarefree(n) == oracle::squarefree_trial(static_cast<i64>(n)));
}

TEST_CASE("squarefree_part on 128-bit values") {
  CHECK(squarefree_part(static_cast<i128>(12)) == 3);
  CHECK(squarefree_part(static_cast<i128>(-75)) == -3);
  const i128 big = static_cast<i128>(1000003) * 1000003 * 7 * 11;
  CHECK(squarefree_part(big) == 77);
}

TEST_CASE("integer square roots") {
  for (u64 n : {0ull, 1ull, 2ull, 15ull, 16ull, 17ull, 999999999999ull, 1000000000000ull, 18446744073709551615ull}) {
    const u64 r = isqrt(n);
    CHECK(static_cast<u128>(r) * r <= n);
    CHECK(static_cast<u128>(r + 1) * (r + 1) > n);
  }
  i64 root = 0;
  CHECK(is_square(144, &root));
  CHECK(root == 12);
  CHECK_FALSE(is_square(-4));
  CHECK_FALSE(is_square(145));
  i128 r128 = 0;
  const i128 sq = static_cast<i128>(123456789012345) * 123456789012345;
  CHECK(is_square128(sq, &r128));
  CHECK(r128 == 123456789012345);
  CHECK_FALSE(is_square128(sq + 1));
}

TEST_CASE("kronecker symbol") {
  for (i64 n : {1, 2, 3, 7, 8, 15, -5, -12}) CHECK(kronecker(1, n) == 1);
  CHECK(kronecker(2, 7) == 1);
  for (i64 p : {3, 7, 11, 19, 23, 31, 43}) CHECK(kronecker(-1, p) == -1);
  for (i64 p : {5, 13, 17, 29}) CHECK(kronecker(-1, p) == 1);
  CHECK(kronecker(2, 3) == -1);
  CHECK(kronecker(5, 2) == -1);
  CHECK(kronecker(-7, 2) == 1);
  CHECK(kronecker(6, 3) == 0);
  CHECK(kronecker(-1, -1) == -1);

  // against Euler's criterion for odd primes
  for (i64 p = 3; p < 200; p += 2) {
    if (!oracle::is_prime_trial(p)) continue;
    for (i64 a = -30; a <= 30; ++a) {
      const u64 am = static_cast<u64>(mod_pos(a, p));
      int euler = 0;
      if (am) euler = powmod(am, static_cast<u64>((p - 1) / 2), static_cast<u64>(p)) == 1 ? 1 : -1;
      REQUIRE(kronecker(a, p) == euler);
    }
  }
}

TEST_CASE("modular helpers") {
  CHECK(mulmod(1ull << 62, 1ull << 62, 1000000007) == static_cast<u64>((static_cast<u128>(1ull << 62) * (1ull << 62)) % 1000000007));
  CHECK(powmod(3, 0, 7) == 1);
  CHECK(powmod(2, 10, 1000) == 24);
  CHECK(invmod(3, 7) == 5);
  CHECK(invmod(-3, 7) == 2);
  CHECK_THROWS(invmod(4, 8));
  CHECK(floor_div(-7, 2) == -4);
  CHECK(floor_div(7, -2) == -4);
  CHECK(mod_pos(-7, 5) == 3);
}

TEST_CASE("factor and primes") {
  const auto f = factor(360);
  REQUIRE(f.size() == 3);
  CHECK(f[0] == std::pair<u64, int>{2, 3});
  CHECK(f[1] == std::pair<u64, int>{3, 2});
  CHECK(f[2] == std::pair<u64, int>{5, 1});
  const auto ps = primes_below(1000);
  CHECK(ps.size() == 168);
  for (u64 p : ps) REQUIRE(oracle::is_prime_trial(static_cast<i64>(p)));
}

TEST_CASE("sieve small examples") {
  std::vector<u64> got;
  sieve_squarefree_classes(10, residues_mod8({5, 6, 7}), [&](u64 n) { got.push_back(n); });
  CHECK(got == std::vector<u64>{5, 6, 7});

  i64 trial = 0;
  for (i64 n = 1; n < 100; ++n)
    if (n % 16 == 6 && oracle::squarefree_trial(n)) ++trial;
  CHECK(static_cast<i64>(sieve_squarefree_classes(100, residues_mod16({6}))) == trial);
}

TEST_CASE("sieve counts equal per-integer tests up to 10^5") {
  const std::vector<std::vector<int>> sets{{5, 6, 7}, {1, 2, 3}, {5}, {7}};
  for (const auto& s : sets) {
    ResidueMask m = 0;
    for (int r : s) m |= residues_mod8({r});
    for (u64 bound : {1ull, 2ull, 50ull, 1000ull, 65537ull, 100000ull}) {
      i64 trial = 0;
      for (u64 n = 1; n < bound; ++n)
        if ((m >> (n % 16) & 1) && oracle::squarefree_trial(static_cast<i64>(n))) ++trial;
      REQUIRE(static_cast<i64>(sieve_squarefree_classes(bound, m)) == trial);
    }
  }
}

TEST_CASE("range sieve visits increasing values in [lo, hi]") {
  const ResidueMask m = residues_mod16({6, 14}) | residues_mod8({5, 7});
  std::vector<u64> got;
  sieve_squarefree_range(16300, 16500, m, [&](u64 n) { got.push_back(n); });
  std::vector<u64> want;
  for (u64 n = 16300; n <= 16500; ++n)
    if ((m >> (n % 16) & 1) && oracle::squarefree_trial(static_cast<i64>(n))) want.push_back(n);
  CHECK(got == want);
}

TEST_CASE("reduced_forms examples") {
  const auto f4 = reduced_forms(-4);
  REQUIRE(f4.size() == 1);
  CHECK(f4[0] == QuadForm{1, 0, 1});
  CHECK(class_number(-20) == 2);
  CHECK(class_number(-23) == 3);
  CHECK_THROWS_AS(reduced_forms(5), std::invalid_argument);
  CHECK_THROWS_AS(reduced_forms(-6), std::invalid_argument);
  CHECK_THROWS_AS(reduced_forms(0), std::invalid_argument);
}

TEST_CASE("reduced_forms equals the brute-force box count for -10^4 < disc < 0") {
  for (i64 disc = -3; disc > -10000; --disc) {
    const i64 r = mod_pos(disc, 4);
    if (r != 0 && r != 1) continue;
    const auto forms = reduced_forms(disc);
    const auto box = oracle::reduced_forms_box(disc);
    REQUIRE(forms.size() == box.size());
    std::set<QuadForm> seen;
    for (const QuadForm& f : forms) {
      REQUIRE(f.disc() == disc);
      REQUIRE(f.reduced());
      REQUIRE(f.primitive());
      REQUIRE(seen.insert(f).second);
    }
    for (const auto& b : box) REQUIRE(seen.count(QuadForm{b.a, b.b, b.c}) == 1);
  }
}

TEST_CASE("reduce_form lands on a reduced equivalent form") {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 2000; ++it) {
    // SL2(Z) image of a reduced form
    const i64 disc = -4 * static_cast<i64>(rng() % 5000 + 1) - (rng() % 2 ? 3 : 0);
    const auto forms = reduced_forms(disc);
    if (forms.empty()) continue;
    const QuadForm f = forms[rng() % forms.size()];
    const i64 p = static_cast<i64>(rng() % 7) - 3, r = static_cast<i64>(rng() % 7) - 3;
    // matrix [[1, p], [0, 1]] then [[1, 0], [r, 1]]
    const i64 a1 = f.a, b1 = 2 * f.a * p + f.b, c1 = f.a * p * p + f.b * p + f.c;
    const QuadForm g{a1 + b1 * r + c1 * r * r, b1 + 2 * c1 * r, c1};
    REQUIRE(g.disc() == disc);
    CHECK(reduce_form(g) == f);
  }
}
