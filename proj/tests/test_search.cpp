#include <doctest.h>

#include <numeric>
#include <set>

#include <gmpxx.h>

#include "congruum/search.hpp"
#include "oracles.hpp"

using namespace congruum;

namespace {

// D t^2 = r s (r^2 - s^2) with D the squarefree part, done with plain trial division
std::set<i64> naive_D_set(i64 h, i64 D_bound) {
  std::set<i64> out;
  for (i64 s = 1; s <= h; ++s)
    for (i64 r = -h; r <= h; ++r) {
      if (r == 0 || r == s || r == -s || std::gcd(r, s) != 1) continue;
      i128 P = (i128)r * s * (r - s) * (r + s);
      if (P < 0) P = -P;
      const i128 sqf = squarefree_part(P);
      if (sqf < D_bound) out.insert(static_cast<i64>(sqf));
    }
  return out;
}

}  // namespace

TEST_CASE("pruned_search small examples") {
  const auto found = pruned_search(100, 10);
  REQUIRE(found.count(5));
  REQUIRE(found.count(6));
  REQUIRE(found.count(7));
  CHECK(mpq_class(found.at(5).r, found.at(5).s) == mpq_class(-4, 5));
  CHECK(mpq_class(found.at(6).r, found.at(6).s) == mpq_class(-1, 2));
  CHECK(mpq_class(found.at(7).r, found.at(7).s) == mpq_class(-9, 16));
  for (i64 D : {1, 2, 3}) CHECK(found.count(D) == 0);
  for (const auto& [D, p] : found) {
    CHECK(p.D == D);
    CHECK(p.verify());
  }
}

TEST_CASE("pruned_search respects the filter and keeps the lowest point") {
  const std::set<i64> filter{5, 7, 41};
  const auto found = pruned_search(150, 100, filter);
  std::set<i64> keys;
  for (const auto& [D, p] : found) keys.insert(D);
  CHECK(keys == filter);
  for (i64 D : filter) {
    const auto best = naive_search(D, 150);
    REQUIRE(best);
    CHECK(found.at(D).height() == best->height());
  }
}

TEST_CASE("naive_search examples") {
  const auto p5 = naive_search(5, 10);
  REQUIRE(p5);
  CHECK(mpq_class(p5->r, p5->s) == mpq_class(-4, 5));
  CHECK(p5->verify());
  CHECK_FALSE(naive_search(1, 200));
  CHECK_FALSE(naive_search(2, 200));
  CHECK_FALSE(naive_search(3, 200));
  const auto p41 = naive_search(41, 200);
  REQUIRE(p41);
  CHECK(p41->verify());
}

TEST_CASE("naive_search_all matches a plain D-set enumeration") {
  const auto all = naive_search_all(60, 2000);
  std::set<i64> keys;
  for (const auto& [D, p] : all) {
    keys.insert(D);
    REQUIRE(p.verify());
  }
  CHECK(keys == naive_D_set(60, 2000));
}

TEST_CASE("naive_points are all on the curve and distinct") {
  for (i64 D : {5, 6, 7, 34, 41, 65, 210}) {
    std::set<std::pair<i64, i64>> seen;
    for (const FoundPoint& p : naive_points(D, 60)) {
      REQUIRE(p.D == D);
      REQUIRE(p.verify());
      REQUIRE(seen.insert({p.r, p.s}).second);
    }
    CHECK_FALSE(seen.empty());
  }
}

TEST_CASE("point_from_pair and better_point") {
  const auto p = point_from_pair(-4, 5);
  REQUIRE(p);
  CHECK(p->D == 5);
  CHECK(p->verify());
  CHECK_FALSE(point_from_pair(1, 1));
  CHECK_FALSE(point_from_pair(0, 3));
  CHECK_FALSE(point_from_pair(2, 4));
  FoundPoint a{5, -4, 5, 0}, b{5, 45, 4, 0}, c{5, 5, 4, 0};
  CHECK(better_point(a, b));
  CHECK_FALSE(better_point(b, a));
  CHECK(better_point(a, c) != better_point(c, a));
}

TEST_CASE("independence_check") {
  const auto p5 = naive_search(5, 10);
  REQUIRE(p5);
  CHECK(independence_check({*p5}) == 1);
  // x(2P) = (x^2 + 1)^2 / (4 (x^3 - x)) on D y^2 = x^3 - x
  const mpq_class x(-4, 5);
  const mpq_class x2 = (x * x + 1) * (x * x + 1) / (4 * (x * x * x - x));
  const auto dbl = point_from_pair(x2.get_num().get_si(), x2.get_den().get_si());
  REQUIRE(dbl);
  REQUIRE(dbl->D == 5);
  CHECK(independence_check({*p5, *dbl}) == 1);
  CHECK(independence_check({*dbl}) == 0);

  // three points of distinct descent images on the rank-3 curve D = 1254
  const auto pts = naive_points(1254, 400);
  int best = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (std::size_t k = j + 1; k < pts.size(); ++k)
        best = std::max(best, independence_check({pts[i], pts[j], pts[k]}));
  CHECK(best == 3);
  CHECK(independence_check({}) == 0);
}

TEST_CASE("pruning loses nothing it covers at (H, Delta) = (200, 201)") {
  std::set<i64> pruned, naive;
  for (const auto& [D, p] : pruned_search(200, 201)) pruned.insert(D);
  for (i64 D = 1; D <= 200; ++D)
    if (oracle::squarefree_trial(D) && naive_search(D, 200)) naive.insert(D);
  CHECK(pruned == naive);
}
