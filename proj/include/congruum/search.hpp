// Rational points on D y^2 = x^3 - x with x = r/s: a pruned bulk search over
// squarefree parts of r, s, r+s, r-s, and an exhaustive per-D search.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "congruum/arith.hpp"

namespace congruum {

struct FoundPoint {
  i64 D = 0;  // squarefree, positive
  i64 r = 0;
  i64 s = 1;  // x = r/s, gcd(r, s) = 1, s >= 1
  i128 t = 0; // y = t / s^2, t > 0, so D t^2 = r s (r - s)(r + s)

  i64 height() const { return std::max(r < 0 ? -r : r, s); }
  bool verify() const;
};

// true if a is the better representative: smaller max(|r|, s), then |r|, then s
bool better_point(const FoundPoint& a, const FoundPoint& b);

// Builds the point for (r, s) if r s (r^2 - s^2) is nonzero; D is the
// positive squarefree part (r is negated when the product is negative).
std::optional<FoundPoint> point_from_pair(i64 r, i64 s);

// Points with max(|r|, s) <= H whose D satisfies |D| < D_bound, keeping the
// best point per D. filter, when non-empty, restricts the recorded D.
std::map<i64, FoundPoint> pruned_search(i64 H, i64 D_bound, const std::set<i64>& filter = {});

// Exhaustive: the first point with |r|, s <= h found in order of height.
std::optional<FoundPoint> naive_search(i64 D, i64 h);
// All points (up to x -> sign conventions) on E_D with |r|, s <= h.
std::vector<FoundPoint> naive_points(i64 D, i64 h);
// One exhaustive sweep over all pairs with |r|, s <= h, best point per D < D_bound.
std::map<i64, FoundPoint> naive_search_all(i64 h, i64 D_bound);

// GF(2) rank of the images of the points in E(Q)/2E(Q), torsion removed.
int independence_check(const std::vector<FoundPoint>& points);

}  // namespace congruum
