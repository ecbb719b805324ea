#include "congruum/search.hpp"

#include <array>
#include <cmath>
#include <numeric>

namespace congruum {

namespace {

// squarefree parts of 0..limit
class SqfTable {
 public:
  explicit SqfTable(u64 limit) : sqf_(limit + 1) {
    std::iota(sqf_.begin(), sqf_.end(), 0u);
    for (u64 p = 2; p * p <= limit; ++p) {
      const u64 q = p * p;
      for (u64 m = q; m <= limit; m += q)
        while (sqf_[m] % q == 0) sqf_[m] /= static_cast<std::uint32_t>(q);
    }
  }
  u64 operator()(i64 n) const { return sqf_[static_cast<std::size_t>(n < 0 ? -n : n)]; }
  u64 limit() const { return sqf_.size() - 1; }

 private:
  std::vector<std::uint32_t> sqf_;
};

u64 sqf_trial(i64 n) { return static_cast<u64>(squarefree_part(n < 0 ? -n : n)); }

bool valid_pair(i64 r, i64 s) {
  return s >= 1 && r != 0 && r != s && r != -s && std::gcd(r, s) == 1;
}

template <class Sqf>
std::optional<FoundPoint> build_point(i64 r, i64 s, const Sqf& sqf) {
  if (!valid_pair(r, s)) return std::nullopt;
  i128 P = (i128)r * s * (r - s) * (r + s);
  if (P < 0) {
    r = -r;
    P = -P;
  }
  u128 D;
  if ((r - s) % 2 == 0) {
    D = (u128)sqf(r) * sqf(s) * sqf((r + s) / 2) * sqf((r - s) / 2);
  } else {
    D = (u128)sqf(r) * sqf(s) * sqf(r + s) * sqf(r - s);
  }
  if (D >= ((u128)1 << 62)) return std::nullopt;
  FoundPoint fp;
  fp.D = static_cast<i64>(D);
  fp.r = r;
  fp.s = s;
  i128 t;
  if (P % (i128)D != 0 || !is_square128(P / (i128)D, &t)) return std::nullopt;
  fp.t = t;
  return fp;
}

void keep_best(std::map<i64, FoundPoint>& out, const FoundPoint& p) {
  auto it = out.find(p.D);
  if (it == out.end()) {
    out.emplace(p.D, p);
  } else if (better_point(p, it->second)) {
    it->second = p;
  }
}

}  // namespace

bool FoundPoint::verify() const {
  if (D <= 0 || s < 1 || std::gcd(r, s) != 1 || t <= 0) return false;
  // D (t/s^2)^2 = (r/s)^3 - r/s  <=>  D t^2 = r s (r^2 - s^2)
  return (i128)D * t * t == (i128)r * s * (r - s) * (r + s);
}

bool better_point(const FoundPoint& a, const FoundPoint& b) {
  if (a.height() != b.height()) return a.height() < b.height();
  const i64 ar = a.r < 0 ? -a.r : a.r, br = b.r < 0 ? -b.r : b.r;
  if (ar != br) return ar < br;
  if (a.s != b.s) return a.s < b.s;
  return a.r < b.r;
}

std::optional<FoundPoint> point_from_pair(i64 r, i64 s) { return build_point(r, s, sqf_trial); }

std::map<i64, FoundPoint> pruned_search(i64 H, i64 D_bound, const std::set<i64>& filter) {
  std::map<i64, FoundPoint> out;
  if (H < 1 || D_bound < 1) return out;
  const SqfTable sqf(static_cast<u64>(2 * H + 1));
  const double four_delta = 4.0 * static_cast<double>(D_bound);
  const double f_bound = std::pow(four_delta, 0.25);

  // v_k = (alpha r + beta s) / den for the four factors
  struct Kind {
    i64 alpha, beta;
  };
  const std::array<Kind, 4> kinds{{{1, 0}, {0, 1}, {1, 1}, {1, -1}}};

  std::vector<i64> sqfree;
  for (i64 n = 1; static_cast<double>(n) <= std::cbrt(four_delta) + 1; ++n)
    if (is_squarefree(static_cast<u64>(n))) sqfree.push_back(n);

  auto consider = [&](i64 r, i64 s, bool same) {
    if (s < 0) {
      r = -r;
      s = -s;
    }
    if (s < 1 || s > H || r > H || r < -H) return;
    if (((r - s) % 2 == 0) != same) return;
    auto p = build_point(r, s, sqf);
    if (!p || p->D >= D_bound) return;
    if (!filter.empty() && !filter.count(p->D)) return;
    keep_best(out, *p);
  };

  for (int same = 0; same <= 1; ++same) {
    const i64 den = same ? 2 : 1;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i == j) continue;
        // factor k equals (alpha r + beta s) / den_k, where only the sum
        // and difference are halved in the same-parity case
        const i64 di = (i >= 2) ? den : 1, dj = (j >= 2) ? den : 1;
        const i64 a1 = kinds[i].alpha, b1 = kinds[i].beta;
        const i64 a2 = kinds[j].alpha, b2 = kinds[j].beta;
        const i64 det = a1 * b2 - a2 * b1;
        for (i64 f : sqfree) {
          if (static_cast<double>(f) >= f_bound) break;
          const double g_bound = std::cbrt(four_delta / static_cast<double>(f));
          const i64 m_max = static_cast<i64>(isqrt(static_cast<u64>(2 * H / f)));
          for (i64 g : sqfree) {
            if (static_cast<double>(g) > g_bound) break;
            const i64 n_max = static_cast<i64>(isqrt(static_cast<u64>(2 * H / g)));
            for (i64 m = 1; m <= m_max; ++m) {
              const i64 Vi0 = f * m * m;
              for (i64 n = 1; n <= n_max; ++n) {
                const i64 Vj0 = g * n * n;
                for (int si = -1; si <= 1; si += 2) {
                  for (int sj = -1; sj <= 1; sj += 2) {
                    // a1 r + b1 s = di Vi, a2 r + b2 s = dj Vj
                    const i64 Ui = di * si * Vi0, Uj = dj * sj * Vj0;
                    const i64 rn = Ui * b2 - Uj * b1, sn = a1 * Uj - a2 * Ui;
                    if (rn % det || sn % det) continue;
                    consider(rn / det, sn / det, same);
                  }
                }
              }
            }
          }
        }
      }
    }
  }
  return out;
}

std::optional<FoundPoint> naive_search(i64 D, i64 h) {
  const i64 aD = D < 0 ? -D : D;
  for (i64 m = 1; m <= h; ++m) {
    for (i64 ar = 0; ar <= m; ++ar) {
      const i64 s_lo = ar < m ? m : 1;
      for (i64 s = s_lo; s <= m; ++s) {
        for (int sg = 1; sg >= -1; sg -= 2) {
          const i64 r = sg * ar;
          if (!valid_pair(r, s)) continue;
          i128 P = (i128)r * s * (r - s) * (r + s);
          i64 rr = r;
          if (P < 0) {
            P = -P;
            rr = -r;
          }
          i128 t;
          if (P % aD == 0 && is_square128(P / aD, &t)) return FoundPoint{aD, rr, s, t};
        }
      }
    }
  }
  return std::nullopt;
}

std::vector<FoundPoint> naive_points(i64 D, i64 h) {
  const i64 aD = D < 0 ? -D : D;
  std::vector<FoundPoint> out;
  for (i64 s = 1; s <= h; ++s) {
    for (i64 r = -h; r <= h; ++r) {
      if (!valid_pair(r, s)) continue;
      const i128 P = (i128)r * s * (r - s) * (r + s);
      i128 t;
      if (P > 0 && P % aD == 0 && is_square128(P / aD, &t)) out.push_back(FoundPoint{aD, r, s, t});
    }
  }
  return out;
}

std::map<i64, FoundPoint> naive_search_all(i64 h, i64 D_bound) {
  std::map<i64, FoundPoint> out;
  const SqfTable sqf(static_cast<u64>(2 * h + 1));
  for (i64 s = 1; s <= h; ++s) {
    for (i64 r = -h; r <= h; ++r) {
      auto p = build_point(r, s, sqf);
      if (p && p->D < D_bound) keep_best(out, *p);
    }
  }
  return out;
}

namespace {

using Key = std::pair<int, u64>;  // (coordinate, prime); prime 1 is the sign

void add_factors(std::map<Key, int>& v, int coord, i64 n) {
  if (n < 0) {
    v[{coord, 1}] ^= 1;
    n = -n;
  }
  for (auto [p, e] : factor(static_cast<u64>(n)))
    if (e % 2) v[{coord, p}] ^= 1;
}

int gf2_rank(const std::vector<std::map<Key, int>>& rows) {
  std::map<Key, int> col;
  for (const auto& r : rows)
    for (auto [k, b] : r)
      if (b) col.emplace(k, static_cast<int>(col.size()));
  std::vector<std::vector<std::uint8_t>> m;
  for (const auto& r : rows) {
    std::vector<std::uint8_t> row(col.size(), 0);
    for (auto [k, b] : r)
      if (b) row[static_cast<std::size_t>(col[k])] = 1;
    m.push_back(std::move(row));
  }
  int rank = 0;
  const std::size_t ncol = col.size();
  for (std::size_t c = 0; c < ncol && rank < static_cast<int>(m.size()); ++c) {
    std::size_t piv = static_cast<std::size_t>(rank);
    while (piv < m.size() && !m[piv][c]) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[static_cast<std::size_t>(rank)]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i != static_cast<std::size_t>(rank) && m[i][c]) {
        for (std::size_t k = 0; k < ncol; ++k) m[i][k] ^= m[static_cast<std::size_t>(rank)][k];
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace

int independence_check(const std::vector<FoundPoint>& points) {
  if (points.empty()) return 0;
  const i64 D = points.front().D;
  // on y^2 = X^3 - D^2 X with X = D r / s the image is
  // (D r s, D (r - s) s, D (r + s) s) modulo squares
  std::vector<std::map<Key, int>> torsion(2), all;
  add_factors(torsion[0], 0, -1);
  add_factors(torsion[0], 1, -D);
  add_factors(torsion[0], 2, D);
  add_factors(torsion[1], 0, D);
  add_factors(torsion[1], 1, 2);
  add_factors(torsion[1], 2, 2 * D);
  all = torsion;
  for (const FoundPoint& p : points) {
    if (p.D != D) throw std::invalid_argument("independence_check: points on different curves");
    std::map<Key, int> v;
    for (int coord = 0; coord < 3; ++coord) add_factors(v, coord, D);
    add_factors(v, 0, p.r);
    add_factors(v, 0, p.s);
    add_factors(v, 1, p.r - p.s);
    add_factors(v, 1, p.s);
    add_factors(v, 2, p.r + p.s);
    add_factors(v, 2, p.s);
    all.push_back(std::move(v));
  }
  return gf2_rank(all) - gf2_rank(torsion);
}

}  // namespace congruum
