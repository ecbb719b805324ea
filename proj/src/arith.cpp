#include "congruum/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace congruum {

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && (u128)r * r > n) --r;
  while ((u128)(r + 1) * (r + 1) <= n) ++r;
  return r;
}

u128 isqrt128(u128 n) {
  if (n < ((u128)1 << 64) - 1) return isqrt(static_cast<u64>(n));
  u128 r = static_cast<u128>(std::sqrt(static_cast<long double>(n)));
  // long double has a 64-bit mantissa, so a couple of Newton steps settle it
  for (int i = 0; i < 4 && r > 0; ++i) r = (r + n / r) / 2;
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_square(i64 n, i64* root) {
  if (n < 0) return false;
  static constexpr std::uint64_t kMod64Squares = 0x0202021202030213ULL;
  if (!((kMod64Squares >> (n & 63)) & 1)) return false;
  u64 r = isqrt(static_cast<u64>(n));
  if (r * r != static_cast<u64>(n)) return false;
  if (root) *root = static_cast<i64>(r);
  return true;
}

bool is_square128(i128 n, i128* root) {
  if (n < 0) return false;
  static constexpr std::uint64_t kMod64Squares = 0x0202021202030213ULL;
  if (!((kMod64Squares >> static_cast<unsigned>(n & 63)) & 1)) return false;
  u128 r = isqrt128(static_cast<u128>(n));
  if (r * r != static_cast<u128>(n)) return false;
  if (root) *root = static_cast<i128>(r);
  return true;
}

SquarefreeSplit squarefree_split(i64 n) {
  if (n == 0) throw std::invalid_argument("squarefree_split: n must be nonzero");
  i64 sign = n < 0 ? -1 : 1;
  u64 m = n < 0 ? static_cast<u64>(-(n + 1)) + 1 : static_cast<u64>(n);
  u64 s = 1, c = 1;
  for (auto [p, e] : factor(m)) {
    for (int i = 0; i < e / 2; ++i) c *= p;
    if (e % 2) s *= p;
  }
  return {sign * static_cast<i64>(s), static_cast<i64>(c)};
}

bool is_squarefree(u64 n) {
  if (n == 0) return false;
  if (n % 4 == 0) return false;
  for (u64 p = 3; p * p <= n; p += 2) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return false;
    }
  }
  return true;
}

i128 squarefree_part(i128 n) {
  if (n == 0) return 0;
  i128 sign = n < 0 ? -1 : 1;
  u128 m = static_cast<u128>(n < 0 ? -n : n);
  u128 s = 1;
  auto strip = [&](u128 p) {
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e % 2) s *= p;
  };
  strip(2);
  for (u128 p = 3; p * p <= m; p += 2) strip(p);
  s *= m;
  return sign * static_cast<i128>(s);
}

int kronecker(i64 a, i64 n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  int v = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++v;
  }
  if (v > 0) {
    if (a % 2 == 0) return 0;
    i64 a8 = mod_pos(a, 8);
    if ((v % 2) && (a8 == 3 || a8 == 5)) result = -result;
  }
  // Jacobi symbol (a / n) for odd positive n
  i64 x = mod_pos(a, n);
  i64 m = n;
  while (x != 0) {
    while (x % 2 == 0) {
      x /= 2;
      i64 r = m % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(x, m);
    if (x % 4 == 3 && m % 4 == 3) result = -result;
    x %= m;
  }
  return m == 1 ? result : 0;
}

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i64 mod_pos(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

i64 invmod(i64 a, i64 m) {
  i64 g = m, x = 0, x1 = 1, r = mod_pos(a, m);
  while (r != 0) {
    i64 q = g / r;
    std::tie(g, r) = std::make_pair(r, g - q * r);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw std::domain_error("invmod: not invertible");
  return mod_pos(x, m);
}

std::vector<std::pair<u64, int>> factor(u64 n) {
  std::vector<std::pair<u64, int>> out;
  if (n <= 1) return out;
  auto strip = [&](u64 p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  };
  strip(2);
  strip(3);
  for (u64 p = 5; p * p <= n; p += 6) {
    strip(p);
    strip(p + 2);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<u64> primes_below(u64 bound) {
  std::vector<u64> out;
  if (bound <= 2) return out;
  std::vector<bool> composite(bound, false);
  for (u64 i = 2; i < bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j < bound; j += i) composite[j] = true;
  }
  return out;
}

ResidueMask residues_mod8(std::initializer_list<int> r8) {
  ResidueMask m = 0;
  for (int r : r8) {
    m |= static_cast<ResidueMask>(1u << (r % 8));
    m |= static_cast<ResidueMask>(1u << (r % 8 + 8));
  }
  return m;
}

ResidueMask residues_mod16(std::initializer_list<int> r16) {
  ResidueMask m = 0;
  for (int r : r16) m |= static_cast<ResidueMask>(1u << (r % 16));
  return m;
}

u64 sieve_squarefree_classes(u64 bound, ResidueMask classes,
                             const std::function<void(u64)>& fn) {
  if (bound <= 1) return 0;
  return sieve_squarefree_range(1, bound - 1, classes, fn);
}

u64 sieve_squarefree_range(u64 lo, u64 hi, ResidueMask classes,
                           const std::function<void(u64)>& fn) {
  if (lo == 0) lo = 1;
  if (hi < lo) return 0;
  const u64 root = isqrt(hi);
  const std::vector<u64> primes = primes_below(root + 1);
  constexpr u64 kSegment = 1 << 18;
  std::vector<std::uint8_t> bad(kSegment);
  u64 count = 0;
  for (u64 base = lo; base <= hi; base += kSegment) {
    const u64 top = std::min(hi, base + kSegment - 1);
    std::fill(bad.begin(), bad.end(), 0);
    for (u64 p : primes) {
      const u64 q = p * p;
      if (q > top) break;
      u64 start = (base + q - 1) / q * q;
      for (u64 j = start; j <= top; j += q) bad[j - base] = 1;
    }
    for (u64 n = base; n <= top; ++n) {
      if (bad[n - base] || !((classes >> (n % 16)) & 1)) continue;
      ++count;
      if (fn) fn(n);
    }
    if (top == hi) break;
  }
  return count;
}

bool QuadForm::primitive() const {
  return std::gcd(std::gcd(a, b), c) == 1;
}

bool QuadForm::reduced() const {
  if (!(std::abs(b) <= a && a <= c)) return false;
  if ((std::abs(b) == a || a == c) && b < 0) return false;
  return true;
}

QuadForm reduce_form(QuadForm f) {
  if (f.a <= 0 || f.disc() >= 0)
    throw std::invalid_argument("reduce_form: form must be positive definite");
  const i64 d = f.disc();
  for (;;) {
    if (f.b > f.a || f.b <= -f.a) {
      // b -> b + 2ak lands in (-a, a]
      i64 k = floor_div(f.a - f.b, 2 * f.a);
      f.b += 2 * f.a * k;
      f.c = (f.b * f.b - d) / (4 * f.a);
    }
    if (f.a > f.c) {
      std::swap(f.a, f.c);
      f.b = -f.b;
      continue;
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
  }
}

std::vector<QuadForm> reduced_forms(i64 disc) {
  if (disc >= 0) throw std::invalid_argument("reduced_forms: discriminant must be negative");
  if (mod_pos(disc, 4) == 2 || mod_pos(disc, 4) == 3)
    throw std::invalid_argument("reduced_forms: discriminant must be 0 or 1 mod 4");
  std::vector<QuadForm> out;
  const i64 n = -disc;
  for (i64 a = 1; 3 * a * a <= n; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      i64 num = b * b + n;
      if (num % (4 * a)) continue;
      i64 c = num / (4 * a);
      QuadForm f{a, b, c};
      if (c < a || (a == c && b < 0)) continue;
      if (!f.primitive()) continue;
      out.push_back(f);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

i64 class_number(i64 disc) { return static_cast<i64>(reduced_forms(disc).size()); }

}  // namespace congruum
