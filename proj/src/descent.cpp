#include "congruum/descent.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace congruum {

namespace {

int vp(i64 x, u64 p, i64* unit) {
  int v = 0;
  const i64 pp = static_cast<i64>(p);
  while (x % pp == 0) {
    x /= pp;
    ++v;
  }
  if (unit) *unit = x;
  return v;
}

bool is_qr(i64 x, u64 p) {
  const u64 r = static_cast<u64>(mod_pos(x, static_cast<i64>(p)));
  return r != 0 && powmod(r, (p - 1) / 2, p) == 1;
}

bool is_fourth_power(i64 x, u64 p) {
  const u64 r = static_cast<u64>(mod_pos(x, static_cast<i64>(p)));
  const u64 g = std::gcd<u64>(4, p - 1);
  return r != 0 && powmod(r, (p - 1) / g, p) == 1;
}

class LocalSearch {
 public:
  LocalSearch(i64 A, i64 B, u64 p) : p_(p) {
    M_ = 1;
    K_ = 0;
    while (M_ <= ((u128)1 << 62) / p) {
      M_ *= p;
      ++K_;
    }
    A_ = to_mod(A);
    B_ = to_mod(B);
  }

  bool run() {
    // charts (u, 1) with u in Z_p and (1, v) with v in pZ_p
    if (search(false, 0, 0)) return true;
    return search(true, 1, 0);
  }

 private:
  u128 to_mod(i64 x) const {
    const i128 m = static_cast<i128>(M_);
    i128 r = static_cast<i128>(x) % m;
    if (r < 0) r += m;
    return static_cast<u128>(r);
  }
  u128 mul(u128 a, u128 b) const { return a * b % M_; }
  u128 pow4(u128 x) const {
    u128 x2 = mul(x, x);
    return mul(x2, x2);
  }
  int val(u128 x) const {
    if (x == 0) return K_;
    int v = 0;
    while (x % p_ == 0) {
      x /= p_;
      ++v;
    }
    return v;
  }

  // f(x) = A x^4 + B on the first chart, A + B x^4 on the second
  bool search(bool second, int k, u128 x0) {
    const u128 x4 = pow4(x0);
    const u128 F = second ? (A_ + mul(B_, x4)) % M_ : (mul(A_, x4) + B_) % M_;
    const int vF = val(F);
    if (vF < k) {
      const int need = p_ == 2 ? 3 : 1;
      if (k - vF >= need) {
        if (vF % 2) return false;
        u128 unit = F;
        for (int i = 0; i < vF; ++i) unit /= p_;
        if (p_ == 2) return unit % 8 == 1;
        return powmod(static_cast<u64>(unit % p_), (p_ - 1) / 2, p_) == 1;
      }
    } else {
      const u128 x3 = mul(mul(x0, x0), x0);
      const u128 dF = mul(4 % M_, mul(second ? B_ : A_, x3));
      const int vD = val(dF);
      // Hensel: a root lifts once v(f) > 2 v(f')
      if (vD < K_ && vF > 2 * vD && 2 * vD + 1 < K_) return true;
    }
    if (k >= K_ - 4) throw std::runtime_error("padic_solvable_search: precision exhausted");
    u128 pk = 1;
    for (int i = 0; i < k; ++i) pk *= p_;
    for (u64 t = 0; t < p_; ++t)
      if (search(second, k + 1, (x0 + pk * t) % M_)) return true;
    return false;
  }

  u64 p_;
  u128 M_;
  int K_;
  u128 A_, B_;
};

std::vector<i64> signed_divisors(i64 n, bool negatives) {
  std::vector<i64> divs{1};
  for (auto [p, e] : factor(static_cast<u64>(n))) {
    const std::size_t sz = divs.size();
    for (std::size_t i = 0; i < sz; ++i) divs.push_back(divs[i] * static_cast<i64>(p));
  }
  if (negatives) {
    const std::size_t sz = divs.size();
    for (std::size_t i = 0; i < sz; ++i) divs.push_back(-divs[i]);
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

std::vector<u64> bad_primes(i64 absD) {
  std::vector<u64> ps{2};
  for (auto [p, e] : factor(static_cast<u64>(absD)))
    if (p != 2) ps.push_back(p);
  return ps;
}

bool everywhere_solvable(i64 A, i64 B, const std::vector<u64>& primes) {
  if (!real_solvable(A, B)) return false;
  for (u64 p : primes)
    if (!padic_solvable(A, B, p)) return false;
  return true;
}

i64 squarefree_abs(i64 D) {
  const i64 s = squarefree_split(D).s;
  return s < 0 ? -s : s;
}

std::string to_string128(i128 x) {
  if (x == 0) return "0";
  bool neg = x < 0;
  u128 u = neg ? static_cast<u128>(-x) : static_cast<u128>(x);
  std::string s;
  while (u) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

mpz_class to_mpz(i128 x) {
  mpz_class r(to_string128(x));
  return r;
}

}  // namespace

bool real_solvable(i64 A, i64 B) { return A > 0 || B > 0; }

bool padic_solvable_search(i64 A, i64 B, u64 p) {
  if (A == 0 || B == 0) throw std::invalid_argument("padic_solvable_search: coefficients must be nonzero");
  return LocalSearch(A, B, p).run();
}

bool padic_solvable(i64 A, i64 B, u64 p) {
  if (p != 2) {
    i64 a1, b1;
    const int a = vp(A, p, &a1), b = vp(B, p, &b1);
    if (a == 0 && b == 0) return true;
    if ((a == 0 && b == 2) || (a == 2 && b == 0)) return is_qr(a1, p) || is_qr(b1, p);
    if (a == 1 && b == 1) {
      // -b1/a1 must be a fourth power mod p
      const i64 pp = static_cast<i64>(p);
      const i64 q = static_cast<i64>(mulmod(static_cast<u64>(mod_pos(-b1, pp)),
                                            static_cast<u64>(invmod(a1, pp)), p));
      return is_fourth_power(q, p);
    }
  }
  return padic_solvable_search(A, B, p);
}

std::vector<i64> selmer_phi_elements(i64 D) {
  const i64 aD = squarefree_abs(D);
  const auto primes = bad_primes(aD);
  std::vector<i64> out;
  for (i64 d : signed_divisors(aD, true))
    if (everywhere_solvable(d, -(aD / d) * aD, primes)) out.push_back(d);
  return out;
}

std::vector<i64> selmer_phihat_elements(i64 D) {
  const i64 aD = squarefree_abs(D);
  const auto primes = bad_primes(aD);
  std::vector<i64> out;
  const i64 twoD = aD % 2 ? 2 * aD : aD;
  for (i64 d : signed_divisors(twoD, true)) {
    // d | 4 D^2 squarefree, e = 4 D^2 / d
    const i64 e = 4 * aD * aD / d;
    if (everywhere_solvable(d, e, primes)) out.push_back(d);
  }
  return out;
}

namespace {

int log2_exact(std::size_t n) {
  int k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  if ((std::size_t{1} << k) != n) throw std::logic_error("Selmer set size is not a power of two");
  return k;
}

}  // namespace

int selmer_phi(i64 D) { return log2_exact(selmer_phi_elements(D).size()); }
int selmer_phihat(i64 D) { return log2_exact(selmer_phihat_elements(D).size()); }

SelmerBound selmer_bound(i64 D) {
  SelmerBound s;
  s.D = squarefree_abs(D);
  s.dim_phi = selmer_phi(D);
  s.dim_phihat = selmer_phihat(D);
  s.rank_upper = s.dim_phi + s.dim_phihat - 2;
  s.passes_rank3 = s.rank_upper >= 3;
  return s;
}

bool rank3_filter(i64 D) { return selmer_bound(D).passes_rank3; }

bool TorsorPoint::verify() const {
  if (x_den <= 0 || x_num == 0 || x_num == x_den || x_num == -x_den) return false;
  const mpz_class n = to_mpz(x_num), m = to_mpz(x_den);
  if (gcd(n, m) != 1) return false;
  // D y^2 = x^3 - x  <=>  n m (n - m)(n + m) = D (y m^2)^2
  mpz_class P = n * m * (n - m) * (n + m);
  const mpz_class dd(static_cast<long>(D));
  if (P < 0 || !mpz_divisible_p(P.get_mpz_t(), dd.get_mpz_t())) return false;
  P /= dd;
  return mpz_perfect_square_p(P.get_mpz_t()) != 0;
}

std::string TorsorPoint::x_string() const { return to_string128(x_num) + "/" + to_string128(x_den); }

std::optional<TorsorPoint> torsor_search(i64 D, i64 bound) {
  const i64 aD = squarefree_abs(D);
  struct Torsor {
    i64 d, e;
    bool hat;
  };
  std::vector<Torsor> ts;
  for (i64 d : selmer_phi_elements(aD))
    if (d != 1 && d != -1 && d != aD && d != -aD) ts.push_back({d, -(aD / d) * aD, false});
  for (i64 d : selmer_phihat_elements(aD))
    if (d != 1) ts.push_back({d, 4 * aD * aD / d, true});
  if (ts.empty()) return std::nullopt;

  std::vector<i128> p4(static_cast<std::size_t>(bound) + 1);
  for (i64 u = 0; u <= bound; ++u) p4[static_cast<std::size_t>(u)] = (i128)u * u * u * u;

  auto attempt = [&](const Torsor& t, i64 u, i64 v) -> std::optional<TorsorPoint> {
    const i128 val = t.d * p4[static_cast<std::size_t>(u)] + t.e * p4[static_cast<std::size_t>(v)];
    i128 w;
    if (!is_square128(val, &w)) return std::nullopt;
    TorsorPoint tp;
    tp.D = aD;
    tp.d = t.d;
    tp.hat = t.hat;
    tp.u = u;
    tp.v = v;
    tp.w = w;
    i128 num, den;
    if (!t.hat) {
      // X = d u^2 / v^2 on y^2 = X^3 - D^2 X, x = X / D
      num = (i128)t.d * u * u;
      den = (i128)aD * v * v;
    } else {
      // dual isogeny image: X = w^2 / (4 u^2 v^2)
      num = w * w;
      den = (i128)4 * aD * u * u * v * v;
    }
    i128 g = num < 0 ? -num : num, h = den;
    while (h) {
      i128 r = g % h;
      g = h;
      h = r;
    }
    tp.x_num = num / g;
    tp.x_den = den / g;
    if (!tp.verify()) return std::nullopt;
    return tp;
  };

  for (i64 m = 1; m <= bound; ++m) {
    for (const Torsor& t : ts) {
      for (i64 k = 1; k <= m; ++k) {
        if (std::gcd(k, m) != 1) continue;
        if (auto r = attempt(t, m, k)) return r;
        if (k != m)
          if (auto r = attempt(t, k, m)) return r;
      }
    }
  }
  return std::nullopt;
}

}  // namespace congruum
