#include "congruum/modform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace congruum {

namespace {

// Pentagonal-number exponents and signs of prod (1 - x^k), up to x^limit.
std::vector<std::pair<std::size_t, int>> euler_terms(std::size_t limit) {
  std::vector<std::pair<std::size_t, int>> t{{0, 1}};
  for (std::size_t k = 1;; ++k) {
    std::size_t e1 = k * (3 * k - 1) / 2, e2 = k * (3 * k + 1) / 2;
    if (e1 > limit) break;
    int s = k % 2 ? -1 : 1;
    t.emplace_back(e1, s);
    if (e2 <= limit) t.emplace_back(e2, s);
  }
  return t;
}

// dense *= sparse(x^scale)
void mul_sparse(std::vector<i64>& dense, const std::vector<std::pair<std::size_t, int>>& sparse,
                std::size_t scale) {
  const std::size_t len = dense.size();
  std::vector<i64> out(len, 0);
  for (auto [e, s] : sparse) {
    const std::size_t shift = e * scale;
    if (shift >= len) break;
    for (std::size_t i = 0; i + shift < len; ++i) out[i + shift] += s * dense[i];
  }
  dense.swap(out);
}

void check_stride(QExpansion& f) {
  f.stride = 4;
  for (std::size_t n = 1; n < f.coeffs.size(); ++n)
    if (n % 4 != 1 && f.coeffs[n] != 0) f.stride = 1;
}

}  // namespace

QExpansion coefficients_level32(std::size_t n) {
  QExpansion f;
  f.level = 32;
  std::vector<i64> c(n, 0);
  if (n > 0) c[0] = 1;
  const auto e4 = euler_terms(n / 4 + 1);
  const auto e8 = euler_terms(n / 8 + 1);
  mul_sparse(c, e4, 4);
  mul_sparse(c, e4, 4);
  mul_sparse(c, e8, 8);
  mul_sparse(c, e8, 8);
  f.coeffs.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) f.coeffs[i + 1] = c[i];
  check_stride(f);
  return f;
}

i64 point_count(i64 p, i64 a4, i64 a6) {
  if (p < 2) throw std::invalid_argument("point_count: p must be prime");
  const u64 m = static_cast<u64>(p);
  auto add = [m](u64 a, u64 b) {
    const u64 s = a + b;
    return s >= m ? s - m : s;
  };
  // number of square roots of each residue, squares stepped by 2y + 1
  std::vector<std::uint8_t> roots(m, 0);
  for (u64 y = 0, sq = 0; y < m; ++y) {
    ++roots[sq];
    sq = add(sq, (2 * y + 1) % m);
  }
  // x^3 + a4 x + a6 by forward differences: f, f(x+1) - f(x), second and third
  const u64 A = static_cast<u64>(mod_pos(a4, p)), B = static_cast<u64>(mod_pos(a6, p));
  u64 f = B, d1 = add(1 % m, A), d2 = 6 % m;
  const u64 d3 = 6 % m;
  i64 count = 1;
  for (u64 x = 0; x < m; ++x) {
    count += roots[f];
    f = add(f, d1);
    d1 = add(d1, d2);
    d2 = add(d2, d3);
  }
  return count;
}

QExpansion coefficients_level64(std::size_t n) {
  QExpansion f;
  f.level = 64;
  f.coeffs.assign(n + 1, 0);
  if (n == 0) return f;
  std::vector<std::uint32_t> spf(n + 1, 0);
  for (std::size_t i = 2; i <= n; ++i) {
    if (spf[i]) continue;
    for (std::size_t j = i; j <= n; j += i)
      if (!spf[j]) spf[j] = static_cast<std::uint32_t>(i);
  }
  f.coeffs[1] = 1;
  for (std::size_t m = 2; m <= n; ++m) {
    const std::size_t p = spf[m];
    std::size_t rest = m, pk = 1;
    while (rest % p == 0) {
      rest /= p;
      pk *= p;
    }
    if (rest > 1) {
      f.coeffs[m] = f.coeffs[rest] * f.coeffs[pk];
    } else if (pk == p) {
      f.coeffs[m] = p == 2 ? 0 : static_cast<i64>(p) + 1 - point_count(static_cast<i64>(p), -4);
    } else {
      const i64 ap = f.coeffs[p];
      const i64 pp = p == 2 ? 0 : static_cast<i64>(p);
      f.coeffs[m] = ap * f.coeffs[m / p] - pp * f.coeffs[m / p / p];
    }
  }
  check_stride(f);
  return f;
}

std::size_t abel_terms_needed(double im_tau, long double target_err) {
  // |a_n| <= d(n) sqrt(n) <= 2n, so the tail past M is at most
  // 2 |q|^{M+1} / (1 - |q|)
  const double lq = -2 * M_PI * im_tau;
  const double one_minus = -std::expm1(lq);
  const double need = (static_cast<double>(std::log(target_err)) - std::log(2.0) + std::log(one_minus)) / lq;
  if (!(need < 1e15)) return std::numeric_limits<std::size_t>::max();
  return need < 1 ? 1 : static_cast<std::size_t>(std::ceil(need));
}

AbelValue abel_map(const QExpansion& f, const hp::Complex& tau, long double target_err) {
  const double y = tau.im.to_double();
  if (!(y > 0)) throw std::invalid_argument("abel_map: tau must lie in the upper half-plane");
  if (!(target_err > 0)) throw std::invalid_argument("abel_map: target_err must be positive");
  const std::size_t M = abel_terms_needed(y, target_err);
  if (M > f.length())
    throw AbelCeilingError("abel_map: Im(tau) too small for the available coefficients");

  const hp::Prec prec = tau.prec();
  const unsigned stride = f.stride;
  hp::Complex q = hp::exp_2pi_i(tau);
  hp::Complex step = q;
  for (unsigned i = 1; i < stride; ++i) step = step * q;

  hp::Real re(prec), im(prec), t1(prec), t2(prec), t3(prec);
  hp::Real pr = q.re, pi = q.im;  // q^n
  std::size_t n = 1;
  for (; n <= M; n += stride) {
    const i64 a = f.coeffs[n];
    if (a != 0) {
      mpfr_mul_si(t1.raw(), pr.raw(), a, MPFR_RNDN);
      mpfr_div_ui(t1.raw(), t1.raw(), n, MPFR_RNDN);
      mpfr_add(re.raw(), re.raw(), t1.raw(), MPFR_RNDN);
      mpfr_mul_si(t1.raw(), pi.raw(), a, MPFR_RNDN);
      mpfr_div_ui(t1.raw(), t1.raw(), n, MPFR_RNDN);
      mpfr_add(im.raw(), im.raw(), t1.raw(), MPFR_RNDN);
    }
    if (n + stride > M) break;
    // (pr + i pi) *= step
    mpfr_mul(t1.raw(), pr.raw(), step.re.raw(), MPFR_RNDN);
    mpfr_mul(t2.raw(), pi.raw(), step.im.raw(), MPFR_RNDN);
    mpfr_mul(t3.raw(), pr.raw(), step.im.raw(), MPFR_RNDN);
    mpfr_sub(pr.raw(), t1.raw(), t2.raw(), MPFR_RNDN);
    mpfr_mul(t1.raw(), pi.raw(), step.re.raw(), MPFR_RNDN);
    mpfr_add(pi.raw(), t1.raw(), t3.raw(), MPFR_RNDN);
  }

  AbelValue out{hp::Complex(std::move(re), std::move(im)), 0, M};
  const double aq = std::exp(-2 * M_PI * y);
  const double magnitude = std::max(1.0, 2 * aq / -std::expm1(-2 * M_PI * y));
  out.err = target_err + static_cast<long double>(M) * std::ldexp(1.0L, 3 - static_cast<int>(prec)) * magnitude;
  return out;
}

}  // namespace congruum
