#include "congruum/torus.hpp"

#include <cmath>

namespace congruum {

Lattice periods(Parent parent, hp::Prec prec) {
  Lattice L;
  L.parent = parent;
  const hp::Real two(2L, prec);
  if (parent == Parent::E1) {
    L.omega1 = hp::pi(prec) / hp::agm(hp::sqrt(two), hp::Real(1L, prec));
    L.g2 = 4;
  } else {
    L.omega1 = hp::pi(prec) / hp::agm(two, hp::sqrt(two));
    L.g2 = 16;
  }
  return L;
}

namespace {

hp::Real frac(const hp::Real& x) { return x - hp::floor(x); }

}  // namespace

TorusPoint reduce_mod_lattice(const hp::Complex& z, const Lattice& L, long double err) {
  hp::Real x = frac(z.re / L.omega1), y = frac(z.im / L.omega1);
  return TorusPoint{hp::Complex(x * L.omega1, y * L.omega1), err, L};
}

hp::Real dist_to_half_lattice(const TorusPoint& p) {
  const hp::Real half = p.lattice.omega1 / 2L;
  hp::Real x = p.z.re / half, y = p.z.im / half;
  x -= hp::round(x);
  y -= hp::round(y);
  return hp::sqrt(x * x + y * y) * half;
}

hp::Complex weierstrass_p(const hp::Complex& z, const Lattice& L) {
  const hp::Prec prec = std::max(z.prec(), L.omega1.prec());
  // shift v = z / omega1 so that |Re v|, |Im v| <= 1/2
  hp::Real vr = z.re / L.omega1, vi = z.im / L.omega1;
  vr -= hp::round(vr);
  vi -= hp::round(vi);
  if (vr.is_zero() && vi.is_zero()) throw std::domain_error("weierstrass_p: pole at a lattice point");
  const hp::Complex u = hp::exp_2pi_i(hp::Complex(vr, vi));
  const hp::Complex uinv = hp::Complex(hp::Real(1L, prec), hp::Real(prec)) / u;
  const hp::Real q = hp::exp(-(hp::pi(prec) * 2L));
  const hp::Complex one(hp::Real(1L, prec), hp::Real(prec));

  auto term = [&](const hp::Complex& w) {
    hp::Complex d = one - w;
    return w / (d * d);
  };
  hp::Complex s = term(u);
  s.re += hp::Real(1L, prec) / 12L;
  hp::Real qn(1L, prec);
  // terms decay like exp(-2 pi n + pi)
  const long n_max = static_cast<long>(prec * std::log(2.0) / (2 * M_PI)) + 3;
  for (long n = 1; n <= n_max; ++n) {
    qn *= q;
    s += term(u * qn) + term(uinv * qn);
    hp::Real d = hp::Real(1L, prec) - qn;
    s.re -= qn * 2L / (d * d);
  }
  // (2 pi i / omega1)^2 = -(2 pi / omega1)^2
  hp::Real k = hp::pi(prec) * 2L / L.omega1;
  return s * (-(k * k));
}

std::optional<std::pair<i64, i64>> recognize_rational(const TorusPoint& p, i64 height_bound) {
  const hp::Complex w = weierstrass_p(p.z, p.lattice);
  const double x = w.re.to_double();
  const double slope = 2 * std::sqrt(std::abs(4 * x * x * x - static_cast<double>(p.lattice.g2) * x));
  const long double err_x = slope * p.err + std::ldexp(1.0L + std::abs(x), 20 - static_cast<int>(w.prec()));
  const double h = static_cast<double>(height_bound);
  if (!(err_x < 1 / (2 * static_cast<long double>(h) * h)))
    throw InsufficientPrecision("recognize_rational: error bound too large for the height bound");
  if (std::abs(w.im.to_ld()) > err_x) return std::nullopt;

  // continued fraction convergents of Re wp
  i64 p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  hp::Real t = w.re;
  for (int it = 0; it < 200; ++it) {
    hp::Real a = hp::floor(t);
    const double ad = a.to_double();
    if (std::abs(ad) > 4e18) break;
    const i64 ai = a.to_long();
    const i128 p2 = (i128)ai * p1 + p0, q2 = (i128)ai * q1 + q0;
    if (q2 >= height_bound || p2 >= height_bound || -p2 >= height_bound) break;
    p0 = p1;
    q0 = q1;
    p1 = static_cast<i64>(p2);
    q1 = static_cast<i64>(q2);
    hp::Real diff = hp::abs(w.re - hp::Real(p1, w.prec()) / q1);
    if (diff.to_ld() <= err_x) return std::make_pair(p1, q1);
    hp::Real f = t - a;
    if (f.is_zero()) break;
    t = hp::Real(1L, w.prec()) / f;
  }
  return std::nullopt;
}

std::optional<mpq_class> recognize_rational_big(const TorusPoint& p) {
  const hp::Complex w = weierstrass_p(p.z, p.lattice);
  const double x = w.re.to_double();
  const double slope = 2 * std::sqrt(std::abs(4 * x * x * x - static_cast<double>(p.lattice.g2) * x));
  const long double err_x = slope * p.err + std::ldexp(1.0L + std::abs(x), 20 - static_cast<int>(w.prec()));
  if (std::abs(w.im.to_ld()) > err_x) return std::nullopt;

  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0, a;
  hp::Real t = w.re;
  std::optional<mpq_class> best;
  for (;;) {
    const hp::Real fl = hp::floor(t);
    mpfr_get_z(a.get_mpz_t(), fl.raw(), MPFR_RNDN);
    mpz_class p2 = a * p1 + p0, q2 = a * q1 + q0;
    hp::Real q2r(w.prec());
    mpfr_set_z(q2r.raw(), q2.get_mpz_t(), MPFR_RNDN);
    const long double q2l = q2r.to_ld();
    if (2 * q2l * q2l * err_x >= 1) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    mpq_class c(p1, q1);
    hp::Real cr(w.prec());
    mpfr_set_q(cr.raw(), c.get_mpq_t(), MPFR_RNDN);
    if (hp::abs(w.re - cr).to_ld() <= err_x) best = c;
    hp::Real f = t - fl;
    if (f.is_zero()) break;
    t = hp::Real(1L, w.prec()) / f;
  }
  return best;
}

}  // namespace congruum
