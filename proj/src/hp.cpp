#include "congruum/hp.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

namespace congruum::hp {

namespace {

Prec max_prec(const Real& a, const Real& b) { return std::max(a.prec(), b.prec()); }

}  // namespace

std::string Real::to_sci(int digits) const {
  if (digits < 1) digits = 1;
  if (is_zero()) {
    // keep the format stable for exact zeros
    std::string s = "0.";
    s.append(static_cast<std::size_t>(digits - 1), '0');
    return s + "e+00";
  }
  char fmt[32];
  std::snprintf(fmt, sizeof fmt, "%%.%dRNe", digits - 1);
  char* out = nullptr;
  mpfr_asprintf(&out, fmt, v_);
  std::string s(out);
  mpfr_free_str(out);
  return s;
}

Real& Real::operator+=(const Real& o) {
  if (o.prec() > prec()) mpfr_prec_round(v_, o.prec(), MPFR_RNDN);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(const Real& o) {
  if (o.prec() > prec()) mpfr_prec_round(v_, o.prec(), MPFR_RNDN);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const Real& o) {
  if (o.prec() > prec()) mpfr_prec_round(v_, o.prec(), MPFR_RNDN);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const Real& o) {
  if (o.prec() > prec()) mpfr_prec_round(v_, o.prec(), MPFR_RNDN);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(long k) {
  mpfr_mul_si(v_, v_, k, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(long k) {
  mpfr_div_si(v_, v_, k, MPFR_RNDN);
  return *this;
}

Real operator+(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_add(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
Real operator-(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_sub(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_mul(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_div(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, long k) {
  Real r(a.prec());
  mpfr_mul_si(r.raw(), a.raw(), k, MPFR_RNDN);
  return r;
}
Real operator*(long k, const Real& a) { return a * k; }
Real operator/(const Real& a, long k) {
  Real r(a.prec());
  mpfr_div_si(r.raw(), a.raw(), k, MPFR_RNDN);
  return r;
}
Real operator-(const Real& a) {
  Real r(a.prec());
  mpfr_neg(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.raw(), b.raw()) != 0; }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.raw(), b.raw()) != 0; }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.raw(), b.raw()) != 0; }
bool operator>=(const Real& a, const Real& b) {
  return mpfr_greaterequal_p(a.raw(), b.raw()) != 0;
}
bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.raw(), b.raw()) != 0; }

#define CONGRUUM_UNARY(name, fn)            \
  Real name(const Real& a) {                \
    Real r(a.prec());                       \
    fn(r.raw(), a.raw(), MPFR_RNDN);        \
    return r;                               \
  }

CONGRUUM_UNARY(sqrt, mpfr_sqrt)
CONGRUUM_UNARY(abs, mpfr_abs)
CONGRUUM_UNARY(exp, mpfr_exp)
CONGRUUM_UNARY(log, mpfr_log)
CONGRUUM_UNARY(sin, mpfr_sin)
CONGRUUM_UNARY(cos, mpfr_cos)

#undef CONGRUUM_UNARY

Real floor(const Real& a) {
  Real r(a.prec());
  mpfr_floor(r.raw(), a.raw());
  return r;
}

Real round(const Real& a) {
  Real r(a.prec());
  mpfr_round(r.raw(), a.raw());
  return r;
}

Real pi(Prec prec) {
  Real r(prec);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

Real agm(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_agm(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}

Real pow2(long e, Prec prec) {
  Real r(1L, prec);
  mpfr_mul_2si(r.raw(), r.raw(), e, MPFR_RNDN);
  return r;
}

Complex& Complex::operator+=(const Complex& o) {
  re += o.re;
  im += o.im;
  return *this;
}
Complex& Complex::operator-=(const Complex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}
Complex& Complex::operator*=(const Complex& o) {
  *this = *this * o;
  return *this;
}

Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
Complex operator*(const Complex& a, const Complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Complex operator/(const Complex& a, const Complex& b) {
  Real n = norm(b);
  return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}
Complex operator*(const Complex& a, const Real& k) { return {a.re * k, a.im * k}; }
Complex operator*(const Complex& a, long k) { return {a.re * k, a.im * k}; }
Complex operator-(const Complex& a) { return {-a.re, -a.im}; }

Complex conj(const Complex& a) { return {a.re, -a.im}; }

Real norm(const Complex& a) { return a.re * a.re + a.im * a.im; }

Real abs(const Complex& a) {
  Real r(a.prec());
  mpfr_hypot(r.raw(), a.re.raw(), a.im.raw(), MPFR_RNDN);
  return r;
}

Complex exp_2pi_i(const Complex& tau) {
  const Prec p = tau.prec();
  Real two_pi = pi(p) * 2L;
  Real mag = exp(-(two_pi * tau.im));
  Real arg = two_pi * tau.re;
  Real s(p), c(p);
  mpfr_sin_cos(s.raw(), c.raw(), arg.raw(), MPFR_RNDN);
  return {mag * c, mag * s};
}

Complex mul_i_pow(const Complex& a, int k) {
  switch (((k % 4) + 4) % 4) {
    case 0:
      return a;
    case 1:
      return {-a.im, a.re};
    case 2:
      return {-a.re, -a.im};
    default:
      return {a.im, -a.re};
  }
}

}  // namespace congruum::hp
