// Thin RAII layer over MPFR: a real and a complex type with explicit
// precision. Results of binary operations take the larger operand precision.
#pragma once

#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

namespace congruum::hp {

using Prec = mpfr_prec_t;

inline constexpr Prec kDefaultPrec = 256;

class Real {
 public:
  explicit Real(Prec prec = kDefaultPrec) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Real(double x, Prec prec) {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  Real(long x, Prec prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  Real(int x, Prec prec) : Real(static_cast<long>(x), prec) {}
  // Decimal or scientific literal, e.g. "1e-25".
  Real(const std::string& s, Prec prec) {
    mpfr_init2(v_, prec);
    mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN);
  }

  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }
  Prec prec() const { return mpfr_get_prec(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_ld() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  // base-2 exponent, or a very negative number for zero
  long exponent() const {
    return is_zero() ? -(1L << 40) : static_cast<long>(mpfr_get_exp(v_));
  }

  // Scientific notation with `digits` significant digits, e.g. "2.454e-01".
  std::string to_sci(int digits = 10) const;

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  Real& operator*=(long k);
  Real& operator/=(long k);

 private:
  mpfr_t v_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator*(const Real& a, long k);
Real operator*(long k, const Real& a);
Real operator/(const Real& a, long k);
Real operator-(const Real& a);

bool operator<(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
bool operator>=(const Real& a, const Real& b);
bool operator==(const Real& a, const Real& b);

Real sqrt(const Real& a);
Real abs(const Real& a);
Real exp(const Real& a);
Real log(const Real& a);
Real sin(const Real& a);
Real cos(const Real& a);
Real floor(const Real& a);
Real round(const Real& a);  // nearest integer, ties away from zero
Real pi(Prec prec);
Real agm(const Real& a, const Real& b);
Real pow2(long e, Prec prec);  // 2^e

struct Complex {
  Real re;
  Real im;

  explicit Complex(Prec prec = kDefaultPrec) : re(prec), im(prec) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  Prec prec() const { return re.prec() > im.prec() ? re.prec() : im.prec(); }

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& k);
Complex operator*(const Complex& a, long k);
Complex operator-(const Complex& a);

Complex conj(const Complex& a);
Real abs(const Complex& a);
Real norm(const Complex& a);  // |a|^2
// exp(2*pi*i*tau)
Complex exp_2pi_i(const Complex& tau);
// multiply by i^k
Complex mul_i_pow(const Complex& a, int k);

}  // namespace congruum::hp
