// q-expansions of the CM newforms of level 32 and 64 and the Abel map
// z(tau) = sum a_n q^n / n with an explicit error bound.
#pragma once

#include <stdexcept>
#include <vector>

#include "congruum/arith.hpp"
#include "congruum/hp.hpp"

namespace congruum {

struct QExpansion {
  int level = 0;
  std::vector<i64> coeffs;  // coeffs[n] = a_n, coeffs[0] unused
  // a_n vanishes unless n = 1 mod stride
  unsigned stride = 1;

  std::size_t length() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  i64 operator[](std::size_t n) const { return coeffs[n]; }
};

// q * prod (1 - q^{4n})^2 (1 - q^{8n})^2
QExpansion coefficients_level32(std::size_t n);
// newform attached to y^2 = x^3 - 4x, from point counts and the Hecke recursion
QExpansion coefficients_level64(std::size_t n);

// #E(F_p) including the point at infinity, for y^2 = x^3 + a4 x + a6.
i64 point_count(i64 p, i64 a4, i64 a6 = 0);

class AbelCeilingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AbelValue {
  hp::Complex z;
  long double err = 0;  // absolute error bound: tail + rounding
  std::size_t terms = 0;
};

// Sum of the series to absolute accuracy target_err. Throws AbelCeilingError
// when the truncation point would exceed the available coefficients.
AbelValue abel_map(const QExpansion& f, const hp::Complex& tau, long double target_err);

// Number of terms needed for a given Im(tau) and target.
std::size_t abel_terms_needed(double im_tau, long double target_err);

}  // namespace congruum
