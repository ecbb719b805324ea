// Period lattices of E1 : y^2 = x^3 - x and E2 : y^2 = x^3 - 4x, points on
// the torus C / Lambda, and the Weierstrass map back to x-coordinates.
#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <utility>

#include "congruum/curves.hpp"
#include "congruum/hp.hpp"

namespace congruum {

// Square lattice omega1 Z + omega1 i Z; omega1 is the real period of dx/(2y).
struct Lattice {
  Parent parent = Parent::E1;
  hp::Real omega1;
  i64 g2 = 4;  // (wp')^2 = 4 wp^3 - g2 wp

  hp::Complex omega2() const { return {hp::Real(omega1.prec()), omega1}; }
};

struct TorusPoint {
  hp::Complex z;
  long double err = 0;
  Lattice lattice;
};

class InsufficientPrecision : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Lattice periods(Parent parent, hp::Prec prec = hp::kDefaultPrec);

// Representative with 0 <= Re z / omega1 < 1 and 0 <= Im z / omega1 < 1.
TorusPoint reduce_mod_lattice(const hp::Complex& z, const Lattice& L, long double err = 0);

// Distance from z to (1/2) Lambda, in absolute units.
hp::Real dist_to_half_lattice(const TorusPoint& p);

// Weierstrass wp for the lattice, through its q-expansion.
hp::Complex weierstrass_p(const hp::Complex& z, const Lattice& L);

// x = wp(z) as a fraction num/den with |num|, den < height_bound, if the value
// is real and within its error bound of such a fraction. Throws
// InsufficientPrecision when the error bound cannot separate fractions of
// that height.
std::optional<std::pair<i64, i64>> recognize_rational(const TorusPoint& p, i64 height_bound);

// Unbounded height: the last continued-fraction convergent of Re wp(z) that
// is within the error bound while 2 q^2 err < 1 still makes it unique.
std::optional<mpq_class> recognize_rational_big(const TorusPoint& p);

}  // namespace congruum
