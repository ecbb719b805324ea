// The congruent-number twists E_D : D y^2 = x^3 - x, handled internally as
// y^2 = x^3 - D^2 x, together with their class data and the CM field K_D.
#pragma once

#include <gmpxx.h>

#include <array>
#include <string>

#include "congruum/arith.hpp"

namespace congruum {

enum class TwistCls { S5, S7, I6, I14, EvenSign };
enum class Parent { E1, E2 };
enum class TwoBehavior { Split, Ramified, Inert };

const char* to_string(TwistCls c);
const char* to_string(TwoBehavior b);
// Parses "S5", "S7", "I6", "I14"; throws on anything else.
TwistCls parse_cls(const std::string& s);
// Residues mod 16 belonging to a class.
ResidueMask class_mask(TwistCls c);

struct TwistClass {
  i64 D = 0;     // squarefree
  i64 absD = 0;
  TwistCls cls = TwistCls::EvenSign;
  int sign = 1;  // sign of the functional equation
  Parent parent = Parent::E1;
};

struct FieldData {
  i64 radicand = 0;  // K_D = Q(sqrt(radicand))
  i64 disc_K = 0;
  TwoBehavior two = TwoBehavior::Split;
  i64 class_number = 0;
};

// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
struct CurveModel {
  i64 a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
  i64 conductor = 0;  // 0 when not recorded

  i128 discriminant() const;
};

struct RationalPoint {
  i64 x_num = 0;
  i64 x_den = 1;
  bool infinity = false;
};

TwistClass classify(i64 D);
FieldData field_data(const TwistClass& t);
// y^2 = x^3 - D^2 x
CurveModel model(i64 D);
// Integral models of D y^2 = x^3 + 4x, D y^2 = x^3 - 11x + 14 and
// D y^2 = x^3 - 11x - 14, scaled to y^2 = x^3 + a4 D^2 x + a6 D^3.
std::array<CurveModel, 3> isogenous_models(i64 D);
// O, (0,0), (D,0), (-D,0) on y^2 = x^3 - D^2 x
std::array<RationalPoint, 4> two_torsion(i64 D);
// 32 D^2 for odd D, 16 D^2 = 64 (D/2)^2 for even D
i64 conductor(i64 D);

// Exact test that x is the abscissa of a rational point of infinite order
// on D y^2 = x^3 - x.
bool is_nontorsion_x(i64 D, const mpq_class& x);

}  // namespace congruum
