#include "congruum/curves.hpp"

#include <stdexcept>

namespace congruum {

const char* to_string(TwistCls c) {
  switch (c) {
    case TwistCls::S5: return "S5";
    case TwistCls::S7: return "S7";
    case TwistCls::I6: return "I6";
    case TwistCls::I14: return "I14";
    case TwistCls::EvenSign: return "EVEN_SIGN";
  }
  return "?";
}

const char* to_string(TwoBehavior b) {
  switch (b) {
    case TwoBehavior::Split: return "split";
    case TwoBehavior::Ramified: return "ramified";
    case TwoBehavior::Inert: return "inert";
  }
  return "?";
}

TwistCls parse_cls(const std::string& s) {
  if (s == "S5") return TwistCls::S5;
  if (s == "S7") return TwistCls::S7;
  if (s == "I6") return TwistCls::I6;
  if (s == "I14") return TwistCls::I14;
  throw std::invalid_argument("unknown class '" + s + "'");
}

ResidueMask class_mask(TwistCls c) {
  switch (c) {
    case TwistCls::S5: return residues_mod8({5});
    case TwistCls::S7: return residues_mod8({7});
    case TwistCls::I6: return residues_mod16({6});
    case TwistCls::I14: return residues_mod16({14});
    case TwistCls::EvenSign: return residues_mod8({1, 2, 3});
  }
  return 0;
}

TwistClass classify(i64 D) {
  if (D == 0) throw std::invalid_argument("classify: D must be nonzero");
  TwistClass t;
  t.D = squarefree_split(D).s;
  t.absD = t.D < 0 ? -t.D : t.D;
  if (t.absD % 4 == 0) throw std::logic_error("classify: squarefree part divisible by 4");
  t.parent = t.absD % 2 ? Parent::E1 : Parent::E2;
  switch (t.absD % 8) {
    case 5: t.cls = TwistCls::S5; break;
    case 7: t.cls = TwistCls::S7; break;
    case 6: t.cls = t.absD % 16 == 6 ? TwistCls::I6 : TwistCls::I14; break;
    default: t.cls = TwistCls::EvenSign; break;
  }
  t.sign = t.cls == TwistCls::EvenSign ? 1 : -1;
  return t;
}

FieldData field_data(const TwistClass& t) {
  if (t.sign != -1) throw std::invalid_argument("field_data: needs an odd-sign twist");
  FieldData f;
  f.radicand = t.parent == Parent::E1 ? -t.absD : -(t.absD / 2);
  f.disc_K = mod_pos(f.radicand, 4) == 1 ? f.radicand : 4 * f.radicand;
  if (f.disc_K % 2 == 0) {
    f.two = TwoBehavior::Ramified;
  } else {
    f.two = mod_pos(f.disc_K, 8) == 1 ? TwoBehavior::Split : TwoBehavior::Inert;
  }
  f.class_number = class_number(f.disc_K);
  return f;
}

i128 CurveModel::discriminant() const {
  const i128 b2 = (i128)a1 * a1 + 4 * (i128)a2;
  const i128 b4 = 2 * (i128)a4 + (i128)a1 * a3;
  const i128 b6 = (i128)a3 * a3 + 4 * (i128)a6;
  const i128 b8 = (i128)a1 * a1 * a6 + 4 * (i128)a2 * a6 - (i128)a1 * a3 * a4 +
                  (i128)a2 * a3 * a3 - (i128)a4 * a4;
  return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

CurveModel model(i64 D) {
  CurveModel m;
  m.a4 = -D * D;
  m.conductor = conductor(D);
  return m;
}

std::array<CurveModel, 3> isogenous_models(i64 D) {
  if (D == 0) throw std::invalid_argument("isogenous_models: D must be nonzero");
  const i64 d2 = D * D, d3 = d2 * D;
  const i64 cond = conductor(D);
  CurveModel a, b, c;
  a.a4 = 4 * d2;
  b.a4 = -11 * d2;
  b.a6 = 14 * d3;
  c.a4 = -11 * d2;
  c.a6 = -14 * d3;
  a.conductor = b.conductor = c.conductor = cond;
  return {a, b, c};
}

std::array<RationalPoint, 4> two_torsion(i64 D) {
  RationalPoint o;
  o.infinity = true;
  return {o, RationalPoint{0, 1, false}, RationalPoint{D, 1, false}, RationalPoint{-D, 1, false}};
}

i64 conductor(i64 D) {
  const i64 s = squarefree_split(D).s;
  const i64 a = s < 0 ? -s : s;
  return a % 2 ? 32 * a * a : 16 * a * a;
}

bool is_nontorsion_x(i64 D, const mpq_class& x) {
  if (D == 0) return false;
  const mpz_class& n = x.get_num();
  const mpz_class& m = x.get_den();
  if (n == 0 || n == m || n == -m) return false;
  // D y^2 = x^3 - x  <=>  D n m (n - m)(n + m) is a square
  const mpz_class P = mpz_class(static_cast<long>(D)) * n * m * (n - m) * (n + m);
  return sgn(P) > 0 && mpz_perfect_square_p(P.get_mpz_t()) != 0;
}

}  // namespace congruum
