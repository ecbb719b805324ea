#include "congruum/heegner.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace congruum {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Nontorsion: return "Nontorsion";
    case Verdict::TorsionCandidate: return "TorsionCandidate";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "?";
}

Verdict parse_verdict(const std::string& s) {
  if (s == "Nontorsion") return Verdict::Nontorsion;
  if (s == "TorsionCandidate") return Verdict::TorsionCandidate;
  if (s == "Indeterminate") return Verdict::Indeterminate;
  throw std::invalid_argument("unknown verdict '" + s + "'");
}

CMDisc cm_discriminant(const TwistClass& t, const FieldData& f) {
  if (t.sign != -1) throw std::invalid_argument("cm_discriminant: needs an odd-sign twist");
  CMDisc out;
  out.N = t.parent == Parent::E1 ? 32 : 64;
  const i64 N = out.N;
  for (int c : {1, 2, 4, 8}) {
    const i64 d = static_cast<i64>(c) * c * f.disc_K;
    std::vector<i64> roots;
    for (i64 B = 0; B < 2 * N; ++B) {
      if (mod_pos(B * B - d, 4 * N) != 0) continue;
      if (B <= mod_pos(-B, 2 * N)) roots.push_back(B);
    }
    if (!roots.empty()) {
      out.disc = d;
      out.c = c;
      out.orientations = std::move(roots);
      return out;
    }
  }
  throw std::logic_error("cm_discriminant: no admissible discriminant for D = " + std::to_string(t.D));
}

std::vector<CMPoint> enumerate_cm_points(i64 disc, i64 B0, int N) {
  if (mod_pos(B0 * B0 - disc, 4 * static_cast<i64>(N)) != 0)
    throw std::invalid_argument("enumerate_cm_points: B0 is not a square root of disc mod 4N");
  std::vector<CMPoint> out;
  for (QuadForm g : reduced_forms(disc)) {
    // move to an equivalent form whose first coefficient is odd
    if (g.a % 2 == 0) {
      if (g.c % 2) {
        g = QuadForm{g.c, -g.b, g.a};
      } else {
        g = QuadForm{g.a + g.b + g.c, g.b + 2 * g.c, g.c};
      }
    }
    const i64 t = mod_pos(invmod(g.a, N) * mod_pos((B0 - g.b) / 2, N), N);
    const i64 B = g.b + 2 * g.a * t;
    const i64 A = static_cast<i64>(N) * g.a;
    const i64 C = (B * B - disc) / (4 * A);
    out.push_back(CMPoint{QuadForm{A, B, C}, disc});
  }
  return out;
}

hp::Complex form_tau(const QuadForm& f, hp::Prec prec) {
  const hp::Real twoA(2 * f.a, prec);
  hp::Real re = hp::Real(-f.b, prec) / twoA;
  hp::Real im = hp::sqrt(hp::Real(-f.disc(), prec)) / twoA;
  return {re, im};
}

double form_im(const QuadForm& f) {
  return std::sqrt(static_cast<double>(-f.disc())) / (2.0 * static_cast<double>(f.a));
}

namespace {

constexpr i128 kCoeffLimit = (i128)1 << 62;

QuadForm make_primitive(i128 a, i128 b, i128 c) {
  i128 g = a < 0 ? -a : a;
  for (i128 x : {b, c}) {
    i128 y = x < 0 ? -x : x;
    while (y) {
      i128 r = g % y;
      g = y;
      y = r;
    }
  }
  if (g > 1) {
    a /= g;
    b /= g;
    c /= g;
  }
  for (i128 x : {a, b, c})
    if (x >= kCoeffLimit || -x >= kCoeffLimit)
      throw std::overflow_error("reduce_toward_cusp_infinity: coefficient overflow");
  return QuadForm{static_cast<i64>(a), static_cast<i64>(b), static_cast<i64>(c)};
}

// tau -> tau + n with n chosen so that -A < B <= A
QuadForm translate(const QuadForm& f) {
  const i64 n = floor_div(f.a - f.b, 2 * f.a);
  if (n == 0) return f;
  const i128 a = f.a, b = f.b, c = f.c;
  const i128 bn = b + 2 * a * n;
  return make_primitive(a, bn, (bn * bn - (b * b - 4 * a * c)) / (4 * a));
}

i128 value_at(const QuadForm& f, i128 c, i128 d) {
  return (i128)f.a * d * d - (i128)f.b * c * d + (i128)f.c * c * c;
}

// one best (c, d) step with N | c that strictly lowers A; false if none
bool gamma0_step(QuadForm& f, int N) {
  const double abs_disc = static_cast<double>(-f.disc());
  const double c_max = 2.0 * static_cast<double>(f.a) / std::sqrt(abs_disc);
  i128 best = f.a;
  i64 best_c = 0, best_d = 0;
  for (i64 c = N; static_cast<double>(c) < c_max + 1; c += N) {
    const double center = static_cast<double>(f.b) * static_cast<double>(c) / (2.0 * static_cast<double>(f.a));
    const i64 d0 = static_cast<i64>(std::floor(center));
    for (int dir : {-1, 1}) {
      for (i64 d = dir < 0 ? d0 : d0 + 1;; d += dir) {
        const i128 v = value_at(f, c, d);
        // the value is convex in d, so stop once it can no longer improve
        if (v >= best && (dir < 0 ? static_cast<double>(d) < center : static_cast<double>(d) > center)) break;
        if (std::gcd(c, d) == 1 && v < best) {
          best = v;
          best_c = c;
          best_d = d;
        }
      }
    }
  }
  if (best_c == 0) return false;
  const i64 c = best_c, d = best_d;
  const i128 a_ = invmod(d, c);
  const i128 b_ = (a_ * d - 1) / c;
  const i128 A = f.a, B = f.b, C = f.c;
  const i128 nA = A * d * d - B * c * d + C * c * c;
  const i128 nB = -2 * A * d * b_ + B * (a_ * d + b_ * c) - 2 * C * c * a_;
  const i128 nC = A * b_ * b_ - B * a_ * b_ + C * a_ * a_;
  f = make_primitive(nA, nB, nC);
  return true;
}

QuadForm gamma0_reduce(QuadForm f, int N) {
  f = translate(f);
  while (gamma0_step(f, N)) f = translate(f);
  return f;
}

}  // namespace

Reduction reduce_toward_cusp_infinity(const QuadForm& f0, int N, bool use_normalizer,
                                      int fricke_eps) {
  if (f0.a <= 0 || f0.disc() >= 0)
    throw std::invalid_argument("reduce_toward_cusp_infinity: form must be positive definite");
  Reduction r;
  r.form = gamma0_reduce(f0, N);
  if (!use_normalizer) return r;
  for (int iter = 0; iter < 10000; ++iter) {
    QuadForm& f = r.form;
    // k = round(4 Re tau), Re tau = -B / (2A)
    const i64 k = floor_div(-4 * f.b + f.a, 2 * f.a);
    if (k != 0) {
      // tau' = tau - k/4 is a root of Q(4X + kY, 4Y)
      const i128 A = f.a, B = f.b, C = f.c;
      f = make_primitive(16 * A, 8 * A * k + 16 * B, A * k * k + 4 * B * k + 16 * C);
      r.ipow = static_cast<int>(mod_pos(r.ipow + k, 4));
    }
    // |tau|^2 = C / A
    if ((i128)f.c * N < f.a) {
      // tau' = -1/(N tau) is a root of [C N^2, -B N, A]
      const i128 A = f.a, B = f.b, C = f.c;
      const i128 n = N;
      // z(tau) = eps z(tau') + c_W, so m gains i^ipow
      switch (r.ipow) {
        case 0: ++r.m.re; break;
        case 1: ++r.m.im; break;
        case 2: --r.m.re; break;
        default: --r.m.im; break;
      }
      if (fricke_eps == -1) r.ipow = (r.ipow + 2) % 4;
      f = make_primitive(C * n * n, -B * n, A);
      ++r.fricke_steps;
      f = gamma0_reduce(f, N);
      continue;
    }
    return r;
  }
  throw std::runtime_error("reduce_toward_cusp_infinity: normalizer loop did not settle");
}

namespace {

hp::Complex reduce_mod_gen(const hp::Complex& z, const hp::Complex& gen) {
  hp::Complex u = z / gen;
  u.re -= hp::round(u.re);
  u.im -= hp::round(u.im);
  return u * gen;
}

}  // namespace

HeegnerContext::HeegnerContext(std::size_t coeff_length)
    : f32_(coefficients_level32(coeff_length)), f64_(coefficients_level64(coeff_length)) {}

const HeegnerContext::Level& HeegnerContext::level(int N, hp::Prec prec) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto key = std::make_pair(N, prec);
  auto it = levels_.find(key);
  if (it != levels_.end()) return *it->second;
  if (N != 32 && N != 64) throw std::invalid_argument("HeegnerContext: level must be 32 or 64");

  auto lv = std::make_unique<Level>();
  lv->N = N;
  lv->parent = periods(N == 32 ? Parent::E1 : Parent::E2, prec);
  if (N == 32) {
    hp::Real h = lv->parent.omega1 / 2L;
    lv->gen = hp::Complex(h, h);
  } else {
    lv->gen = hp::Complex(lv->parent.omega1, hp::Real(prec));
  }

  const QExpansion& f = expansion(N);
  const long double target = std::ldexp(1.0L, -static_cast<int>(prec) + 40);
  const hp::Real zero(prec);
  const hp::Complex tau0(zero, hp::Real(1L, prec) / hp::sqrt(hp::Real(static_cast<long>(N), prec)));
  const hp::Complex tau1(hp::Real(1L, prec) / 7L, hp::Real(1L, prec) / 5L);
  const hp::Complex wtau1 =
      hp::Complex(hp::Real(-1L, prec), zero) / (tau1 * static_cast<long>(N));
  const AbelValue z0 = abel_map(f, tau0, target);
  const AbelValue z1 = abel_map(f, tau1, target);
  const AbelValue zw = abel_map(f, wtau1, target);
  for (int eps : {-1, 1}) {
    hp::Complex c = z0.z * static_cast<long>(1 - eps);
    hp::Complex resid = reduce_mod_gen(zw.z - z1.z * static_cast<long>(eps) - c, lv->gen);
    if (hp::abs(resid).to_double() < 1e-20) {
      lv->eps = eps;
      lv->c_W = c;
      lv->c_W_err = 2 * z0.err;
      break;
    }
  }
  if (lv->eps == 0) throw std::logic_error("HeegnerContext: Fricke calibration failed");
  auto& slot = levels_[key];
  slot = std::move(lv);
  return *slot;
}

PDResult compute_PD(const TwistClass& t, const HeegnerContext& ctx, hp::Prec prec, i64 B0,
                    bool use_normalizer, long double target, bool fallback) {
  const FieldData fd = field_data(t);
  const CMDisc cd = cm_discriminant(t, fd);
  const auto& lv = ctx.level(cd.N, prec);
  const QExpansion& f = ctx.expansion(cd.N);
  const std::vector<CMPoint> pts = enumerate_cm_points(cd.disc, B0, cd.N);
  const long double per_point = target / (4.0L * static_cast<long double>(pts.size() + 1));

  PDResult out;
  out.class_number = static_cast<i64>(pts.size());
  out.min_im = 1e300;
  hp::Complex z(prec);
  GaussInt msum;
  long double err = 0;
  for (const CMPoint& p : pts) {
    Reduction red = reduce_toward_cusp_infinity(p.form, cd.N, use_normalizer, lv.eps);
    if (fallback && !use_normalizer && abel_terms_needed(form_im(red.form), per_point) > f.length())
      red = reduce_toward_cusp_infinity(p.form, cd.N, true, lv.eps);
    out.min_im = std::min(out.min_im, form_im(red.form));
    const AbelValue av = abel_map(f, form_tau(red.form, prec), per_point);
    z += hp::mul_i_pow(av.z, red.ipow);
    err += av.err;
    msum.re += red.m.re;
    msum.im += red.m.im;
  }
  z += lv.c_W * hp::Complex(hp::Real(msum.re, prec), hp::Real(msum.im, prec));
  err += static_cast<long double>(std::abs(msum.re) + std::abs(msum.im)) * lv.c_W_err;

  // w = z - conj(z) = 2i Im z
  hp::Complex w(hp::Real(prec), z.im * 2L);
  const long double err_w = 2 * err;
  out.w = reduce_mod_lattice(w, lv.parent, err_w);
  out.dist = dist_to_half_lattice(out.w) / lv.parent.omega1;
  out.err = err_w / lv.parent.omega1.to_ld() + std::ldexp(1.0L, 8 - static_cast<int>(prec));
  return out;
}

PDResult compute_PD(const TwistClass& t, const HeegnerContext& ctx, hp::Prec prec,
                    bool use_normalizer) {
  const CMDisc cd = cm_discriminant(t, field_data(t));
  return compute_PD(t, ctx, prec, cd.B0(), use_normalizer, 1e-25);
}

Classification classify_PD(const TwistClass& t, const HeegnerContext& ctx,
                           const ClassifyConfig& config) {
  const FieldData fd = field_data(t);
  const CMDisc cd = cm_discriminant(t, fd);
  Classification out;
  out.D = t.D;
  out.cm_disc = cd.disc;
  out.class_number = class_number(cd.disc);
  out.dist = hp::Real(config.ladder.empty() ? hp::kDefaultPrec : config.ladder.front());

  enum class State { Open, Torsion };
  std::vector<State> state(cd.orientations.size(), State::Open);
  std::vector<hp::Real> dists(cd.orientations.size());
  std::vector<double> errs(cd.orientations.size(), 0);
  double target = 1e-25;
  for (std::size_t rung = 0; rung < config.ladder.size(); ++rung, target *= 1e-20) {
    const hp::Prec prec = config.ladder[rung];
    out.prec_bits = prec;
    for (std::size_t i = 0; i < cd.orientations.size(); ++i) {
      if (state[i] == State::Torsion) continue;
      PDResult r;
      try {
        r = compute_PD(t, ctx, prec, cd.orientations[i], config.use_normalizer, target,
                       config.normalizer_fallback);
      } catch (const AbelCeilingError&) {
        continue;
      }
      out.min_im = out.min_im == 0 ? r.min_im : std::min(out.min_im, r.min_im);
      dists[i] = r.dist;
      errs[i] = static_cast<double>(r.err);
      const double d = r.dist.to_double();
      if (d >= config.threshold_nontorsion && r.err < config.threshold_nontorsion / 10) {
        out.verdict = Verdict::Nontorsion;
        out.dist = r.dist;
        out.err = static_cast<double>(r.err);
        out.orientation = cd.orientations[i];
        return out;
      }
      if (d <= config.threshold_torsion && r.err < config.threshold_torsion / 10)
        state[i] = State::Torsion;
    }
    bool all_torsion = true;
    for (State s : state) all_torsion = all_torsion && s == State::Torsion;
    if (all_torsion) {
      out.verdict = Verdict::TorsionCandidate;
      std::size_t worst = 0;
      for (std::size_t i = 1; i < dists.size(); ++i)
        if (dists[i] > dists[worst]) worst = i;
      out.dist = dists[worst];
      out.err = errs[worst];
      out.orientation = cd.orientations[worst];
      return out;
    }
  }
  out.verdict = Verdict::Indeterminate;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state[i] == State::Open) {
      out.dist = dists[i];
      out.err = errs[i];
      out.orientation = cd.orientations[i];
      break;
    }
  }
  return out;
}

std::optional<mpq_class> heegner_lift(const TwistClass& t, const HeegnerContext& ctx,
                                      hp::Prec prec, int max_divisor) {
  const CMDisc cd = cm_discriminant(t, field_data(t));
  // accuracy just above the rounding floor of the working precision
  const long double target = std::ldexp(1.0L, -static_cast<int>(prec) + 64);
  for (i64 B0 : cd.orientations) {
    PDResult r;
    try {
      r = compute_PD(t, ctx, prec, B0, true, target);
    } catch (const AbelCeilingError&) {
      continue;
    }
    if (r.dist.to_double() < 1e-8) continue;
    const Lattice& L = r.w.lattice;
    // At level 32 the Abel map lands on C / Lambda' with Lambda' ⊃ Lambda of
    // index 2, so only 2 w is sure to be rational on the parent. Then
    // P = m Q + T: try every (P + lambda) / m with lambda in Lambda / m Lambda.
    for (int m = 1; m <= max_divisor; ++m)
      for (int k = 1; k <= 2; ++k)
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b) {
            TorusPoint q = r.w;
            q.z = hp::Complex(q.z.re * static_cast<long>(k) + L.omega1 * static_cast<long>(a),
                              q.z.im * static_cast<long>(k) + L.omega1 * static_cast<long>(b));
            q.z.re /= m;
            q.z.im /= m;
            q.err = r.w.err * k / m;
            const std::optional<mpq_class> x = recognize_rational_big(q);
            if (!x) continue;
            // the parent is y^2 = x^3 - x or y^2 = x^3 - 4x; the twist differs by
            // the sign of x and, for E2, a factor 2
            const mpq_class base = t.parent == Parent::E2 ? mpq_class(*x / 2) : *x;
            for (const mpq_class& c : {base, mpq_class(-base)})
              if (is_nontorsion_x(t.absD, c)) return c;
          }
  }
  return std::nullopt;
}

}  // namespace congruum
