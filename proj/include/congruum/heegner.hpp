// CM points on X0(32) and X0(64), their reduction toward the cusp at
// infinity, and the point P_D = z_K - conj(z_K) on the parent torus.
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "congruum/curves.hpp"
#include "congruum/modform.hpp"
#include "congruum/torus.hpp"

namespace congruum {

struct GaussInt {
  i64 re = 0;
  i64 im = 0;
};

struct CMDisc {
  i64 disc = 0;
  int c = 1;  // disc = c^2 disc_K
  int N = 32;
  // square roots B of disc mod 4N, taken mod 2N, one per pair {B, -B}
  std::vector<i64> orientations;

  i64 B0() const { return orientations.front(); }
};

struct CMPoint {
  QuadForm form;  // [A, B, C] with N | A
  i64 disc = 0;
};

struct Reduction {
  QuadForm form;   // reduced representative
  int ipow = 0;    // z(tau) = i^ipow z(tau') + m c_W
  GaussInt m;
  int fricke_steps = 0;
};

enum class Verdict { Nontorsion, TorsionCandidate, Indeterminate };
const char* to_string(Verdict v);
Verdict parse_verdict(const std::string& s);

struct ClassifyConfig {
  double threshold_nontorsion = 1e-8;
  double threshold_torsion = 1e-20;
  std::vector<hp::Prec> ladder{256, 512, 1024};
  bool use_normalizer = false;
  // with the normalizer off, still use it for a point whose plain reduction
  // leaves Im(tau) too small for the coefficient ceiling
  bool normalizer_fallback = true;
};

struct Classification {
  i64 D = 0;
  Verdict verdict = Verdict::Indeterminate;
  hp::Real dist;      // distance to (1/2) Lambda in units of omega1
  double err = 0;     // error bound on dist, same units
  hp::Prec prec_bits = 0;
  i64 class_number = 0;
  i64 cm_disc = 0;
  i64 orientation = 0;  // B0 of the orbit that decided the verdict
  double min_im = 0;    // smallest Im(tau) summed
};

// The smallest disc = c^2 disc_K, c in {1, 2, 4, 8}, that is a square mod 4N.
CMDisc cm_discriminant(const TwistClass& t, const FieldData& f);

// One Heegner form [N a, B, C] per class of discriminant disc, B = B0 mod 2N.
std::vector<CMPoint> enumerate_cm_points(i64 disc, i64 B0, int N);

hp::Complex form_tau(const QuadForm& f, hp::Prec prec);
double form_im(const QuadForm& f);

// Gamma0(N) reduction by best (c, d) steps; with the normalizer also
// tau -> tau - k/4 and the Fricke involution, recorded so that
// z(tau) = i^ipow z(tau') + m c_W, with eps the Fricke eigenvalue.
Reduction reduce_toward_cusp_infinity(const QuadForm& f, int N, bool use_normalizer,
                                      int fricke_eps = -1);

// Per-level data shared by all computations: coefficients, Fricke
// calibration and the Abel-map lattice.
class HeegnerContext {
 public:
  explicit HeegnerContext(std::size_t coeff_length = 1 << 15);

  struct Level {
    int N = 0;
    int eps = 0;        // Fricke eigenvalue
    hp::Complex c_W;    // z(W tau) = eps z(tau) + c_W
    long double c_W_err = 0;
    hp::Complex gen;    // Abel-map lattice is gen * Z[i]
    Lattice parent;
  };

  const QExpansion& expansion(int N) const { return N == 32 ? f32_ : f64_; }
  // Calibrated once per (N, prec); thread-safe.
  const Level& level(int N, hp::Prec prec) const;

 private:
  QExpansion f32_, f64_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, hp::Prec>, std::unique_ptr<Level>> levels_;
};

struct PDResult {
  TorusPoint w;       // reduced mod the parent lattice
  hp::Real dist;      // dist / omega1
  long double err = 0;  // bound on the error of dist
  i64 class_number = 0;
  double min_im = 0;
};

// P_D for the orbit with orientation B0; target is the per-D accuracy.
PDResult compute_PD(const TwistClass& t, const HeegnerContext& ctx, hp::Prec prec, i64 B0,
                    bool use_normalizer, long double target, bool fallback = false);
PDResult compute_PD(const TwistClass& t, const HeegnerContext& ctx, hp::Prec prec,
                    bool use_normalizer = false);

Classification classify_PD(const TwistClass& t, const HeegnerContext& ctx,
                           const ClassifyConfig& config = {});

// A rational point recovered from a high-precision P_D: x of some Q with
// m Q = P_D + T (m <= max_divisor, T torsion) read off as an exact rational
// and checked on D y^2 = x^3 - x. nullopt if no candidate fits the precision.
std::optional<mpq_class> heegner_lift(const TwistClass& t, const HeegnerContext& ctx,
                                      hp::Prec prec = 1024, int max_divisor = 8);

}  // namespace congruum
