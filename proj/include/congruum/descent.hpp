// Descent via the 2-isogeny between y^2 = x^3 - D^2 x and y^2 = x^3 + 4 D^2 x:
// Selmer group sizes, the resulting rank bound, and a point search on the
// homogeneous spaces w^2 = d u^4 + e v^4.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "congruum/arith.hpp"

namespace congruum {

struct SelmerBound {
  i64 D = 0;
  int dim_phi = 0;
  int dim_phihat = 0;
  int rank_upper = 0;
  bool passes_rank3 = false;
};

// w^2 = A u^4 + B v^4 has a nontrivial solution over R
bool real_solvable(i64 A, i64 B);
// ... over Q_p: closed forms for odd p where they apply, otherwise the search
bool padic_solvable(i64 A, i64 B, u64 p);
// Residue-class search with Hensel certification; valid for every prime.
bool padic_solvable_search(i64 A, i64 B, u64 p);

// Torsor coefficients d with w^2 = d u^4 + e v^4 everywhere locally solvable.
// phi side: e = -D^2/d, d | D with sign; phi-hat side: e = 4D^2/d, d | 2D.
std::vector<i64> selmer_phi_elements(i64 D);
std::vector<i64> selmer_phihat_elements(i64 D);

int selmer_phi(i64 D);
int selmer_phihat(i64 D);
SelmerBound selmer_bound(i64 D);
bool rank3_filter(i64 D);

// A solution of one of the Selmer torsors outside the torsion image, giving a
// point of infinite order on D y^2 = x^3 - x with x = x_num / x_den.
struct TorsorPoint {
  i64 D = 0;
  i64 d = 0;
  bool hat = false;  // phi-hat side
  i64 u = 0, v = 0;
  i128 w = 0;
  i128 x_num = 0, x_den = 1;

  // exact check that x lies on D y^2 = x^3 - x and is not 2-torsion
  bool verify() const;
  std::string x_string() const;
};

// Searches coprime u, v <= bound on all nontrivial Selmer torsors in order
// of increasing max(u, v).
std::optional<TorsorPoint> torsor_search(i64 D, i64 bound);

}  // namespace congruum
