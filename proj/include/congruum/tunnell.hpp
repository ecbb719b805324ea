// Tunnell's criterion for the even-sign twists: L(E_n, 1) = 0 exactly when
// the two ternary representation counts satisfy count_a = count_b / 2.
#pragma once

#include <optional>
#include <vector>

#include "congruum/arith.hpp"
#include "congruum/search.hpp"

namespace congruum {

struct TunnellCounts {
  i64 n = 0;
  i64 count_a = 0;  // 2x^2 + y^2 + 32z^2 (odd n), 4x^2 + y^2 + 32z^2 (even n, on n/2)
  i64 count_b = 0;  // 2x^2 + y^2 + 8z^2, 4x^2 + y^2 + 8z^2
  bool vanishing = false;
};

TunnellCounts tunnell_counts(i64 n);
// Same counts by a plain triple loop; used to cross-check.
TunnellCounts tunnell_counts_triple(i64 n);

struct EvenSignRow {
  i64 n = 0;
  bool rank0_proved = false;
  bool L_vanishes = false;
  std::optional<FoundPoint> point;  // searched only when L vanishes
};

// Every squarefree n < bound with n = 1, 2, 3 mod 8; points searched with
// naive_search up to search_height when L vanishes.
std::vector<EvenSignRow> even_sign_report(i64 bound, i64 search_height = 0);

}  // namespace congruum
