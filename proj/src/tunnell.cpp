#include "congruum/tunnell.hpp"

#include <stdexcept>

namespace congruum {

namespace {

// #{(x, y, z) : a x^2 + y^2 + c z^2 = m}
i64 count_ternary(i64 a, i64 c, i64 m) {
  i64 count = 0;
  for (i64 x = 0; a * x * x <= m; ++x) {
    for (i64 z = 0; a * x * x + c * z * z <= m; ++z) {
      const i64 rest = m - a * x * x - c * z * z;
      i64 y;
      if (!is_square(rest, &y)) continue;
      const i64 mult = (x ? 2 : 1) * (z ? 2 : 1) * (y ? 2 : 1);
      count += mult;
    }
  }
  return count;
}

i64 count_ternary_triple(i64 a, i64 c, i64 m) {
  i64 count = 0;
  const i64 bx = static_cast<i64>(isqrt(static_cast<u64>(m / a)));
  const i64 by = static_cast<i64>(isqrt(static_cast<u64>(m)));
  const i64 bz = static_cast<i64>(isqrt(static_cast<u64>(m / c)));
  for (i64 x = -bx; x <= bx; ++x)
    for (i64 y = -by; y <= by; ++y)
      for (i64 z = -bz; z <= bz; ++z)
        if (a * x * x + y * y + c * z * z == m) ++count;
  return count;
}

void check_eligible(i64 n) {
  if (n <= 0 || !is_squarefree(static_cast<u64>(n)))
    throw std::invalid_argument("tunnell_counts: n must be squarefree and positive");
  const i64 r = n % 8;
  if (r != 1 && r != 2 && r != 3)
    throw std::invalid_argument("tunnell_counts: n must be 1, 2 or 3 mod 8");
}

template <class Count>
TunnellCounts counts_with(i64 n, Count count) {
  check_eligible(n);
  TunnellCounts t;
  t.n = n;
  const i64 a = n % 2 ? 2 : 4;
  const i64 m = n % 2 ? n : n / 2;
  t.count_a = count(a, 32, m);
  t.count_b = count(a, 8, m);
  t.vanishing = 2 * t.count_a == t.count_b;
  return t;
}

}  // namespace

TunnellCounts tunnell_counts(i64 n) { return counts_with(n, count_ternary); }

TunnellCounts tunnell_counts_triple(i64 n) { return counts_with(n, count_ternary_triple); }

std::vector<EvenSignRow> even_sign_report(i64 bound, i64 search_height) {
  std::vector<EvenSignRow> rows;
  sieve_squarefree_classes(static_cast<u64>(bound), residues_mod8({1, 2, 3}), [&](u64 n) {
    EvenSignRow row;
    row.n = static_cast<i64>(n);
    const TunnellCounts t = tunnell_counts(row.n);
    row.L_vanishes = t.vanishing;
    row.rank0_proved = !t.vanishing;
    if (t.vanishing && search_height > 0) row.point = naive_search(row.n, search_height);
    rows.push_back(std::move(row));
  });
  return rows;
}

}  // namespace congruum
