// Exact integer kernel: squarefree parts, Kronecker symbols, squarefree
// sieving over residue classes, and reduced binary quadratic forms.
#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace congruum {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

struct SquarefreeSplit {
  i64 s;  // squarefree, same sign as the input
  i64 c;  // n = c*c*s
};

SquarefreeSplit squarefree_split(i64 n);
bool is_squarefree(u64 n);
// signed squarefree part of a 128-bit value with |n| < 2^126; trial division
i128 squarefree_part(i128 n);

u64 isqrt(u64 n);
u128 isqrt128(u128 n);
bool is_square(i64 n, i64* root = nullptr);
bool is_square128(i128 n, i128* root = nullptr);

int kronecker(i64 a, i64 n);

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 a, u64 e, u64 m);
// inverse of a modulo m (gcd must be 1); result in [0, m)
i64 invmod(i64 a, i64 m);
// floor division and nonnegative remainder for signed operands
i64 floor_div(i64 a, i64 b);
i64 mod_pos(i64 a, i64 m);

std::vector<std::pair<u64, int>> factor(u64 n);
std::vector<u64> primes_below(u64 bound);

// A set of residues modulo 16, one bit per residue.
using ResidueMask = std::uint16_t;

ResidueMask residues_mod8(std::initializer_list<int> r8);
ResidueMask residues_mod16(std::initializer_list<int> r16);

// Segmented sieve over [1, bound): calls fn for every squarefree n whose
// residue mod 16 is in the mask, in increasing order. Returns the count.
u64 sieve_squarefree_classes(u64 bound, ResidueMask classes,
                             const std::function<void(u64)>& fn = {});
// Same over [lo, hi].
u64 sieve_squarefree_range(u64 lo, u64 hi, ResidueMask classes,
                           const std::function<void(u64)>& fn = {});

struct QuadForm {
  i64 a = 0;
  i64 b = 0;
  i64 c = 0;

  i64 disc() const { return b * b - 4 * a * c; }
  bool primitive() const;
  bool reduced() const;
  friend bool operator==(const QuadForm&, const QuadForm&) = default;
  friend auto operator<=>(const QuadForm&, const QuadForm&) = default;
};

// SL2(Z)-reduction of a positive definite form.
QuadForm reduce_form(QuadForm f);
// All reduced primitive forms of a negative discriminant, sorted.
std::vector<QuadForm> reduced_forms(i64 disc);
i64 class_number(i64 disc);

}  // namespace congruum
