#ifndef BLOCHJAC_FIXTURES_HPP
#define BLOCHJAC_FIXTURES_HPP

#include <array>
#include <cstdint>
#include <random>

#include "blochjac/operator.hpp"

namespace blochjac {

/// a_n = I, b_n = 0.
PeriodicOperator free_operator(int p, int m);

/// The p = 2, m = 2 family with a_n = (1 β_{2n+1}; 0 1) and
/// b_n = (α_{2n} β_{2n}; β_{2n} α_{2n+1}), indices of α, β taken mod 4.
PeriodicOperator two_by_two_family(const std::array<Rational, 4>& alpha, const std::array<Rational, 4>& beta);

/// Diagonal a, b: all β_n = 0.
PeriodicOperator example1_diag(const std::array<Rational, 4>& alpha);
/// α_n = 0, β_n = β.
PeriodicOperator example2_const(const Rational& beta);
/// α = (1, 0, -1, 0), β = (t, 0, 0, 0).
PeriodicOperator example3(const Rational& t);
/// α = (0, 1, 0, 1), β = (t, 0, 0, 0).
PeriodicOperator example4(const Rational& t);

/// Block-diagonal operator made of m scalar operators; a[j][n], b[j][n] for
/// component j and site n = 1..p.
PeriodicOperator diagonal_operator(const std::vector<std::vector<Rational>>& a,
                                   const std::vector<std::vector<Rational>>& b);

/// Seeded random operator with small-denominator rational entries:
/// a_n = L U with unit lower L and upper U (diagonal in {±1, ±2}), entries of
/// b_n in [-2, 2] with step 1/2.
PeriodicOperator random_operator(std::mt19937_64& rng, int p, int m);

}  // namespace blochjac

#endif  // BLOCHJAC_FIXTURES_HPP
