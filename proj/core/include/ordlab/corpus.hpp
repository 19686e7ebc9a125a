#pragma once

#include "ordlab/ordinal.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace ordlab {

// All sums of w^i * c_i with i < exponents and c_i <= max_coef, in increasing order.
std::vector<Ordinal> polynomial_corpus(unsigned exponents, unsigned max_coef);

// Random ordinal below epsilon_0 built from nested Cantor normal forms.
Ordinal random_below_eps0(std::mt19937_64& rng, unsigned depth, unsigned width, unsigned max_coef);

// Random notation that may use phi with small subscripts.
Ordinal random_veblen(std::mt19937_64& rng, unsigned depth, unsigned width, unsigned max_coef);

// Sorted distinct union of polynomial and random ordinals; at least `count` entries
// when the generators allow it.
std::vector<Ordinal> mixed_corpus(std::uint64_t seed, std::size_t count);

}  // namespace ordlab
