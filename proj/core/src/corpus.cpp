#include "ordlab/corpus.hpp"

#include <algorithm>
#include <unordered_set>

namespace ordlab {

std::vector<Ordinal> polynomial_corpus(unsigned exponents, unsigned max_coef) {
    std::vector<Ordinal> out{Ordinal()};
    for (unsigned e = 0; e < exponents; ++e) {
        Ordinal power = Ordinal::omega_pow(Ordinal::nat(e));
        std::vector<Ordinal> next;
        next.reserve(out.size() * (max_coef + 1));
        // the new top term goes in front of every lower-degree sum
        for (unsigned c = 0; c <= max_coef; ++c) {
            for (const auto& low : out) next.push_back(add(mul_nat(power, c), low));
        }
        out = std::move(next);
    }
    return out;
}

namespace {

unsigned pick(std::mt19937_64& rng, unsigned lo, unsigned hi) {
    return std::uniform_int_distribution<unsigned>(lo, hi)(rng);
}

Ordinal sum_of(std::vector<Ordinal> parts) {
    std::sort(parts.begin(), parts.end(), [](const Ordinal& a, const Ordinal& b) { return compare(a, b) == Cmp::GT; });
    Ordinal acc;
    for (const auto& p : parts) acc = add(acc, p);
    return acc;
}

}  // namespace

Ordinal random_below_eps0(std::mt19937_64& rng, unsigned depth, unsigned width, unsigned max_coef) {
    if (depth == 0) return Ordinal::nat(pick(rng, 0, max_coef));
    unsigned terms = pick(rng, 0, width);
    std::vector<Ordinal> parts;
    for (unsigned i = 0; i < terms; ++i) {
        Ordinal e = random_below_eps0(rng, depth - 1, width, max_coef);
        parts.push_back(mul_nat(Ordinal::omega_pow(e), pick(rng, 1, std::max(1u, max_coef))));
    }
    return sum_of(std::move(parts));
}

Ordinal random_veblen(std::mt19937_64& rng, unsigned depth, unsigned width, unsigned max_coef) {
    if (depth == 0) return Ordinal::nat(pick(rng, 0, max_coef));
    unsigned terms = pick(rng, 0, width);
    std::vector<Ordinal> parts;
    for (unsigned i = 0; i < terms; ++i) {
        Ordinal sub = pick(rng, 0, 2) == 0 ? random_veblen(rng, depth - 1, 1, 2) : Ordinal();
        Ordinal arg = random_veblen(rng, depth - 1, width, max_coef);
        parts.push_back(mul_nat(Ordinal::veblen(sub, arg), pick(rng, 1, std::max(1u, max_coef))));
    }
    return sum_of(std::move(parts));
}

std::vector<Ordinal> mixed_corpus(std::uint64_t seed, std::size_t count) {
    std::mt19937_64 rng(seed);
    std::vector<Ordinal> out = polynomial_corpus(4, 3);
    std::unordered_set<Ordinal, OrdinalHash> seen(out.begin(), out.end());
    std::size_t attempts = 0;
    while (out.size() < count && attempts < count * 20) {
        ++attempts;
        Ordinal a = random_below_eps0(rng, 3, 3, 3);
        if (seen.insert(a).second) out.push_back(a);
    }
    std::sort(out.begin(), out.end(), [](const Ordinal& a, const Ordinal& b) { return compare(a, b) == Cmp::LT; });
    return out;
}

}  // namespace ordlab
