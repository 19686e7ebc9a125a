#pragma once

#include "ordlab/ordinal.hpp"

#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace ordlab {

class FuelExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An ordinal notation or the Gamma_0 sentinel. The sentinel is only a start
// point for descent.
class Bound {
public:
    Bound(const Ordinal& a) : value_(a) {}  // NOLINT(google-explicit-constructor)
    static Bound gamma0() { return Bound(); }

    bool is_gamma0() const { return gamma0_; }
    const Ordinal& value() const;
    // Strictly above a.
    bool above(const Ordinal& a) const;

private:
    Bound() : gamma0_(true) {}
    bool gamma0_ = false;
    Ordinal value_;
};

std::string format(const Bound& b);

inline constexpr std::uint64_t kDefaultFuel = 1'000'000;

// phi_1(0).
const Ordinal& epsilon0();

// a[n].
Ordinal fund(const Ordinal& a, std::uint64_t n);
// Gamma_0[n].
Ordinal fund(const Bound& a, std::uint64_t n);
// a[s_0]...[s_k].
Ordinal fund_set(const Ordinal& a, const std::vector<std::uint64_t>& s);

struct Reach {
    enum class Kind { Yes, No, OutOfFuel } kind;
    std::uint64_t steps = 0;
};

// Literal descent by [n] from start until target, a value below it, or 0.
Reach reaches(const Bound& start, std::uint64_t n, const Ordinal& target,
              std::uint64_t fuel = kDefaultFuel);

// Decides start =>_n target without walking the descent step by step.
// Fuel counts recursive calls; exhaustion throws FuelExhausted.
bool reaches_fast(const Bound& start, std::uint64_t n, const Ordinal& target,
                  std::uint64_t fuel = kDefaultFuel);

// Settings and memo for the norm. Safe for concurrent use.
class NormContext {
public:
    explicit NormContext(Bound ceiling = Bound(epsilon0()), std::uint64_t fuel = kDefaultFuel);

    const Bound& ceiling() const { return ceiling_; }
    std::uint64_t fuel() const { return fuel_; }

    // Least n >= 2 with ceiling =>_n a, before the successor adjustment.
    std::uint64_t raw_norm(const Ordinal& a) const;
    // raw_norm adjusted so that norm(a) < norm(a + 1).
    std::uint64_t norm(const Ordinal& a) const;

private:
    Bound ceiling_;
    std::uint64_t fuel_;
    mutable std::shared_mutex mu_;
    mutable std::unordered_map<Ordinal, std::uint64_t, OrdinalHash> raw_;
};

// Code dominating the working norm: max(structural code, norm).
Nat ordinal_code(const Ordinal& a, const NormContext& ctx);

struct NestViolation {
    Ordinal gamma;
    Ordinal beta;
    std::uint64_t n;
};

// Triples with gamma < beta, 1 < n <= nmax and gamma > beta[n] > gamma[n].
std::vector<NestViolation> nestedness_check(const std::vector<Ordinal>& sample, std::uint64_t nmax);

}  // namespace ordlab
