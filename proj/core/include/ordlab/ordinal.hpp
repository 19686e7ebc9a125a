#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ordlab {

using Nat = boost::multiprecision::cpp_int;

enum class Cmp { LT = -1, EQ = 0, GT = 1 };

const char* to_string(Cmp c);

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos);
    std::size_t position() const noexcept { return pos_; }

private:
    std::size_t pos_;
};

struct Component;

// Ordinal below Gamma_0 in binary Veblen normal form: a strictly decreasing
// list of components phi_sub(arg) * mult. Naturals are phi_0(0) * n.
class Ordinal {
public:
    Ordinal();

    static Ordinal zero() { return Ordinal(); }
    static Ordinal nat(const Nat& n);
    static Ordinal omega();
    // phi_sub(arg) with fixpoints collapsed.
    static Ordinal veblen(const Ordinal& sub, const Ordinal& arg);
    static Ordinal omega_pow(const Ordinal& e) { return veblen(Ordinal(), e); }

    const std::vector<Component>& components() const;
    bool is_zero() const;
    bool is_nat() const;
    // Value of a natural; throws std::domain_error otherwise.
    Nat to_nat() const;
    bool is_successor() const;
    bool is_limit() const;
    // Single component with multiplicity one (the form omega^b).
    bool is_indecomposable() const;

    std::size_t hash() const;

    friend bool operator==(const Ordinal& a, const Ordinal& b);
    friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);

private:
    struct Rep;
    explicit Ordinal(std::shared_ptr<const Rep> rep);
    static Ordinal from_components(std::vector<Component> comps);
    std::shared_ptr<const Rep> rep_;

    friend Ordinal add(const Ordinal& a, const Ordinal& b);
    friend Ordinal mul_nat(const Ordinal& a, const Nat& n);
    friend Ordinal lead(const Ordinal& a);
    friend Ordinal predecessor(const Ordinal& a);
    friend Ordinal component_ordinal(const Component& c);
    friend Ordinal drop_last(const Ordinal& a);
    friend Ordinal truncate(const Ordinal& a, std::size_t k);
    friend Ordinal left_subtract(const Ordinal& a, const Ordinal& b);
};

struct Component {
    Ordinal sub;
    Ordinal arg;
    Nat mult;

    bool is_one() const { return sub.is_zero() && arg.is_zero(); }
};

Cmp compare(const Ordinal& a, const Ordinal& b);

// Ordinal sum with left absorption.
Ordinal add(const Ordinal& a, const Ordinal& b);
// a * n for a natural n.
Ordinal mul_nat(const Ordinal& a, const Nat& n);
// Leading Cantor normal form term (with multiplicity one); 0 for 0.
Ordinal lead(const Ordinal& a);
// The component as an ordinal with multiplicity one.
Ordinal component_ordinal(const Component& c);
// Removes one copy of the last component.
Ordinal drop_last(const Ordinal& a);
// The first k components of a.
Ordinal truncate(const Ordinal& a, std::size_t k);
// For b <= a, the unique x with b + x = a (b must be a prefix of a).
Ordinal left_subtract(const Ordinal& a, const Ordinal& b);
Ordinal predecessor(const Ordinal& a);
inline Ordinal successor(const Ordinal& a) { return add(a, Ordinal::nat(1)); }

struct OrdClass {
    enum class Tag { Zero, Successor, Limit } tag;
    std::optional<Ordinal> pred;
};

OrdClass classify(const Ordinal& a);

// Cantor normal form as (omega^e, multiplicity) pairs.
std::vector<std::pair<Ordinal, Nat>> cnf(const Ordinal& a);

Ordinal parse_ordinal(std::string_view text);
std::string format(const Ordinal& a);

// Cantor pairing on naturals and its inverse.
Nat cantor_pair(const Nat& x, const Nat& y);
std::pair<Nat, Nat> cantor_unpair(const Nat& z);

// Injective structural code of the notation.
Nat structural_code(const Ordinal& a);

struct OrdinalHash {
    std::size_t operator()(const Ordinal& a) const { return a.hash(); }
};

}  // namespace ordlab
