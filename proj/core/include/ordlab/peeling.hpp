#pragma once

#include "ordlab/coloring.hpp"
#include "ordlab/largeness.hpp"
#include "ordlab/terms.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace ordlab {

using TermTuple = std::vector<Term>;

// Output entry of a peeling function: a term, or an element of X (only at
// index omega^alpha).
using PeelEntry = std::variant<Term, XElem>;
using PeelTuple = std::vector<PeelEntry>;

// Terms compare as terms and X-elements in the base order. The term 0 lies
// below every X-element; a nonzero term against an X-element throws.
Cmp compare_entry(const PeelEntry& a, const PeelEntry& b, const ContextPtr& ctx);
std::string format(const PeelEntry& e, const ContextPtr& ctx);

// Terms separated by ';'. Throws ParseError.
TermTuple parse_tuple(std::string_view text, const ContextPtr& ctx);
std::string format(const TermTuple& a);

// 0 if t <= s; otherwise the first summand t_i exceeding s_i (missing
// summands read as 0), with one phi_0 stripped.
Term overline(const Term& t, const Term& s);

// Peeling functions, zeta and the 4-coloring over one context. Holds memo
// tables, so one instance must not be shared between threads.
class Peeler {
public:
    explicit Peeler(ContextPtr ctx, std::shared_ptr<const NormContext> norms = nullptr);

    const ContextPtr& context() const { return ctx_; }
    const NormContext& norms() const { return *norms_; }
    // omega^alpha.
    const Ordinal& top() const { return top_; }

    std::uint64_t norm(const Term& t);

    // p-bar_rho(A) for rho <= omega^alpha. Throws std::invalid_argument for
    // larger rho.
    PeelTuple peel(const Ordinal& rho, const TermTuple& a);
    // p-bar_rho(A) for rho < omega^alpha, where every entry is still a term.
    TermTuple peel_terms(const Ordinal& rho, const TermTuple& a);
    // The stabilized p-bar_{<omega^delta}(A) for 0 < delta <= alpha, each entry
    // taken at its own convergence bound.
    TermTuple peel_below(const Ordinal& delta, const TermTuple& a);
    // omega^{delta[|t|]} * |t|.
    Ordinal convergence_bound(const Ordinal& delta, const Term& t);

    // Least zeta with p_zeta(A) <= p_zeta(A-), scanning S(A(0)) and
    // omega^alpha. A singleton is extended by a trailing 0.
    std::optional<Ordinal> zeta(const TermTuple& a);
    // The same definition over an arbitrary ascending list of candidates;
    // omega^alpha is always tried last.
    std::optional<Ordinal> zeta_scan(const TermTuple& a, const std::vector<Ordinal>& candidates);

    // The 4-coloring; requires |A| >= 2.
    unsigned color4(const TermTuple& a);

    std::uint64_t memo_size() const { return power_memo_.size(); }

private:
    struct Key {
        Ordinal e;
        TermTuple a;
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const;
    };

    void check(const TermTuple& a) const;
    TermTuple peel_power(const Ordinal& e, const TermTuple& a);
    TermTuple step_one(const TermTuple& a) const;

    ContextPtr ctx_;
    std::shared_ptr<const NormContext> norms_;
    Ordinal top_;
    std::unordered_map<Term, std::uint64_t, TermHash> norm_memo_;
    std::unordered_map<Key, TermTuple, KeyHash> power_memo_;
};

// Strictly descending sequence of terms produced on demand. Each new index
// is checked against its predecessor.
class DescendingSeq {
public:
    using Gen = std::function<Term(std::uint64_t)>;

    DescendingSeq(Gen gen, std::uint64_t fuel);

    // Throws FuelExhausted past the fuel and DescentViolation on a non-descent.
    const Term& at(std::uint64_t i);
    std::uint64_t evaluated() const { return cache_.size(); }

private:
    Gen gen_;
    std::uint64_t fuel_;
    std::vector<Term> cache_;
};

class DescentViolation : public std::runtime_error {
public:
    DescentViolation(std::uint64_t index, const std::string& msg) : std::runtime_error(msg), index_(index) {}
    std::uint64_t index() const { return index_; }

private:
    std::uint64_t index_;
};

// A prefix of the sparse set M and the map tau on M-.
struct MTable {
    std::vector<std::uint64_t> m;
    // tau[i] = tau(M(i)) = sigma(M(i-1)) for i >= 1; tau[0] is unused.
    std::vector<Term> tau;

    FinSet minus() const;
    bool in_minus(std::uint64_t v) const;
    const Term& tau_of(std::uint64_t v) const;
    TermTuple tau_of(const FinSet& u) const;
};

// M(0) = 0 and M(i) = max(|sigma(M(i-1))| + 3, M(i-1) + 1) for 0 < i < count.
MTable build_M(DescendingSeq& sigma, std::size_t count, Peeler& peeler);

// c-bar(u) = c(tau(s)) for the omega^alpha-size prefix s of u, or of all of u
// when use_prefix is false. Throws std::invalid_argument when u is not inside
// M-, is not omega^alpha-large, or its minimum violates the norm margin.
unsigned colorbar(const FinSet& u, const MTable& table, Peeler& peeler, bool use_prefix = true);

// Raised when extraction meets a set of nonzero color.
class ColorWitness : public std::runtime_error {
public:
    ColorWitness(FinSet set, unsigned color);
    const FinSet& set() const { return set_; }
    unsigned color() const { return color_; }

private:
    FinSet set_;
    unsigned color_;
};

// For each i, s_i is the omega^alpha-size prefix of H without its first i
// elements; returns p_{omega^alpha}(s_i) while s_i exists. Throws ColorWitness
// when some s_i has nonzero color and std::logic_error when the result is not
// strictly descending in X.
std::vector<XElem> extract_descending(const FinSet& h, const MTable& table, Peeler& peeler);

// zeta of the successive size-prefixes s_i of H, for at most cap of them.
std::vector<std::optional<Ordinal>> zeta_chain(const FinSet& h, const MTable& table, Peeler& peeler,
                                               std::size_t cap);

struct SearchBudget {
    std::uint64_t nodes = 200000;
    // Domain sets tested when adding one element.
    std::uint64_t checks_per_step = 20000;
};

struct SearchResult {
    FinSet best;
    // The node budget ran out before the search finished.
    bool exhausted = false;
    // Some step hit checks_per_step, so not every domain set was tested.
    bool truncated = false;
    std::uint64_t nodes = 0;
    std::uint64_t checks = 0;
};

// Largest subset of window whose tested domain sets all get target_color.
// Include-first depth-first search with a size bound; deterministic.
SearchResult greedy_homog_search(const FinSet& window, const ColoringHandle& coloring, unsigned target_color,
                                 const SearchBudget& budget = {});

}  // namespace ordlab
