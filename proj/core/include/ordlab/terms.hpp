#pragma once

#include "ordlab/fundseq.hpp"
#include "ordlab/ordinal.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ordlab {

// Elements of the base order are opaque handles interpreted by the order.
using XElem = std::uint64_t;

class LinearOrder {
public:
    virtual ~LinearOrder() = default;

    virtual Cmp compare(XElem a, XElem b) const = 0;
    virtual bool contains(XElem x) const = 0;
    virtual std::string name() const = 0;
    virtual std::string format(XElem x) const;
    // Decimal handle by default; throws ParseError.
    virtual XElem parse(std::string_view text) const;
    // i-th element of a strictly descending sequence, if the order has one.
    virtual std::optional<XElem> descending(std::size_t i) const;
};

// 0 < 1 < ... < size-1.
class FiniteOrder final : public LinearOrder {
public:
    explicit FiniteOrder(std::uint64_t size);
    Cmp compare(XElem a, XElem b) const override;
    bool contains(XElem x) const override { return x < size_; }
    std::string name() const override;
    std::uint64_t size() const { return size_; }

private:
    std::uint64_t size_;
};

// The naturals, in the usual or the reversed order. Only the reversed order
// has a descending sequence: 0, 1, 2, ...
class NatOrder final : public LinearOrder {
public:
    explicit NatOrder(bool reversed);
    Cmp compare(XElem a, XElem b) const override;
    bool contains(XElem) const override { return true; }
    std::string name() const override;
    std::optional<XElem> descending(std::size_t i) const override;
    bool reversed() const { return reversed_; }

private:
    bool reversed_;
};

// Ambient alpha and base order shared by the terms of one computation.
struct TermContext {
    Ordinal alpha;
    std::shared_ptr<const LinearOrder> order;
};
using ContextPtr = std::shared_ptr<const TermContext>;

// alpha must be positive.
ContextPtr make_context(const Ordinal& alpha, std::shared_ptr<const LinearOrder> order);

class ContextMismatch : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A term of phi_alpha(X): 0, a constant phi_alpha(x), phi_d(t) with d < alpha,
// or a sum of at least two terms. Immutable and shareable.
class Term {
public:
    enum class Kind { Zero, Const, Phi, Sum };

    static Term zero(ContextPtr ctx);
    static Term constant(ContextPtr ctx, XElem x);
    // Raw constructors; normalize_term brings them to normal form.
    static Term phi_raw(const Ordinal& d, const Term& t);
    static Term sum_raw(std::vector<Term> ts);

    Kind kind() const;
    bool is_zero() const { return kind() == Kind::Zero; }
    const ContextPtr& context() const;
    XElem elem() const;
    const Ordinal& sub() const;
    const Term& arg() const;
    const std::vector<Term>& summands() const;
    std::size_t hash() const;

    friend bool operator==(const Term& a, const Term& b);

private:
    struct Node;
    explicit Term(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

struct TermHash {
    std::size_t operator()(const Term& t) const { return t.hash(); }
};

// Throws std::invalid_argument for a subscript >= alpha and ContextMismatch
// for mixed contexts.
Term normalize_term(const Term& raw);
bool is_normal(const Term& t);
// Normalizing builders.
Term phi(const Ordinal& d, const Term& t);
Term plus(const Term& a, const Term& b);

// Order on normal forms; throws ContextMismatch for mixed contexts.
Cmp compare_term(const Term& t, const Term& s);

// Summands of a normal form: none for 0, the term itself for a single summand.
std::vector<Term> term_summands(const Term& t);
// Nesting depth of phi_d applications.
std::size_t term_depth(const Term& t);
// Does a constant phi_alpha(y) with y >= x occur anywhere in t?
bool has_constant_at_least(const Term& t, XElem x);

class SubMultiset {
public:
    using Item = std::variant<Term, XElem>;
    struct Entry {
        Item item;
        std::uint64_t count;
    };

    void add(const Item& item, std::uint64_t count = 1);
    void merge(const SubMultiset& other);
    std::uint64_t count(const Term& t) const;
    std::uint64_t count(XElem x) const;
    std::uint64_t total() const { return total_; }
    const std::vector<Entry>& entries() const { return entries_; }

private:
    std::vector<Entry> entries_;
    std::uint64_t total_ = 0;
};

SubMultiset sub_multiset(const Term& t);

// Subscripts of all phi_d nodes of t, together with alpha; sorted, distinct.
std::vector<Ordinal> term_subscripts(const Term& t);

// The candidate set S(t) for zeta; sorted ascending, distinct.
std::vector<Ordinal> zeta_candidates(const Term& t);

// 1 + max(|Sub(t)|, norms of term_subscripts(t), norms of zeta_candidates(t)).
std::uint64_t term_norm(const Term& t, const NormContext& ctx);

// Grammar: sum := atom ("+" atom)*; atom := "0" | "c(" x ")" |
// "phi[" ordinal "](" sum ")" | "(" sum ")". The result is normalized.
Term parse_term(std::string_view text, const ContextPtr& ctx);
std::string format(const Term& t);

// Every normal-form term reachable from 0 and the constants over elems by at
// most depth phi_d layers (d from subs) and sums of at most max_summands
// summands; sorted by compare_term, distinct.
std::vector<Term> term_corpus(const ContextPtr& ctx, const std::vector<XElem>& elems,
                              const std::vector<Ordinal>& subs, unsigned depth, unsigned max_summands);

}  // namespace ordlab
