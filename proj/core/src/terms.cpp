#include "ordlab/terms.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <stdexcept>

namespace ordlab {

std::string LinearOrder::format(XElem x) const { return std::to_string(x); }

XElem LinearOrder::parse(std::string_view text) const {
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) {
        throw ParseError("expected an element of " + name(), i);
    }
    XElem v = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        v = v * 10 + static_cast<XElem>(text[i] - '0');
        ++i;
    }
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i != text.size()) throw ParseError("unexpected character", i);
    if (!contains(v)) throw ParseError("not an element of " + name(), 0);
    return v;
}

std::optional<XElem> LinearOrder::descending(std::size_t) const { return std::nullopt; }

FiniteOrder::FiniteOrder(std::uint64_t size) : size_(size) {
    if (size == 0) throw std::invalid_argument("FiniteOrder needs at least one element");
}

Cmp FiniteOrder::compare(XElem a, XElem b) const {
    return a < b ? Cmp::LT : a == b ? Cmp::EQ : Cmp::GT;
}

std::string FiniteOrder::name() const { return "finite(" + std::to_string(size_) + ")"; }

NatOrder::NatOrder(bool reversed) : reversed_(reversed) {}

Cmp NatOrder::compare(XElem a, XElem b) const {
    if (a == b) return Cmp::EQ;
    return (a < b) != reversed_ ? Cmp::LT : Cmp::GT;
}

std::string NatOrder::name() const { return reversed_ ? "nat-reversed" : "nat"; }

std::optional<XElem> NatOrder::descending(std::size_t i) const {
    if (!reversed_) return std::nullopt;
    return static_cast<XElem>(i);
}

ContextPtr make_context(const Ordinal& alpha, std::shared_ptr<const LinearOrder> order) {
    if (alpha.is_zero()) throw std::invalid_argument("term context needs alpha > 0");
    if (!order) throw std::invalid_argument("term context needs an order");
    return std::make_shared<const TermContext>(TermContext{alpha, std::move(order)});
}

struct Term::Node {
    Kind kind;
    ContextPtr ctx;
    XElem elem = 0;
    Ordinal sub;
    std::vector<Term> kids;
    std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

void check_same(const ContextPtr& a, const ContextPtr& b) {
    if (a != b) throw ContextMismatch("terms from different contexts");
}

}  // namespace

Term::Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Term Term::zero(ContextPtr ctx) {
    if (!ctx) throw std::invalid_argument("null term context");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Zero;
    n->ctx = std::move(ctx);
    n->hash = 0x51ed27;
    return Term(std::move(n));
}

Term Term::constant(ContextPtr ctx, XElem x) {
    if (!ctx) throw std::invalid_argument("null term context");
    if (!ctx->order->contains(x)) throw std::invalid_argument("constant outside the base order");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->ctx = std::move(ctx);
    n->elem = x;
    n->hash = mix(0xc0, std::hash<XElem>{}(x));
    return Term(std::move(n));
}

Term Term::phi_raw(const Ordinal& d, const Term& t) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Phi;
    n->ctx = t.context();
    n->sub = d;
    n->kids.push_back(t);
    n->hash = mix(mix(0xf1, d.hash()), t.hash());
    return Term(std::move(n));
}

Term Term::sum_raw(std::vector<Term> ts) {
    if (ts.size() < 2) throw std::invalid_argument("sum needs at least two terms");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sum;
    n->ctx = ts.front().context();
    std::size_t h = 0x5a;
    for (const auto& t : ts) {
        check_same(n->ctx, t.context());
        h = mix(h, t.hash());
    }
    n->kids = std::move(ts);
    n->hash = h;
    return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }
const ContextPtr& Term::context() const { return node_->ctx; }

XElem Term::elem() const {
    if (kind() != Kind::Const) throw std::logic_error("elem() of a non-constant term");
    return node_->elem;
}

const Ordinal& Term::sub() const {
    if (kind() != Kind::Phi) throw std::logic_error("sub() of a non-phi term");
    return node_->sub;
}

const Term& Term::arg() const {
    if (kind() != Kind::Phi) throw std::logic_error("arg() of a non-phi term");
    return node_->kids.front();
}

const std::vector<Term>& Term::summands() const {
    if (kind() != Kind::Sum) throw std::logic_error("summands() of a non-sum term");
    return node_->kids;
}

std::size_t Term::hash() const { return node_->hash; }

bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.hash != y.hash || x.kind != y.kind || x.ctx != y.ctx) return false;
    switch (x.kind) {
        case Term::Kind::Zero: return true;
        case Term::Kind::Const: return x.elem == y.elem;
        case Term::Kind::Phi: return x.sub == y.sub && x.kids == y.kids;
        case Term::Kind::Sum: return x.kids == y.kids;
    }
    return false;
}

std::vector<Term> term_summands(const Term& t) {
    switch (t.kind()) {
        case Term::Kind::Zero: return {};
        case Term::Kind::Sum: return t.summands();
        default: return {t};
    }
}

bool has_constant_at_least(const Term& t, XElem x) {
    switch (t.kind()) {
        case Term::Kind::Zero: return false;
        case Term::Kind::Const: return t.context()->order->compare(t.elem(), x) != Cmp::LT;
        case Term::Kind::Phi: return has_constant_at_least(t.arg(), x);
        case Term::Kind::Sum:
            return std::any_of(t.summands().begin(), t.summands().end(),
                               [&](const Term& u) { return has_constant_at_least(u, x); });
    }
    return false;
}

namespace {

Cmp cmp_terms(const Term& t, const Term& s);

// Both arguments are single summands: constants or phi nodes.
Cmp cmp_atoms(const Term& a, const Term& b) {
    using K = Term::Kind;
    if (a.kind() == K::Const && b.kind() == K::Const) {
        return a.context()->order->compare(a.elem(), b.elem());
    }
    if (a.kind() == K::Const) return has_constant_at_least(b, a.elem()) ? Cmp::LT : Cmp::GT;
    if (b.kind() == K::Const) return has_constant_at_least(a, b.elem()) ? Cmp::GT : Cmp::LT;
    Cmp d = compare(a.sub(), b.sub());
    if (d == Cmp::EQ) return cmp_terms(a.arg(), b.arg());
    if (d == Cmp::LT) {
        // phi_d(t') <= phi_d'(s') iff t' <= phi_d'(s')
        return cmp_terms(a.arg(), b) == Cmp::GT ? Cmp::GT : Cmp::LT;
    }
    // phi_d(t') <= phi_d'(s') iff phi_d(t') <= s'
    return cmp_terms(a, b.arg()) == Cmp::GT ? Cmp::GT : Cmp::LT;
}

Cmp cmp_terms(const Term& t, const Term& s) {
    if (t.is_zero() || s.is_zero()) {
        if (t.is_zero() && s.is_zero()) return Cmp::EQ;
        return t.is_zero() ? Cmp::LT : Cmp::GT;
    }
    if (t == s) return Cmp::EQ;
    const bool ts = t.kind() == Term::Kind::Sum;
    const bool ss = s.kind() == Term::Kind::Sum;
    if (!ts && !ss) return cmp_atoms(t, s);
    const Term* tp = ts ? t.summands().data() : &t;
    const Term* sp = ss ? s.summands().data() : &s;
    std::size_t n = ts ? t.summands().size() : 1;
    std::size_t m = ss ? s.summands().size() : 1;
    for (std::size_t i = 0; i < n && i < m; ++i) {
        Cmp c = cmp_atoms(tp[i], sp[i]);
        if (c != Cmp::EQ) return c;
    }
    return n == m ? Cmp::EQ : (n < m ? Cmp::LT : Cmp::GT);
}

Term make_sum(const ContextPtr& ctx, std::vector<Term> atoms) {
    if (atoms.empty()) return Term::zero(ctx);
    if (atoms.size() == 1) return atoms.front();
    return Term::sum_raw(std::move(atoms));
}

// Appends the summand a to a normal-form summand list, absorbing smaller ones.
void push_atom(std::vector<Term>& atoms, const Term& a) {
    while (!atoms.empty() && cmp_atoms(atoms.back(), a) == Cmp::LT) atoms.pop_back();
    atoms.push_back(a);
}

}  // namespace

Cmp compare_term(const Term& t, const Term& s) {
    check_same(t.context(), s.context());
    return cmp_terms(t, s);
}

Term phi(const Ordinal& d, const Term& t) {
    const auto& ctx = t.context();
    if (compare(d, ctx->alpha) != Cmp::LT) {
        throw std::invalid_argument("phi subscript " + format(d) + " is not below alpha = " + format(ctx->alpha));
    }
    if (t.kind() == Term::Kind::Const) return t;
    if (t.kind() == Term::Kind::Phi && compare(t.sub(), d) == Cmp::GT) return t;
    return Term::phi_raw(d, t);
}

Term plus(const Term& a, const Term& b) {
    check_same(a.context(), b.context());
    std::vector<Term> atoms = term_summands(a);
    for (const auto& x : term_summands(b)) push_atom(atoms, x);
    return make_sum(a.context(), std::move(atoms));
}

Term normalize_term(const Term& raw) {
    switch (raw.kind()) {
        case Term::Kind::Zero:
        case Term::Kind::Const: return raw;
        case Term::Kind::Phi: return phi(raw.sub(), normalize_term(raw.arg()));
        case Term::Kind::Sum: {
            std::vector<Term> atoms;
            for (const auto& k : raw.summands()) {
                check_same(raw.context(), k.context());
                for (const auto& x : term_summands(normalize_term(k))) push_atom(atoms, x);
            }
            return make_sum(raw.context(), std::move(atoms));
        }
    }
    return raw;
}

bool is_normal(const Term& t) {
    switch (t.kind()) {
        case Term::Kind::Zero:
        case Term::Kind::Const: return true;
        case Term::Kind::Phi: {
            const Term& a = t.arg();
            if (compare(t.sub(), t.context()->alpha) != Cmp::LT) return false;
            if (a.kind() == Term::Kind::Const) return false;
            if (a.kind() == Term::Kind::Phi && compare(a.sub(), t.sub()) == Cmp::GT) return false;
            return is_normal(a);
        }
        case Term::Kind::Sum: {
            const auto& ks = t.summands();
            for (std::size_t i = 0; i < ks.size(); ++i) {
                if (ks[i].kind() == Term::Kind::Zero || ks[i].kind() == Term::Kind::Sum) return false;
                if (!is_normal(ks[i])) return false;
                if (i > 0 && cmp_atoms(ks[i - 1], ks[i]) == Cmp::LT) return false;
            }
            return true;
        }
    }
    return false;
}

std::size_t term_depth(const Term& t) {
    switch (t.kind()) {
        case Term::Kind::Zero:
        case Term::Kind::Const: return 0;
        case Term::Kind::Phi: return 1 + term_depth(t.arg());
        case Term::Kind::Sum: {
            std::size_t d = 0;
            for (const auto& k : t.summands()) d = std::max(d, term_depth(k));
            return d;
        }
    }
    return 0;
}

void SubMultiset::add(const Item& item, std::uint64_t count) {
    total_ += count;
    for (auto& e : entries_) {
        if (e.item == item) {
            e.count += count;
            return;
        }
    }
    entries_.push_back({item, count});
}

void SubMultiset::merge(const SubMultiset& other) {
    for (const auto& e : other.entries_) add(e.item, e.count);
}

std::uint64_t SubMultiset::count(const Term& t) const {
    for (const auto& e : entries_) {
        if (const Term* u = std::get_if<Term>(&e.item); u && *u == t) return e.count;
    }
    return 0;
}

std::uint64_t SubMultiset::count(XElem x) const {
    for (const auto& e : entries_) {
        if (const XElem* y = std::get_if<XElem>(&e.item); y && *y == x) return e.count;
    }
    return 0;
}

SubMultiset sub_multiset(const Term& t) {
    SubMultiset out;
    out.add(t);
    switch (t.kind()) {
        case Term::Kind::Zero: break;
        case Term::Kind::Const: out.add(t.elem()); break;
        case Term::Kind::Phi: out.merge(sub_multiset(t.arg())); break;
        case Term::Kind::Sum:
            for (const auto& k : t.summands()) out.merge(sub_multiset(k));
            break;
    }
    return out;
}

namespace {

struct OrdLess {
    bool operator()(const Ordinal& a, const Ordinal& b) const { return compare(a, b) == Cmp::LT; }
};

void collect_subscripts(const Term& t, std::set<Ordinal, OrdLess>& out) {
    if (t.kind() == Term::Kind::Phi) {
        out.insert(t.sub());
        collect_subscripts(t.arg(), out);
    } else if (t.kind() == Term::Kind::Sum) {
        for (const auto& k : t.summands()) collect_subscripts(k, out);
    }
}

void collect_candidates(const Term& t, std::set<Ordinal, OrdLess>& out) {
    switch (t.kind()) {
        case Term::Kind::Zero: out.insert(Ordinal()); return;
        case Term::Kind::Const:
            out.insert(Ordinal());
            out.insert(Ordinal::nat(1));
            out.insert(Ordinal::omega_pow(t.context()->alpha));
            return;
        case Term::Kind::Phi: {
            out.insert(Ordinal());
            out.insert(Ordinal::nat(1));
            Ordinal w = Ordinal::omega_pow(t.sub());
            if (t.arg().is_zero()) {
                out.insert(w);
                return;
            }
            std::set<Ordinal, OrdLess> inner;
            collect_candidates(t.arg(), inner);
            for (const auto& xi : inner) {
                if (!xi.is_zero()) out.insert(add(w, xi));
            }
            return;
        }
        case Term::Kind::Sum:
            out.insert(Ordinal());
            out.insert(Ordinal::nat(1));
            for (const auto& k : t.summands()) collect_candidates(k, out);
            return;
    }
}

}  // namespace

std::vector<Ordinal> term_subscripts(const Term& t) {
    std::set<Ordinal, OrdLess> s;
    s.insert(t.context()->alpha);
    collect_subscripts(t, s);
    return {s.begin(), s.end()};
}

std::vector<Ordinal> zeta_candidates(const Term& t) {
    std::set<Ordinal, OrdLess> s;
    collect_candidates(t, s);
    return {s.begin(), s.end()};
}

std::uint64_t term_norm(const Term& t, const NormContext& ctx) {
    std::uint64_t m = sub_multiset(t).total();
    for (const auto& d : term_subscripts(t)) m = std::max(m, ctx.norm(d));
    for (const auto& z : zeta_candidates(t)) m = std::max(m, ctx.norm(z));
    return m + 1;
}

namespace {

class TermParser {
public:
    TermParser(std::string_view text, const ContextPtr& ctx) : s_(text), ctx_(ctx) {}

    Term parse() {
        Term t = sum();
        ws();
        if (i_ != s_.size()) throw ParseError("unexpected character", i_);
        return t;
    }

private:
    void ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    bool eat(std::string_view tok) {
        ws();
        if (s_.substr(i_, tok.size()) == tok) {
            i_ += tok.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view tok) {
        if (!eat(tok)) throw ParseError("expected '" + std::string(tok) + "'", i_);
    }

    // Raw text up to the bracket closing the one just consumed.
    std::string_view enclosed(char open, char close) {
        std::size_t start = i_;
        int level = 1;
        for (; i_ < s_.size(); ++i_) {
            if (s_[i_] == open) ++level;
            if (s_[i_] == close && --level == 0) {
                std::string_view out = s_.substr(start, i_ - start);
                ++i_;
                return out;
            }
        }
        throw ParseError(std::string("expected '") + close + "'", s_.size());
    }

    Term sum() {
        Term t = atom();
        while (eat("+")) t = plus(t, atom());
        return t;
    }

    Term atom() {
        ws();
        std::size_t at = i_;
        if (eat("(")) {
            Term t = sum();
            expect(")");
            return t;
        }
        if (eat("phi[")) {
            std::size_t start = i_;
            std::string_view inner = enclosed('[', ']');
            Ordinal d;
            try {
                d = parse_ordinal(inner);
            } catch (const ParseError& e) {
                throw ParseError(e.what(), start + e.position());
            }
            expect("(");
            Term t = sum();
            expect(")");
            try {
                return phi(d, t);
            } catch (const std::invalid_argument& e) {
                throw ParseError(e.what(), at);
            }
        }
        if (eat("c(")) {
            std::size_t start = i_;
            std::string_view inner = enclosed('(', ')');
            XElem x;
            try {
                x = ctx_->order->parse(inner);
            } catch (const ParseError& e) {
                throw ParseError(e.what(), start + e.position());
            }
            return Term::constant(ctx_, x);
        }
        if (eat("0")) return Term::zero(ctx_);
        throw ParseError("expected a term", at);
    }

    std::string_view s_;
    std::size_t i_ = 0;
    const ContextPtr& ctx_;
};

}  // namespace

Term parse_term(std::string_view text, const ContextPtr& ctx) { return TermParser(text, ctx).parse(); }

std::string format(const Term& t) {
    switch (t.kind()) {
        case Term::Kind::Zero: return "0";
        case Term::Kind::Const: return "c(" + t.context()->order->format(t.elem()) + ")";
        case Term::Kind::Phi: return "phi[" + format(t.sub()) + "](" + format(t.arg()) + ")";
        case Term::Kind::Sum: {
            std::string out;
            for (const auto& k : t.summands()) {
                if (!out.empty()) out += " + ";
                out += format(k);
            }
            return out;
        }
    }
    return {};
}

std::vector<Term> term_corpus(const ContextPtr& ctx, const std::vector<XElem>& elems,
                              const std::vector<Ordinal>& subs, unsigned depth, unsigned max_summands) {
    auto less = [](const Term& a, const Term& b) { return compare_term(a, b) == Cmp::LT; };
    auto dedupe = [&](std::vector<Term>& v) {
        std::sort(v.begin(), v.end(), less);
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    std::vector<Term> atoms;
    for (auto x : elems) atoms.push_back(Term::constant(ctx, x));
    std::vector<Term> terms;
    for (unsigned level = 0;; ++level) {
        dedupe(atoms);
        // weakly decreasing sums of up to max_summands atoms
        terms.assign(1, Term::zero(ctx));
        std::function<void(std::size_t, std::vector<Term>&)> grow = [&](std::size_t top, std::vector<Term>& cur) {
            if (cur.size() == max_summands) return;
            for (std::size_t i = 0; i <= top && i < atoms.size(); ++i) {
                cur.push_back(atoms[i]);
                terms.push_back(make_sum(ctx, cur));
                grow(i, cur);
                cur.pop_back();
            }
        };
        std::vector<Term> cur;
        if (!atoms.empty()) grow(atoms.size() - 1, cur);
        dedupe(terms);
        if (level == depth) break;
        std::vector<Term> next = atoms;
        for (const auto& d : subs) {
            for (const auto& t : terms) {
                for (const auto& a : term_summands(phi(d, t))) next.push_back(a);
            }
        }
        atoms = std::move(next);
    }
    return terms;
}

}  // namespace ordlab
