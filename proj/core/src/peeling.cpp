#include "ordlab/peeling.hpp"

#include <algorithm>
#include <map>

namespace ordlab {

namespace {

// e with omega^e = c for an additive principal c.
Ordinal log_omega(const Ordinal& c) {
    const Component& comp = c.components().front();
    if (comp.sub.is_zero()) return comp.arg;
    return c;
}

bool is_phi_with(const Term& t, const Ordinal& d) { return t.kind() == Term::Kind::Phi && t.sub() == d; }

}  // namespace

Cmp compare_entry(const PeelEntry& a, const PeelEntry& b, const ContextPtr& ctx) {
    const Term* ta = std::get_if<Term>(&a);
    const Term* tb = std::get_if<Term>(&b);
    if (ta && tb) return compare_term(*ta, *tb);
    if (!ta && !tb) return ctx->order->compare(std::get<XElem>(a), std::get<XElem>(b));
    const Term& t = ta ? *ta : *tb;
    if (!t.is_zero()) throw std::logic_error("a nonzero term is not comparable with an element of X");
    return ta ? Cmp::LT : Cmp::GT;
}

std::string format(const PeelEntry& e, const ContextPtr& ctx) {
    if (const Term* t = std::get_if<Term>(&e)) return format(*t);
    return ctx->order->format(std::get<XElem>(e));
}

TermTuple parse_tuple(std::string_view text, const ContextPtr& ctx) {
    TermTuple out;
    std::size_t start = 0;
    while (true) {
        std::size_t semi = text.find(';', start);
        std::string_view part = text.substr(start, semi == std::string_view::npos ? text.npos : semi - start);
        try {
            out.push_back(parse_term(part, ctx));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), start + e.position());
        }
        if (semi == std::string_view::npos) break;
        start = semi + 1;
    }
    return out;
}

std::string format(const TermTuple& a) {
    std::string out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) out += "; ";
        out += format(a[i]);
    }
    return out;
}

Term overline(const Term& t, const Term& s) {
    if (compare_term(t, s) != Cmp::GT) return Term::zero(t.context());
    auto ts = term_summands(t);
    auto ss = term_summands(s);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i < ss.size() && compare_term(ts[i], ss[i]) != Cmp::GT) continue;
        const Term& ti = ts[i];
        if (is_phi_with(ti, Ordinal())) return ti.arg();
        return ti;
    }
    throw std::logic_error("overline: no exceeding summand");
}

// ---------------------------------------------------------------------------
// Peeler

Peeler::Peeler(ContextPtr ctx, std::shared_ptr<const NormContext> norms)
    : ctx_(std::move(ctx)),
      norms_(norms ? std::move(norms) : std::make_shared<const NormContext>()),
      top_(Ordinal::omega_pow(ctx_->alpha)) {}

std::size_t Peeler::KeyHash::operator()(const Key& k) const {
    std::size_t h = k.e.hash();
    for (const auto& t : k.a) h = h * 1000003u ^ t.hash();
    return h;
}

void Peeler::check(const TermTuple& a) const {
    for (const auto& t : a) {
        if (t.context() != ctx_) throw ContextMismatch("tuple entry from another context");
    }
}

std::uint64_t Peeler::norm(const Term& t) {
    auto it = norm_memo_.find(t);
    if (it != norm_memo_.end()) return it->second;
    std::uint64_t n = term_norm(t, *norms_);
    norm_memo_.emplace(t, n);
    return n;
}

TermTuple Peeler::step_one(const TermTuple& a) const {
    TermTuple out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.push_back(overline(a[i], i + 1 < a.size() ? a[i + 1] : Term::zero(ctx_)));
    }
    return out;
}

Ordinal Peeler::convergence_bound(const Ordinal& delta, const Term& t) {
    std::uint64_t n = norm(t);
    return mul_nat(Ordinal::omega_pow(fund(delta, n)), n);
}

TermTuple Peeler::peel_below(const Ordinal& delta, const TermTuple& a) {
    // Entry i only depends on entries i, i+1, ..., so each entry can be read
    // off the whole tuple peeled to its own bound.
    std::map<Ordinal, TermTuple> by_bound;
    TermTuple out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        Ordinal b = convergence_bound(delta, a[i]);
        auto it = by_bound.find(b);
        if (it == by_bound.end()) it = by_bound.emplace(b, peel_terms(b, a)).first;
        out.push_back(it->second[i]);
    }
    return out;
}

TermTuple Peeler::peel_power(const Ordinal& e, const TermTuple& a) {
    if (e.is_zero()) return step_one(a);
    Key key{e, a};
    auto it = power_memo_.find(key);
    if (it != power_memo_.end()) return it->second;
    TermTuple out = peel_below(e, a);
    for (auto& t : out) {
        if (is_phi_with(t, e)) t = t.arg();
    }
    power_memo_.emplace(std::move(key), out);
    return out;
}

TermTuple Peeler::peel_terms(const Ordinal& rho, const TermTuple& a) {
    check(a);
    if (compare(rho, top_) != Cmp::LT) throw std::invalid_argument("peel_terms: index must be below omega^alpha");
    TermTuple cur = a;
    for (const auto& [c, mult] : cnf(rho)) {
        Ordinal e = log_omega(c);
        for (Nat k = 0; k < mult; ++k) {
            TermTuple next = peel_power(e, cur);
            // A fixed point of p-bar_{omega^e} stays fixed under further copies.
            if (next == cur) break;
            cur = std::move(next);
        }
    }
    return cur;
}

PeelTuple Peeler::peel(const Ordinal& rho, const TermTuple& a) {
    check(a);
    Cmp c = compare(rho, top_);
    if (c == Cmp::GT) throw std::invalid_argument("peel: index " + format(rho) + " exceeds " + format(top_));
    PeelTuple out;
    out.reserve(a.size());
    if (c == Cmp::LT) {
        for (auto& t : peel_terms(rho, a)) out.emplace_back(std::move(t));
        return out;
    }
    for (auto& t : peel_below(ctx_->alpha, a)) {
        switch (t.kind()) {
            case Term::Kind::Zero: out.emplace_back(std::move(t)); break;
            case Term::Kind::Const: out.emplace_back(t.elem()); break;
            default: throw std::logic_error("peel: entry " + format(t) + " did not stabilize to a constant");
        }
    }
    return out;
}

std::optional<Ordinal> Peeler::zeta_scan(const TermTuple& a, const std::vector<Ordinal>& candidates) {
    if (a.empty()) throw std::invalid_argument("zeta of an empty tuple");
    TermTuple ext = a;
    if (ext.size() == 1) ext.push_back(Term::zero(ctx_));
    auto holds = [&](const Ordinal& z) {
        PeelTuple p = peel(z, ext);
        return compare_entry(p[0], p[1], ctx_) != Cmp::GT;
    };
    for (const auto& z : candidates) {
        if (compare(z, top_) != Cmp::LT) break;
        if (holds(z)) return z;
    }
    if (holds(top_)) return top_;
    return std::nullopt;
}

std::optional<Ordinal> Peeler::zeta(const TermTuple& a) {
    if (a.empty()) throw std::invalid_argument("zeta of an empty tuple");
    return zeta_scan(a, zeta_candidates(a.front()));
}

unsigned Peeler::color4(const TermTuple& a) {
    if (a.size() < 2) throw std::invalid_argument("color4 needs at least two entries");
    auto za = zeta(a);
    if (!za) return 0;
    auto zb = zeta(TermTuple(a.begin() + 1, a.end()));
    if (!zb) return 3;
    switch (compare(*za, *zb)) {
        case Cmp::GT: return 1;
        case Cmp::EQ: return 2;
        case Cmp::LT: return 3;
    }
    return 3;
}

// ---------------------------------------------------------------------------
// Descending sequences and M

DescendingSeq::DescendingSeq(Gen gen, std::uint64_t fuel) : gen_(std::move(gen)), fuel_(fuel) {}

const Term& DescendingSeq::at(std::uint64_t i) {
    if (i >= fuel_) throw FuelExhausted("descending sequence: index " + std::to_string(i) + " is past the fuel");
    while (cache_.size() <= i) {
        std::uint64_t k = cache_.size();
        Term t = gen_(k);
        if (k > 0 && compare_term(t, cache_.back()) != Cmp::LT) {
            throw DescentViolation(k, "sequence does not descend at index " + std::to_string(k) + ": " +
                                          format(t) + " after " + format(cache_.back()));
        }
        cache_.push_back(std::move(t));
    }
    return cache_[i];
}

FinSet MTable::minus() const { return FinSet(std::vector<std::uint64_t>(m.begin() + (m.empty() ? 0 : 1), m.end())); }

bool MTable::in_minus(std::uint64_t v) const {
    return m.size() > 1 && std::binary_search(m.begin() + 1, m.end(), v);
}

const Term& MTable::tau_of(std::uint64_t v) const {
    auto it = m.size() > 1 ? std::lower_bound(m.begin() + 1, m.end(), v) : m.end();
    if (it == m.end() || *it != v) throw std::invalid_argument(std::to_string(v) + " is not in M-");
    return tau[static_cast<std::size_t>(it - m.begin())];
}

TermTuple MTable::tau_of(const FinSet& u) const {
    TermTuple out;
    out.reserve(u.size());
    for (auto v : u) out.push_back(tau_of(v));
    return out;
}

MTable build_M(DescendingSeq& sigma, std::size_t count, Peeler& peeler) {
    MTable t;
    if (count == 0) return t;
    t.m.push_back(0);
    t.tau.push_back(Term::zero(peeler.context()));
    for (std::size_t i = 1; i < count; ++i) {
        std::uint64_t prev = t.m.back();
        const Term& s = sigma.at(prev);
        if (s.context() != peeler.context()) throw ContextMismatch("sequence term from another context");
        t.m.push_back(std::max(peeler.norm(s) + 3, prev + 1));
        t.tau.push_back(s);
    }
    return t;
}

unsigned colorbar(const FinSet& u, const MTable& table, Peeler& peeler, bool use_prefix) {
    for (auto v : u) {
        if (!table.in_minus(v)) throw std::invalid_argument("colorbar: " + std::to_string(v) + " is not in M-");
    }
    if (!is_large(peeler.top(), u)) throw std::invalid_argument("colorbar: " + format(u) + " is not omega^alpha-large");
    std::uint64_t lo = u.min();
    if (peeler.norm(table.tau_of(lo)) + 2 >= lo) {
        throw std::invalid_argument("colorbar: minimum " + std::to_string(lo) + " violates the norm margin");
    }
    FinSet s = u;
    if (use_prefix) {
        NumStream xs = NumStream::of(u);
        s = min_exact_prefix(peeler.top(), xs);
    }
    return peeler.color4(table.tau_of(s));
}

ColorWitness::ColorWitness(FinSet set, unsigned color)
    : std::runtime_error("set " + format(set) + " has color " + std::to_string(color)),
      set_(std::move(set)),
      color_(color) {}

namespace {

// The omega^alpha-size prefixes of the tails of H, as long as they exist.
std::vector<FinSet> size_prefixes(const FinSet& h, const Ordinal& top, std::size_t cap) {
    std::vector<FinSet> out;
    for (std::size_t i = 0; i < h.size() && out.size() < cap; ++i) {
        FinSet tail = h.drop(i);
        if (!is_large(top, tail)) break;
        NumStream xs = NumStream::of(tail);
        out.push_back(min_exact_prefix(top, xs));
    }
    return out;
}

}  // namespace

std::vector<XElem> extract_descending(const FinSet& h, const MTable& table, Peeler& peeler) {
    std::vector<XElem> out;
    const auto& order = *peeler.context()->order;
    for (const auto& s : size_prefixes(h, peeler.top(), h.size())) {
        unsigned col = colorbar(s, table, peeler);
        if (col != 0) throw ColorWitness(s, col);
        PeelTuple p = peeler.peel(peeler.top(), table.tau_of(s));
        const XElem* x = std::get_if<XElem>(&p.front());
        if (!x) throw std::logic_error("extraction: p_{omega^alpha} of " + format(s) + " is not in X");
        if (!out.empty() && order.compare(*x, out.back()) != Cmp::LT) {
            throw std::logic_error("extraction: sequence does not descend at " + format(s));
        }
        out.push_back(*x);
    }
    return out;
}

std::vector<std::optional<Ordinal>> zeta_chain(const FinSet& h, const MTable& table, Peeler& peeler,
                                               std::size_t cap) {
    std::vector<std::optional<Ordinal>> out;
    for (const auto& s : size_prefixes(h, peeler.top(), cap)) out.push_back(peeler.zeta(table.tau_of(s)));
    return out;
}

// ---------------------------------------------------------------------------
// Homogeneous-set search

namespace {

struct Search {
    const std::vector<std::uint64_t>& window;
    const ColoringHandle& coloring;
    unsigned target;
    const SearchBudget& budget;
    SearchResult res;
    std::vector<std::uint64_t> cur;
    std::size_t best_size = 0;

    bool compatible(std::uint64_t v) {
        std::vector<std::uint64_t> g = cur;
        g.push_back(v);
        std::uint64_t tested = 0;
        bool ok = true;
        bool finished = visit_domain(coloring, FinSet(std::move(g)), v, [&](const FinSet& s) {
            if (tested >= budget.checks_per_step) return false;
            ++tested;
            if (coloring(s) != target) {
                ok = false;
                return false;
            }
            return true;
        });
        res.checks += tested;
        if (!finished && ok) res.truncated = true;
        return ok;
    }

    // Returns false once the node budget is gone.
    bool dfs(std::size_t idx) {
        if (++res.nodes > budget.nodes) {
            res.exhausted = true;
            return false;
        }
        if (cur.size() > best_size) {
            best_size = cur.size();
            res.best = FinSet(cur);
        }
        if (cur.size() + (window.size() - idx) <= best_size || idx == window.size()) return true;
        std::uint64_t v = window[idx];
        if (compatible(v)) {
            cur.push_back(v);
            bool go = dfs(idx + 1);
            cur.pop_back();
            if (!go) return false;
            if (best_size == window.size()) return true;
        }
        return dfs(idx + 1);
    }
};

}  // namespace

SearchResult greedy_homog_search(const FinSet& window, const ColoringHandle& coloring, unsigned target_color,
                                 const SearchBudget& budget) {
    Search s{window.elems(), coloring, target_color, budget, {}, {}, 0};
    s.dfs(0);
    return s.res;
}

}  // namespace ordlab
