#include "ordlab/ordinal.hpp"

#include <cctype>
#include <functional>
#include <limits>

namespace ordlab {

struct Ordinal::Rep {
    std::vector<Component> comps;
    std::size_t hash = 0;
};

namespace {

std::size_t hash_nat(const Nat& n) {
    if (n <= Nat(std::numeric_limits<std::uint64_t>::max())) {
        return std::hash<std::uint64_t>{}(static_cast<std::uint64_t>(n));
    }
    return std::hash<std::string>{}(n.str());
}

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

Cmp cmp_nodes(const Component& x, const Component& y);

// Compares o with the single node phi_{n.sub}(n.arg).
Cmp cmp_ord_node(const Ordinal& o, const Component& n) {
    const auto& cs = o.components();
    if (cs.empty()) return Cmp::LT;
    Cmp r = cmp_nodes(cs[0], n);
    if (r != Cmp::EQ) return r;
    return (cs[0].mult > 1 || cs.size() > 1) ? Cmp::GT : Cmp::EQ;
}

Cmp flip(Cmp c) {
    return c == Cmp::LT ? Cmp::GT : c == Cmp::GT ? Cmp::LT : Cmp::EQ;
}

// Compares phi_{x.sub}(x.arg) with phi_{y.sub}(y.arg); multiplicities ignored.
Cmp cmp_nodes(const Component& x, const Component& y) {
    Cmp ds = compare(x.sub, y.sub);
    if (ds == Cmp::EQ) return compare(x.arg, y.arg);
    if (ds == Cmp::LT) return cmp_ord_node(x.arg, y);
    Cmp r = flip(cmp_ord_node(y.arg, x));
    return r == Cmp::LT ? Cmp::LT : Cmp::GT;
}

}  // namespace

const char* to_string(Cmp c) {
    switch (c) {
        case Cmp::LT: return "LT";
        case Cmp::EQ: return "EQ";
        case Cmp::GT: return "GT";
    }
    return "?";
}

ParseError::ParseError(const std::string& msg, std::size_t pos)
    : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}

Ordinal::Ordinal() {
    static const std::shared_ptr<const Rep> empty = std::make_shared<const Rep>();
    rep_ = empty;
}

Ordinal::Ordinal(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

Ordinal Ordinal::from_components(std::vector<Component> comps) {
    if (comps.empty()) return Ordinal();
    auto rep = std::make_shared<Rep>();
    std::size_t h = 0x51ed;
    for (const auto& c : comps) {
        h = mix(h, c.sub.hash());
        h = mix(h, c.arg.hash());
        h = mix(h, hash_nat(c.mult));
    }
    rep->comps = std::move(comps);
    rep->hash = h;
    return Ordinal(std::move(rep));
}

Ordinal Ordinal::nat(const Nat& n) {
    if (n < 0) throw std::domain_error("negative natural");
    if (n == 0) return Ordinal();
    return from_components({Component{Ordinal(), Ordinal(), n}});
}

Ordinal Ordinal::omega() {
    static const Ordinal w = veblen(Ordinal(), nat(1));
    return w;
}

Ordinal Ordinal::veblen(const Ordinal& sub, const Ordinal& arg) {
    if (arg.is_indecomposable() && compare(arg.components()[0].sub, sub) == Cmp::GT) return arg;
    return from_components({Component{sub, arg, 1}});
}

const std::vector<Component>& Ordinal::components() const { return rep_->comps; }

bool Ordinal::is_zero() const { return rep_->comps.empty(); }

bool Ordinal::is_nat() const {
    const auto& cs = rep_->comps;
    return cs.empty() || (cs.size() == 1 && cs[0].is_one());
}

Nat Ordinal::to_nat() const {
    if (!is_nat()) throw std::domain_error("ordinal is not a natural number");
    return is_zero() ? Nat(0) : rep_->comps[0].mult;
}

bool Ordinal::is_successor() const { return !is_zero() && rep_->comps.back().is_one(); }

bool Ordinal::is_limit() const { return !is_zero() && !rep_->comps.back().is_one(); }

bool Ordinal::is_indecomposable() const {
    return rep_->comps.size() == 1 && rep_->comps[0].mult == 1;
}

std::size_t Ordinal::hash() const { return rep_->hash; }

bool operator==(const Ordinal& a, const Ordinal& b) {
    if (a.rep_ == b.rep_) return true;
    if (a.rep_->hash != b.rep_->hash) return false;
    const auto& x = a.rep_->comps;
    const auto& y = b.rep_->comps;
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i].mult != y[i].mult || !(x[i].sub == y[i].sub) || !(x[i].arg == y[i].arg)) return false;
    }
    return true;
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
    switch (compare(a, b)) {
        case Cmp::LT: return std::strong_ordering::less;
        case Cmp::GT: return std::strong_ordering::greater;
        default: return std::strong_ordering::equal;
    }
}

Cmp compare(const Ordinal& a, const Ordinal& b) {
    if (a == b) return Cmp::EQ;
    const auto& x = a.components();
    const auto& y = b.components();
    std::size_t n = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < n; ++i) {
        Cmp r = cmp_nodes(x[i], y[i]);
        if (r != Cmp::EQ) return r;
        if (x[i].mult != y[i].mult) return x[i].mult < y[i].mult ? Cmp::LT : Cmp::GT;
    }
    if (x.size() == y.size()) return Cmp::EQ;
    return x.size() < y.size() ? Cmp::LT : Cmp::GT;
}

Ordinal add(const Ordinal& a, const Ordinal& b) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return b;
    const auto& x = a.components();
    const auto& y = b.components();
    std::vector<Component> out;
    out.reserve(x.size() + y.size());
    Nat carried = 0;
    for (const auto& c : x) {
        Cmp r = cmp_nodes(c, y[0]);
        if (r == Cmp::GT) {
            out.push_back(c);
        } else {
            if (r == Cmp::EQ) carried = c.mult;
            break;
        }
    }
    out.push_back(y[0]);
    out.back().mult += carried;
    for (std::size_t i = 1; i < y.size(); ++i) out.push_back(y[i]);
    return Ordinal::from_components(std::move(out));
}

Ordinal mul_nat(const Ordinal& a, const Nat& n) {
    if (n < 0) throw std::domain_error("negative multiplier");
    if (n == 0 || a.is_zero()) return Ordinal();
    std::vector<Component> out = a.components();
    out[0].mult *= n;
    return Ordinal::from_components(std::move(out));
}

Ordinal lead(const Ordinal& a) {
    if (a.is_zero()) return a;
    return component_ordinal(a.components()[0]);
}

Ordinal component_ordinal(const Component& c) {
    return Ordinal::from_components({Component{c.sub, c.arg, 1}});
}

Ordinal drop_last(const Ordinal& a) {
    if (a.is_zero()) throw std::domain_error("drop_last of zero");
    std::vector<Component> out = a.components();
    if (out.back().mult > 1) {
        out.back().mult -= 1;
    } else {
        out.pop_back();
    }
    return Ordinal::from_components(std::move(out));
}

Ordinal truncate(const Ordinal& a, std::size_t k) {
    const auto& cs = a.components();
    if (k >= cs.size()) return a;
    return Ordinal::from_components(std::vector<Component>(cs.begin(), cs.begin() + static_cast<std::ptrdiff_t>(k)));
}

Ordinal left_subtract(const Ordinal& a, const Ordinal& b) {
    const auto& x = a.components();
    const auto& y = b.components();
    if (y.empty()) return a;
    if (y.size() > x.size()) throw std::domain_error("left_subtract: not a prefix");
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
        if (x[i].mult != y[i].mult || cmp_nodes(x[i], y[i]) != Cmp::EQ) {
            throw std::domain_error("left_subtract: not a prefix");
        }
    }
    std::size_t k = y.size() - 1;
    if (cmp_nodes(x[k], y[k]) != Cmp::EQ || x[k].mult < y[k].mult) {
        throw std::domain_error("left_subtract: not a prefix");
    }
    std::vector<Component> out;
    if (x[k].mult > y[k].mult) {
        out.push_back(x[k]);
        out.back().mult -= y[k].mult;
    }
    for (std::size_t i = k + 1; i < x.size(); ++i) out.push_back(x[i]);
    return Ordinal::from_components(std::move(out));
}

Ordinal predecessor(const Ordinal& a) {
    if (!a.is_successor()) throw std::domain_error("predecessor of a non-successor");
    return drop_last(a);
}

OrdClass classify(const Ordinal& a) {
    if (a.is_zero()) return {OrdClass::Tag::Zero, std::nullopt};
    if (a.is_successor()) return {OrdClass::Tag::Successor, predecessor(a)};
    return {OrdClass::Tag::Limit, std::nullopt};
}

std::vector<std::pair<Ordinal, Nat>> cnf(const Ordinal& a) {
    std::vector<std::pair<Ordinal, Nat>> out;
    for (const auto& c : a.components()) out.emplace_back(component_ordinal(c), c.mult);
    return out;
}

// ---------------------------------------------------------------------------
// Text codec

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Ordinal run() {
        Ordinal r = sum();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return r;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(std::string_view tok) {
        skip_ws();
        if (s_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view tok) {
        if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
    }

    bool at_digit() {
        skip_ws();
        return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
    }

    Nat number() {
        if (!at_digit()) fail("expected a natural number");
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return Nat(std::string(s_.substr(start, pos_ - start)));
    }

    Ordinal sum() {
        Ordinal acc = term();
        while (accept("+")) acc = add(acc, term());
        return acc;
    }

    Ordinal term() {
        Ordinal a = atom();
        if (accept("*")) a = mul_nat(a, number());
        return a;
    }

    Ordinal atom() {
        skip_ws();
        if (at_digit()) return Ordinal::nat(number());
        if (accept("(")) {
            Ordinal r = sum();
            expect(")");
            return r;
        }
        if (accept("phi")) {
            expect("(");
            Ordinal d = sum();
            expect(",");
            Ordinal b = sum();
            expect(")");
            return Ordinal::veblen(d, b);
        }
        if (s_.substr(pos_, 2) == "G0" || s_.substr(pos_, 6) == "Gamma0") {
            fail("ordinals >= Gamma_0 have no notation");
        }
        if (accept("w")) {
            if (accept("^")) return Ordinal::omega_pow(atom());
            return Ordinal::omega();
        }
        if (pos_ >= s_.size()) fail("unexpected end of input");
        fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    }
};

std::string format_exponent(const Ordinal& e) {
    if (e.is_nat() || e.is_indecomposable()) return format(e);
    return "(" + format(e) + ")";
}

std::string format_node(const Component& c) {
    if (c.sub.is_zero()) {
        if (c.arg == Ordinal::nat(1)) return "w";
        return "w^" + format_exponent(c.arg);
    }
    return "phi(" + format(c.sub) + "," + format(c.arg) + ")";
}

}  // namespace

Ordinal parse_ordinal(std::string_view text) { return Parser(text).run(); }

std::string format(const Ordinal& a) {
    if (a.is_zero()) return "0";
    std::string out;
    for (const auto& c : a.components()) {
        if (!out.empty()) out += " + ";
        if (c.is_one()) {
            out += c.mult.str();
            continue;
        }
        out += format_node(c);
        if (c.mult > 1) out += "*" + c.mult.str();
    }
    return out;
}

Nat cantor_pair(const Nat& x, const Nat& y) {
    Nat s = x + y;
    return s * (s + 1) / 2 + y;
}

std::pair<Nat, Nat> cantor_unpair(const Nat& z) {
    Nat disc = 8 * z + 1;
    Nat w = (Nat(boost::multiprecision::sqrt(disc)) - 1) / 2;
    Nat t = w * (w + 1) / 2;
    Nat y = z - t;
    return {w - y, y};
}

Nat structural_code(const Ordinal& a) {
    Nat code = 0;
    const auto& cs = a.components();
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) {
        Nat node = cantor_pair(cantor_pair(structural_code(it->sub), structural_code(it->arg)), it->mult - 1);
        code = 1 + cantor_pair(node, code);
    }
    return code;
}

}  // namespace ordlab
