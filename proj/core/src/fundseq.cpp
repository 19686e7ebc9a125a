#include "ordlab/fundseq.hpp"

#include <algorithm>

namespace ordlab {

const Ordinal& Bound::value() const {
    if (gamma0_) throw std::logic_error("Gamma_0 sentinel has no notation");
    return value_;
}

bool Bound::above(const Ordinal& a) const { return gamma0_ || compare(value_, a) == Cmp::GT; }

std::string format(const Bound& b) { return b.is_gamma0() ? "G0" : format(b.value()); }

const Ordinal& epsilon0() {
    static const Ordinal e = Ordinal::veblen(Ordinal::nat(1), Ordinal());
    return e;
}

namespace {

Ordinal fund_component(const Component& c, std::uint64_t n) {
    if (c.is_one()) return Ordinal();
    if (c.sub.is_zero()) return mul_nat(Ordinal::omega_pow(fund(c.arg, n)), n);
    Ordinal d = fund(c.sub, n);
    Ordinal x = c.arg.is_zero() ? Ordinal() : successor(Ordinal::veblen(c.sub, fund(c.arg, n)));
    for (std::uint64_t i = 0; i <= n; ++i) x = Ordinal::veblen(d, x);
    return x;
}

}  // namespace

Ordinal fund(const Ordinal& a, std::uint64_t n) {
    if (a.is_zero()) return a;
    const Component& last = a.components().back();
    Ordinal tail = fund_component(last, n);
    if (a.is_indecomposable()) return tail;
    return add(drop_last(a), tail);
}

Ordinal fund(const Bound& a, std::uint64_t n) {
    if (!a.is_gamma0()) return fund(a.value(), n);
    Ordinal x;
    for (std::uint64_t i = 0; i <= n; ++i) x = Ordinal::veblen(x, Ordinal());
    return x;
}

Ordinal fund_set(const Ordinal& a, const std::vector<std::uint64_t>& s) {
    Ordinal x = a;
    for (auto v : s) {
        if (x.is_zero()) break;
        x = fund(x, v);
    }
    return x;
}

Reach reaches(const Bound& start, std::uint64_t n, const Ordinal& target, std::uint64_t fuel) {
    std::uint64_t steps = 0;
    if (start.is_gamma0()) {
        if (fuel == 0) return {Reach::Kind::OutOfFuel, 0};
        steps = 1;
    }
    Ordinal x = start.is_gamma0() ? fund(start, n) : start.value();
    for (;;) {
        Cmp c = compare(x, target);
        if (c == Cmp::EQ) return {Reach::Kind::Yes, steps};
        if (c == Cmp::LT || x.is_zero()) return {Reach::Kind::No, steps};
        if (steps >= fuel) return {Reach::Kind::OutOfFuel, steps};
        x = fund(x, n);
        ++steps;
    }
}

namespace {

class FastReach {
public:
    FastReach(std::uint64_t n, std::uint64_t& fuel) : n_(n), fuel_(fuel) {}

    // Does the descent from a by [n] visit b?
    bool from(const Ordinal& a, const Ordinal& b) {
        tick();
        Cmp c = compare(b, a);
        if (c != Cmp::LT) return c == Cmp::EQ;
        if (b.is_zero()) return true;
        const Component& last = a.components().back();
        Ordinal prefix = truncate(a, a.components().size() - 1);
        if (compare(b, prefix) == Cmp::LT) return from(prefix, b);
        Ordinal rest = left_subtract(b, prefix);
        Ordinal c_ord = component_ordinal(last);
        // rest = c * k + xi with xi < c; k < mult since b < a
        if (!rest.is_zero()) {
            const Component& r0 = rest.components()[0];
            if (r0.sub == last.sub && r0.arg == last.arg) rest = left_subtract(rest, mul_nat(c_ord, r0.mult));
        }
        return inside(last, rest);
    }

    // Does the descent from the single node c visit xi < c?
    bool inside(const Component& c, const Ordinal& xi) {
        tick();
        if (xi.is_zero()) return true;
        if (c.sub.is_zero() && compare(c.arg, epsilon0()) == Cmp::LT) {
            // c = w^g below epsilon_0: the descent passes w^{g_i} * j + (descent of w^{g_i})
            // for the exponents g_i on the descent of g.
            const Component& x0 = xi.components()[0];
            Ordinal eta = x0.arg;
            Ordinal head = mul_nat(component_ordinal(x0), x0.mult);
            Ordinal rest = left_subtract(xi, head);
            if (!from(c.arg, eta)) return false;
            if (x0.mult < n_) return inside(Component{Ordinal(), eta, 1}, rest);
            return x0.mult == n_ && rest.is_zero();
        }
        Component one{c.sub, c.arg, 1};
        Ordinal node = component_ordinal(one);
        return from(fund(node, n_), xi);
    }

private:
    void tick() {
        if (fuel_ == 0) throw FuelExhausted("fuel exhausted while deciding =>_n");
        --fuel_;
    }

    std::uint64_t n_;
    std::uint64_t& fuel_;
};

}  // namespace

bool reaches_fast(const Bound& start, std::uint64_t n, const Ordinal& target, std::uint64_t fuel) {
    FastReach fr(n, fuel);
    if (start.is_gamma0()) return fr.from(fund(start, n), target);
    return fr.from(start.value(), target);
}

NormContext::NormContext(Bound ceiling, std::uint64_t fuel) : ceiling_(std::move(ceiling)), fuel_(fuel) {
    if (fuel_ == 0) throw std::invalid_argument("fuel must be positive");
}

std::uint64_t NormContext::raw_norm(const Ordinal& a) const {
    {
        std::shared_lock lock(mu_);
        auto it = raw_.find(a);
        if (it != raw_.end()) return it->second;
    }
    if (!ceiling_.above(a)) {
        throw std::domain_error("norm: " + format(a) + " is not below the ceiling " + format(ceiling_));
    }
    std::uint64_t fuel = fuel_;
    std::uint64_t n = 2;
    for (;; ++n) {
        FastReach fr(n, fuel);
        Ordinal start = ceiling_.is_gamma0() ? fund(ceiling_, n) : ceiling_.value();
        if (fr.from(start, a)) break;
    }
    std::unique_lock lock(mu_);
    raw_.emplace(a, n);
    return n;
}

std::uint64_t NormContext::norm(const Ordinal& a) const {
    // a = g + k with g zero or a limit
    Ordinal g = a;
    std::uint64_t k = 0;
    if (a.is_successor()) {
        const Nat& m = a.components().back().mult;
        if (m > fuel_) throw FuelExhausted("norm: successor chain longer than fuel");
        k = static_cast<std::uint64_t>(m);
        for (std::uint64_t i = 0; i < k; ++i) g = drop_last(g);
    }
    std::uint64_t v = raw_norm(g);
    Ordinal x = g;
    for (std::uint64_t j = 1; j <= k; ++j) {
        x = successor(x);
        v = std::max(raw_norm(x), v + 1);
    }
    return v;
}

Nat ordinal_code(const Ordinal& a, const NormContext& ctx) {
    Nat code = structural_code(a);
    if (ctx.ceiling().above(a)) code = std::max(code, Nat(ctx.norm(a)));
    return code;
}

std::vector<NestViolation> nestedness_check(const std::vector<Ordinal>& sample, std::uint64_t nmax) {
    std::vector<NestViolation> out;
    if (nmax < 2) return out;
    std::vector<std::vector<Ordinal>> at(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        for (std::uint64_t n = 2; n <= nmax; ++n) at[i].push_back(fund(sample[i], n));
    }
    for (std::size_t b = 0; b < sample.size(); ++b) {
        for (std::size_t g = 0; g < sample.size(); ++g) {
            if (compare(sample[g], sample[b]) != Cmp::LT) continue;
            for (std::uint64_t n = 2; n <= nmax; ++n) {
                const Ordinal& bn = at[b][n - 2];
                const Ordinal& gn = at[g][n - 2];
                if (compare(sample[g], bn) == Cmp::GT && compare(bn, gn) == Cmp::GT) {
                    out.push_back({sample[g], sample[b], n});
                }
            }
        }
    }
    return out;
}

}  // namespace ordlab
