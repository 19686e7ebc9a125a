#include "ordlab/peeling.hpp"

#include "peel_support.hpp"

#include <doctest.h>

#include <random>

using namespace ordlab;
using namespace peel_support;

namespace {

Ordinal P(const char* s) { return parse_ordinal(s); }

ContextPtr finite_ctx(const char* alpha, std::uint64_t size) {
    return make_context(P(alpha), std::make_shared<FiniteOrder>(size));
}

ContextPtr reversed_ctx(const char* alpha) { return make_context(P(alpha), std::make_shared<NatOrder>(true)); }

const Term& as_term(const PeelEntry& e) { return std::get<Term>(e); }

std::vector<Term> mixed_pool(const ContextPtr& ctx, std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    auto subs = small_subs(ctx->alpha);
    std::vector<Term> pool = term_corpus(ctx, {0, 1, 2}, subs, 2, 1);
    while (pool.size() < n) pool.push_back(random_term(rng, ctx, subs, 2, 2, 3));
    return pool;
}

}  // namespace

TEST_CASE("overline examples") {
    auto ctx = finite_ctx("2", 3);
    Term z = Term::zero(ctx);
    Term u = parse_term("phi[1](0)", ctx);
    CHECK(overline(parse_term("phi[0](0)", ctx), parse_term("phi[1](0)", ctx)) == z);
    CHECK(overline(u, u) == z);
    Term t = plus(phi(P("0"), u), parse_term("phi[0](0)", ctx));
    CHECK(overline(t, z) == u);
    CHECK(overline(parse_term("c(2)", ctx), z) == parse_term("c(2)", ctx));
    // first difference at the second summand
    Term a = parse_term("phi[1](0) + phi[1](0)", ctx);
    Term b = parse_term("phi[1](0) + phi[0](0)", ctx);
    CHECK(overline(a, b) == u);
    CHECK(overline(a, u) == u);
}

TEST_CASE("peel examples") {
    auto ctx = finite_ctx("1", 3);
    Peeler p(ctx);
    TermTuple a = parse_tuple("c(2); c(1)", ctx);
    auto id = p.peel(P("0"), a);
    REQUIRE(id.size() == 2);
    CHECK(as_term(id[0]) == a[0]);
    CHECK(as_term(id[1]) == a[1]);
    Term t = parse_term("phi[0](phi[0](0)) + phi[0](0)", ctx);
    auto one = p.peel(P("1"), {t});
    CHECK(as_term(one[0]) == overline(t, Term::zero(ctx)));
    // p-bar_1 and p-bar_2 leave the constants in place; p-bar_w peels them
    CHECK(p.peel_terms(P("1"), a) == a);
    CHECK(p.peel_terms(P("2"), a) == a);
    auto w = p.peel(P("w"), a);
    CHECK(std::get<XElem>(w[0]) == 2);
    CHECK(std::get<XElem>(w[1]) == 1);
    CHECK_THROWS_AS(p.peel(P("w+1"), a), std::invalid_argument);
    CHECK_THROWS_AS(p.peel(P("0"), {Term::zero(finite_ctx("1", 3))}), ContextMismatch);
    CHECK(format(parse_tuple("c(1) ;phi[0](0)", ctx)) == "c(1); phi[0](0)");
    CHECK_THROWS_AS(parse_tuple("c(1); c(9)", ctx), ParseError);
}

TEST_CASE("zeta examples") {
    auto ctx = finite_ctx("1", 3);
    Peeler p(ctx);
    for (const char* s : {"c(1)", "phi[0](0) + phi[0](0)", "0"}) {
        Term t = parse_term(s, ctx);
        CHECK(p.zeta({t, t}) == P("0"));
    }
    CHECK_FALSE(p.zeta(parse_tuple("c(2); c(1)", ctx)).has_value());
    auto z = p.zeta(parse_tuple("c(1); c(2)", ctx));
    REQUIRE(z.has_value());
    CHECK(compare(*z, P("w")) != Cmp::GT);
    CHECK(z == zeta_full(p, parse_tuple("c(1); c(2)", ctx)));
    // a singleton is compared against a trailing 0
    CHECK_FALSE(p.zeta(parse_tuple("c(0)", ctx)).has_value());
    CHECK(p.zeta(parse_tuple("0", ctx)) == P("0"));
}

TEST_CASE("color4 clauses") {
    auto ctx = finite_ctx("1", 3);
    Peeler p(ctx);
    CHECK(p.color4(parse_tuple("c(2); c(1); c(0)", ctx)) == 0);
    CHECK(p.color4(parse_tuple("c(0); c(1); c(2)", ctx)) == 2);
    CHECK(p.color4(parse_tuple("c(1); c(2); c(1)", ctx)) == 3);
    CHECK_THROWS_AS(p.color4(parse_tuple("c(1)", ctx)), std::invalid_argument);

    // Every clause against zetas computed by the full scan.
    auto pool = mixed_pool(ctx, 5, 80);
    std::mt19937_64 rng(6);
    std::array<int, 4> seen{};
    for (int k = 0; k < 3000; ++k) {
        TermTuple a = random_tuple(rng, pool, 3);
        auto za = zeta_full(p, a);
        auto zb = zeta_full(p, TermTuple(a.begin() + 1, a.end()));
        unsigned want = !za ? 0 : !zb ? 3 : *za > *zb ? 1 : *za == *zb ? 2 : 3;
        unsigned got = p.color4(a);
        CHECK(got == want);
        ++seen[got];
    }
    for (int c = 0; c < 4; ++c) {
        CAPTURE(c);
        CHECK(seen[c] > 0);
    }
}

TEST_CASE("basic peeling: Sub membership along the indices") {
    for (const char* alpha : {"1", "2", "w"}) {
        auto ctx = finite_ctx(alpha, 3);
        Peeler p(ctx);
        auto pool = mixed_pool(ctx, 11, 150);
        auto rhos = sample_indices(P(alpha));
        std::mt19937_64 rng(12);
        for (int k = 0; k < 400; ++k) {
            TermTuple a = random_tuple(rng, pool, 1 + k % 3);
            std::vector<PeelTuple> res;
            for (const auto& r : rhos) res.push_back(p.peel(r, a));
            for (std::size_t j = 1; j < rhos.size(); ++j) {
                for (std::size_t i = 0; i < j; ++i) {
                    for (std::size_t e = 0; e < a.size(); ++e) {
                        CAPTURE(format(a));
                        CAPTURE(format(rhos[j]));
                        CHECK(in_sub(res[j][e], res[i][e]));
                    }
                }
            }
            // every entry at omega^alpha is 0 or an element of X
            for (const auto& e : res.back()) {
                CHECK((std::holds_alternative<XElem>(e) || as_term(e).is_zero()));
            }
        }
    }
}

TEST_CASE("basic peeling: shape of the stabilized tuple") {
    for (const char* alpha : {"1", "2", "w"}) {
        auto ctx = finite_ctx(alpha, 3);
        Peeler p(ctx);
        auto pool = mixed_pool(ctx, 13, 150);
        std::mt19937_64 rng(14);
        for (int k = 0; k < 300; ++k) {
            TermTuple a = random_tuple(rng, pool, 1 + k % 3);
            for (const auto& d : sample_deltas(P(alpha))) {
                for (const auto& t : p.peel_below(d, a)) {
                    CAPTURE(format(a));
                    CAPTURE(format(d));
                    CHECK(stabilized_shape(t, d));
                }
            }
        }
    }
}

TEST_CASE("convergence: peeling past the bound changes nothing") {
    for (const char* alpha : {"1", "2", "w"}) {
        auto ctx = finite_ctx(alpha, 3);
        Peeler p(ctx);
        auto pool = mixed_pool(ctx, 17, 150);
        std::mt19937_64 rng(18);
        for (int k = 0; k < 200; ++k) {
            TermTuple a = random_tuple(rng, pool, 1 + k % 3);
            for (const auto& d : sample_deltas(P(alpha))) {
                for (std::size_t i = 0; i < a.size(); ++i) {
                    std::uint64_t n = p.norm(a[i]);
                    Ordinal bound = p.convergence_bound(d, a[i]);
                    Term at = p.peel_terms(bound, a)[i];
                    for (std::uint64_t j = 1; j <= 3; ++j) {
                        for (const Ordinal& r : {add(bound, Ordinal::nat(j)),
                                                 mul_nat(Ordinal::omega_pow(fund(d, n)), n + j),
                                                 mul_nat(Ordinal::omega_pow(fund(d, n + j)), n + j)}) {
                            CAPTURE(format(a));
                            CAPTURE(format(r));
                            CHECK(p.peel_terms(r, a)[i] == at);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("bounded peeling agrees with the reference limits") {
    for (const char* alpha : {"1", "2", "w"}) {
        auto ctx = finite_ctx(alpha, 3);
        Peeler p(ctx);
        RefPeeler ref(ctx, 12);
        auto pool = mixed_pool(ctx, 29, 150);
        std::mt19937_64 rng(30);
        for (int k = 0; k < 150; ++k) {
            TermTuple a = random_tuple(rng, pool, 1 + k % 3);
            CAPTURE(format(a));
            for (const auto& d : sample_deltas(P(alpha))) {
                CAPTURE(format(d));
                CHECK(p.peel_below(d, a) == ref.limit(d, a));
            }
            for (const auto& r : sample_indices(P(alpha))) {
                if (r == p.top()) continue;
                CAPTURE(format(r));
                CHECK(p.peel_terms(r, a) == ref.peel_terms(r, a));
            }
        }
    }
}

TEST_CASE("zeta lies in S(A(0)) and matches the full scan") {
    for (const char* alpha : {"1", "2", "w"}) {
        auto ctx = finite_ctx(alpha, 3);
        Peeler p(ctx);
        auto pool = mixed_pool(ctx, 19, 150);
        std::mt19937_64 rng(20);
        for (int k = 0; k < 300; ++k) {
            TermTuple a = random_tuple(rng, pool, 1 + k % 3);
            auto z = p.zeta(a);
            CAPTURE(format(a));
            CHECK(z == zeta_full(p, a));
            if (z && *z != p.top()) {
                auto s = zeta_candidates(a.front());
                CHECK(std::find(s.begin(), s.end(), *z) != s.end());
            }
        }
    }
}

TEST_CASE("peeling does not look at earlier entries") {
    for (const char* alpha : {"1", "2", "w"}) {
        auto ctx = finite_ctx(alpha, 3);
        Peeler p(ctx);
        auto pool = mixed_pool(ctx, 23, 150);
        auto rhos = sample_indices(P(alpha));
        std::mt19937_64 rng(24);
        for (int k = 0; k < 200; ++k) {
            TermTuple a = random_tuple(rng, pool, 2 + k % 3);
            TermTuple tail(a.begin() + 1, a.end());
            for (const auto& r : rhos) {
                auto full = p.peel(r, a);
                auto part = p.peel(r, tail);
                REQUIRE(part.size() + 1 == full.size());
                for (std::size_t i = 0; i < part.size(); ++i) {
                    CHECK(compare_entry(part[i], full[i + 1], ctx) == Cmp::EQ);
                }
            }
        }
    }
}

TEST_CASE("compare_entry") {
    auto ctx = finite_ctx("1", 3);
    PeelEntry z = Term::zero(ctx);
    PeelEntry x = XElem{0};
    CHECK(compare_entry(z, x, ctx) == Cmp::LT);
    CHECK(compare_entry(x, z, ctx) == Cmp::GT);
    CHECK(compare_entry(XElem{2}, XElem{1}, ctx) == Cmp::GT);
    CHECK_THROWS_AS(compare_entry(parse_term("c(1)", ctx), x, ctx), std::logic_error);
    CHECK(format(x, ctx) == "0");
}

TEST_CASE("descending sequences and build_M") {
    auto ctx = reversed_ctx("1");
    Peeler p(ctx);
    auto sigma = sample_sequence(ctx, 0, 1000);
    MTable t = build_M(sigma, 6, p);
    REQUIRE(t.m.size() == 6);
    CHECK(t.m[0] == 0);
    // |c(i)| = 4, so M = 0, 7, 8, 9, ...
    CHECK(t.m[1] == p.norm(sigma.at(0)) + 3);
    CHECK(t.m == std::vector<std::uint64_t>{0, 7, 8, 9, 10, 11});
    CHECK(t.tau_of(7) == sigma.at(0));
    CHECK(t.tau_of(8) == sigma.at(7));
    CHECK(t.minus() == FinSet{7, 8, 9, 10, 11});
    CHECK_THROWS_AS(t.tau_of(0), std::invalid_argument);
    for (std::size_t i = 1; i < t.m.size(); ++i) {
        CHECK(t.m[i] > t.m[i - 1]);
        CHECK(p.norm(t.tau[i]) + 2 < t.m[i]);
    }

    // The literal recursion M(1) = |sigma(0)| + 3, on a first term of norm 5.
    auto fctx = finite_ctx("1", 3);
    Peeler fp(fctx);
    std::optional<Term> five;
    for (const auto& s : term_corpus(fctx, {0, 1, 2}, {P("0")}, 2, 2)) {
        if (fp.norm(s) == 5) {
            five = s;
            break;
        }
    }
    REQUIRE(five.has_value());
    DescendingSeq one([&](std::uint64_t) { return *five; }, 1);
    MTable t5 = build_M(one, 2, fp);
    CHECK(t5.m[1] == 8);
    CHECK(t5.tau_of(8) == *five);

    DescendingSeq flat([&](std::uint64_t) { return Term::constant(ctx, 3); }, 100);
    CHECK_THROWS_AS(build_M(flat, 3, p), DescentViolation);
    auto short_seq = sample_sequence(ctx, 0, 5);
    CHECK_THROWS_AS(build_M(short_seq, 4, p), FuelExhausted);
}

TEST_CASE("prefix lemma: p_nu depends on the (1+nu)-size prefix only") {
    for (const char* alpha : {"1", "2", "w"}) {
        auto ctx = reversed_ctx(alpha);
        Peeler p(ctx);
        std::vector<Ordinal> nus;
        for (const char* s : {"0", "1", "2", "3", "w", "w+1", "w*2"}) {
            if (compare(P(s), p.top()) != Cmp::GT) nus.push_back(P(s));
        }
        std::size_t tested = 0;
        for (int kind = 0; kind < 3; ++kind) {
            auto sigma = sample_sequence(ctx, kind, 100000);
            MTable t = build_M(sigma, 90, p);
            FinSet mm = t.minus();
            for (std::size_t start = 0; start < 8; ++start) {
                FinSet s = mm.drop(start).prefix(60);
                for (const auto& nu : nus) {
                    Ordinal need = add(Ordinal::nat(1), nu);
                    if (!is_large(need, s)) continue;
                    ++tested;
                    NumStream xs = NumStream::of(s);
                    FinSet u = min_exact_prefix(need, xs);
                    CAPTURE(alpha);
                    CAPTURE(kind);
                    CAPTURE(format(nu));
                    auto pu = p.peel(nu, t.tau_of(u));
                    for (std::size_t len = u.size(); len <= s.size(); len += 7) {
                        auto ps = p.peel(nu, t.tau_of(s.prefix(len)));
                        CHECK(compare_entry(pu[0], ps[0], ctx) == Cmp::EQ);
                    }
                }
            }
        }
        CAPTURE(alpha);
        CHECK(tested >= 8 * 3 * (nus.size() - 2));
    }
}

TEST_CASE("colorbar") {
    auto ctx = reversed_ctx("1");
    Peeler p(ctx);
    for (int kind = 0; kind < 3; ++kind) {
        auto sigma = sample_sequence(ctx, kind, 100000);
        MTable t = build_M(sigma, 70, p);
        FinSet mm = t.minus();
        for (std::size_t start = 0; start < 20; ++start) {
            FinSet s = mm.drop(start).prefix(45);
            if (!is_large(p.top(), s)) continue;
            CAPTURE(kind);
            CAPTURE(format(s));
            CHECK(colorbar(s, t, p, false) == colorbar(s, t, p, true));
            NumStream xs = NumStream::of(s);
            FinSet u = min_exact_prefix(p.top(), xs);
            CHECK(colorbar(u, t, p) == colorbar(s, t, p));
        }
        CHECK_THROWS_AS(colorbar(mm.prefix(3), t, p), std::invalid_argument);
        CHECK_THROWS_AS(colorbar(FinSet{1, 2, 3, 4, 5}, t, p), std::invalid_argument);
    }
    // a table whose margin is broken by hand is rejected
    auto sigma = sample_sequence(ctx, 0, 1000);
    MTable bad = build_M(sigma, 20, p);
    bad.m[1] = 5;
    FinSet u(std::vector<std::uint64_t>(bad.m.begin() + 1, bad.m.begin() + 7));
    CHECK_THROWS_AS(colorbar(u, bad, p), std::invalid_argument);
}

TEST_CASE("extract_descending") {
    auto ctx = reversed_ctx("1");
    Peeler p(ctx);
    auto sigma = sample_sequence(ctx, 0, 100000);
    MTable t = build_M(sigma, 50, p);
    FinSet h = t.minus();
    auto xs = extract_descending(h, t, p);
    // s_0 = {7..14} with tau(7) = c(0); s_1 = {8..16} with tau(8) = c(7)
    REQUIRE(xs.size() >= 2);
    CHECK(xs[0] == 0);
    CHECK(xs[1] == 7);
    for (std::size_t i = 1; i < xs.size(); ++i) CHECK(xs[i] > xs[i - 1]);
    CHECK(extract_descending(h.prefix(4), t, p).empty());

    // A window of nonzero color raises a witness.
    auto sigma3 = sample_sequence(ctx, 2, 100000);
    MTable t3 = build_M(sigma3, 60, p);
    bool found = false;
    for (std::size_t start = 0; start < 30 && !found; ++start) {
        FinSet w = t3.minus().drop(start);
        try {
            (void)extract_descending(w, t3, p);
        } catch (const ColorWitness& e) {
            found = true;
            CHECK(e.color() != 0);
            CHECK(colorbar(e.set(), t3, p) == e.color());
        }
    }
    CHECK(found);
    auto chain = zeta_chain(t3.minus(), t3, p, 5);
    CHECK(chain.size() == 5);
}

TEST_CASE("greedy_homog_search") {
    ColoringHandle constant{P("w"), ColoringHandle::Shape::Plain, 2, [](const FinSet&) { return 1u; }};
    FinSet window({2, 3, 4, 5, 6, 7, 8, 9, 10});
    auto r = greedy_homog_search(window, constant, 1);
    CHECK(r.best == window);
    CHECK_FALSE(r.exhausted);
    CHECK(greedy_homog_search(FinSet(), constant, 1).best.empty());

    ColoringHandle parity{P("w"), ColoringHandle::Shape::Plain, 2,
                          [](const FinSet& s) { return static_cast<unsigned>(s.min() % 2); }};
    for (std::uint64_t lo = 1; lo <= 4; ++lo) {
        std::vector<std::uint64_t> xs;
        for (std::uint64_t v = lo; v < lo + 12; ++v) xs.push_back(v);
        FinSet w(xs);
        for (unsigned target = 0; target < 2; ++target) {
            auto res = greedy_homog_search(w, parity, target);
            REQUIRE_FALSE(res.exhausted);
            REQUIRE_FALSE(res.truncated);
            // exhaustive oracle over all subsets of the window
            std::size_t best = 0;
            for (std::uint32_t mask = 0; mask < (1u << xs.size()); ++mask) {
                std::vector<std::uint64_t> sub;
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    if (mask >> i & 1u) sub.push_back(xs[i]);
                }
                FinSet hs(sub);
                bool ok = true;
                for (const auto& s : enumerate_exact(P("w"), hs)) ok = ok && s.min() % 2 == target;
                if (ok) best = std::max(best, hs.size());
            }
            CAPTURE(lo);
            CAPTURE(target);
            CHECK(res.best.size() == best);
            for (const auto& s : enumerate_exact(P("w"), res.best)) CHECK(s.min() % 2 == target);
        }
    }

    SearchBudget tiny{5, 10};
    auto cut = greedy_homog_search(FinSet({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}), parity, 0, tiny);
    CHECK(cut.exhausted);
}

TEST_CASE("coloring handles") {
    ColoringHandle h{P("2"), ColoringHandle::Shape::Uplus, 2, [](const FinSet& s) { return static_cast<unsigned>(s.max() % 2); }};
    CHECK(h.in_domain(FinSet{1, 2, 5}));
    CHECK_FALSE(h.in_domain(FinSet{1, 2}));
    CHECK(h(FinSet{1, 2, 5}) == 1);
    CHECK_THROWS_AS(h(FinSet{1}), std::invalid_argument);
    std::vector<FinSet> seen;
    visit_domain(h, FinSet{1, 2, 3, 4}, std::nullopt, [&](const FinSet& s) {
        seen.push_back(s);
        return true;
    });
    CHECK(seen.size() == 4);  // C(4, 3)
    seen.clear();
    visit_domain(h, FinSet{1, 2, 3, 4}, 4, [&](const FinSet& s) {
        seen.push_back(s);
        return true;
    });
    CHECK(seen.size() == 3);

    // The visitor agrees with the enumeration in largeness.
    ColoringHandle w{P("w+1"), ColoringHandle::Shape::Plain, 2, [](const FinSet&) { return 0u; }};
    FinSet g({1, 2, 3, 4, 5, 6, 7, 8, 9});
    std::vector<FinSet> got;
    visit_domain(w, g, std::nullopt, [&](const FinSet& s) {
        got.push_back(s);
        return true;
    });
    auto want = enumerate_exact(P("w+1"), g);
    std::sort(got.begin(), got.end(), code_less);
    CHECK(got == want);

    ColoringHandle bad{P("1"), ColoringHandle::Shape::Plain, 2, [](const FinSet&) { return 7u; }};
    CHECK_THROWS_AS(bad(FinSet{3}), std::logic_error);
    auto rep = verify_homogeneous(ColoringHandle{P("1"), ColoringHandle::Shape::Plain, 2,
                                                 [](const FinSet& s) { return static_cast<unsigned>(s.min() % 2); }},
                                  FinSet{2, 4, 5}, 100);
    CHECK_FALSE(rep.homogeneous);
    CHECK(rep.witness_b == FinSet{5});
}
