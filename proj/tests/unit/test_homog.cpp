#include "ordlab/homog.hpp"
#include "ordlab/peeling.hpp"

#include "homog_support.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace ordlab;
using namespace homog_support;

namespace {

Ordinal P(const char* s) { return parse_ordinal(s); }

// Colors of every domain set inside h, found by walking all subsets.
std::set<unsigned> brute_colors(const ColoringHandle& c, const FinSet& h) {
    REQUIRE(h.size() <= 16);
    std::set<unsigned> out;
    for (std::uint32_t mask = 0; mask < (1U << h.size()); ++mask) {
        std::vector<std::uint64_t> s;
        for (std::size_t i = 0; i < h.size(); ++i) {
            if (mask >> i & 1) s.push_back(h[i]);
        }
        FinSet fs(s);
        if (c.in_domain(fs)) out.insert(c(fs));
    }
    return out;
}

void check_state(const ColoringHandle& c, const BuilderState& st) {
    CHECK(st.status != BuilderState::Status::BudgetExhausted);
    CHECK_FALSE(st.truncated);
    auto req = check_requirements(c, st);
    CHECK_MESSAGE(req.empty(), (req.empty() ? "" : req.front()));
    HomogeneityReport rep = audit_prefix(c, st.prefix);
    CHECK(rep.homogeneous);
    CHECK(rep.complete);
    if (rep.tested > 0) CHECK(rep.color == st.color);
}

}  // namespace

TEST_CASE("large_prefix_len") {
    CHECK(large_prefix_len(P("w"), FinSet{2, 3, 4, 5}) == 3U);
    CHECK(large_prefix_len(P("w"), FinSet{2, 3}) == std::nullopt);
    CHECK(large_prefix_len(P("0"), FinSet{}) == 0U);
    CHECK(large_prefix_len(P("3"), FinSet{7, 8, 9}) == 3U);
}

TEST_CASE("reduce_dimension") {
    NormContext norms;
    const std::uint64_t floor = norms.norm(P("w"));

    SUBCASE("same dimension is the identity") {
        ColoringHandle c = handle(P("w"), max_parity);
        Reduction r = reduce_dimension(c, P("1"), norms);
        CHECK(r.coloring.alpha == P("w"));
        CHECK(r.floor == 0);
        CHECK(r.coloring(FinSet{2, 3, 5}) == 1);
        CHECK(r.transfer(FinSet{4, 5}) == FinSet{4, 5});
    }
    SUBCASE("constant stays constant") {
        Reduction r = reduce_dimension(constant(P("w"), 1), P("2"), norms);
        CHECK(r.coloring.alpha == P("w^2"));
        std::mt19937_64 rng(5);
        for (int k = 0; k < 20; ++k) {
            NumStream xs = NumStream::arithmetic(floor + 1 + rng() % 3, 1 + rng() % 2, 1'000'000);
            CHECK(r.coloring(min_exact_prefix(P("w^2"), xs)) == 1);
        }
    }
    SUBCASE("omega^2 over an omega coloring") {
        // c(t) = parity of max t, so d(s) is the parity of s[min s].
        ColoringHandle c = handle(P("w"), max_parity);
        Reduction r = reduce_dimension(c, P("2"), norms);
        CHECK(r.floor == floor);
        FinSet w = interval(floor + 1, floor + 12);
        // Every omega-size t in the window and its omega^2-size extension by
        // consecutive numbers.
        std::size_t seen = 0;
        for (const FinSet& t : enumerate_exact(P("w"), w)) {
            std::vector<std::uint64_t> v = t.elems();
            NumStream tail([v, i = std::size_t{0}, next = t.max() + 1]() mutable -> std::optional<std::uint64_t> {
                return i < v.size() ? v[i++] : next++;
            }, 100000);
            FinSet s = min_exact_prefix(P("w^2"), tail);
            REQUIRE(t.is_prefix_of(s));
            CHECK(r.coloring(s) == c(t));
            ++seen;
        }
        CHECK(seen > 0);
        // The odd numbers are homogeneous for d; the transfer keeps them and
        // they are homogeneous for c on the window.
        std::vector<std::uint64_t> odds;
        for (std::uint64_t x = floor + 1; odds.size() < 3000; ++x) {
            if (x % 2) odds.push_back(x);
        }
        FinSet h(odds);
        std::mt19937_64 rng(17);
        for (int k = 0; k < 50; ++k) {
            std::vector<std::uint64_t> pick{h[0]};
            for (std::uint64_t v : h.drop(1)) {
                if (rng() % 4 != 0) pick.push_back(v);
            }
            NumStream xs = NumStream::of(FinSet(pick));
            CHECK(r.coloring(min_exact_prefix(P("w^2"), xs)) == 1);
        }
        FinSet moved = r.transfer(h);
        CHECK(moved == h);
        HomogeneityReport rep = audit_prefix(c, moved.prefix(12));
        CHECK(rep.homogeneous);
        CHECK(rep.tested > 0);
    }
    SUBCASE("norm guard") {
        Reduction r = reduce_dimension(handle(P("w"), max_parity), P("2"), norms);
        NumStream xs = NumStream::arithmetic(floor, 1, 100000);
        FinSet s = min_exact_prefix(P("w^2"), xs);
        CHECK_THROWS_AS(r.coloring(s), NormGuardViolated);
    }
    CHECK_THROWS_AS(reduce_dimension(handle(P("w^2"), max_parity), P("1"), norms), std::invalid_argument);
    CHECK_THROWS_AS(reduce_dimension(handle(P("w+1"), max_parity), P("2"), norms), std::invalid_argument);
}

TEST_CASE("reduce_to_lead") {
    SUBCASE("omega + 1 drops one element") {
        ColoringHandle c = handle(P("w"), max_parity);
        Reduction r = reduce_to_lead(c, P("w+1"));
        CHECK(r.coloring.alpha == P("w+1"));
        // {1} then the omega-size {2, 3, 4}
        CHECK(r.coloring(FinSet{1, 2, 3, 4}) == c(FinSet{2, 3, 4}));
        CHECK(r.coloring(FinSet{1, 3, 5, 6, 7}) == c(FinSet{3, 5, 6, 7}));
        FinSet w = interval(1, 10);
        BuilderState st = solve(r.coloring, w);
        check_state(r.coloring, st);
        FinSet moved = r.transfer(st.prefix);
        CHECK(moved == st.prefix.drop(1));
        CHECK(brute_colors(c, moved).size() <= 1);
        CHECK(audit_prefix(c, moved).homogeneous);
    }
    SUBCASE("omega^2 + omega drops an omega-size prefix") {
        Reduction r = reduce_to_lead(handle(P("w^2"), min_parity), P("w^2+w"));
        CHECK(r.transfer(FinSet{2, 3, 4, 5, 6}) == FinSet{5, 6});
        CHECK(r.transfer(FinSet{2, 3}) == FinSet{});
    }
    SUBCASE("indecomposable alpha is the identity") {
        ColoringHandle c = handle(P("w^2"), sum_parity);
        Reduction r = reduce_to_lead(c, P("w^2"));
        CHECK(r.coloring.alpha == P("w^2"));
        CHECK(r.transfer(FinSet{3, 9}) == FinSet{3, 9});
    }
    SUBCASE("constant stays constant") {
        Reduction r = reduce_to_lead(constant(P("w"), 0), P("w+2"));
        for (const FinSet& t : enumerate_exact(P("w+2"), interval(1, 9))) CHECK(r.coloring(t) == 0);
    }
    CHECK_THROWS_AS(reduce_to_lead(handle(P("w"), sum_parity), P("w^2+1")), std::invalid_argument);
}

TEST_CASE("solve_uplus") {
    using Shape = ColoringHandle::Shape;
    SUBCASE("constant coloring keeps the window") {
        ColoringHandle d = constant(P("w"), 1, 2, Shape::Uplus);
        FinSet w = interval(1, 16);
        BuilderState st = solve_uplus(d, w);
        check_state(d, st);
        CHECK(st.prefix == w);
    }
    SUBCASE("parity of the first element") {
        ColoringHandle d = handle(P("w"), min_parity, 2, Shape::Uplus);
        FinSet w = interval(1, 14);
        BuilderState st = solve_uplus(d, w);
        check_state(d, st);
        REQUIRE(st.color);
        // every stage is constant on its window, so Z is the window and the
        // pigeonhole keeps one parity plus the uncolored tail
        CHECK(st.z == w);
        for (const auto& rec : st.stages) {
            if (rec.color) CHECK(*rec.color == rec.h.min() % 2);
        }
        for (std::uint64_t v : st.prefix) {
            const auto& rec = st.stages[v - 1];
            CHECK((!rec.color || *rec.color == *st.color));
        }
        CHECK(brute_colors(d, st.prefix) == std::set<unsigned>{*st.color});
    }
    SUBCASE("mixing coloring exhausts a small budget") {
        ColoringHandle d = handle(P("w"), mixing, 2, Shape::Uplus);
        BuildBudget b;
        b.evaluations = 5000;
        BuilderState st = solve_uplus(d, interval(1, 30), b);
        CHECK(st.status == BuilderState::Status::BudgetExhausted);
        REQUIRE_FALSE(st.failure_path.empty());
        CHECK(st.failure_path.front() == st.stages.size());
        CHECK(st.failure == "evaluation budget");
        CHECK(st.prefix.empty());
    }
    CHECK_THROWS_AS(solve_uplus(handle(P("w"), min_parity), interval(1, 5)), std::invalid_argument);
}

TEST_CASE("solve_indecomposable") {
    SUBCASE("omega stages work on h_i-size sets") {
        for (const auto& [name, f] : fixed_colorings()) {
            CAPTURE(name);
            ColoringHandle c = handle(P("w"), f);
            FinSet w = interval(1, 20);
            BuilderState st = solve_indecomposable(c, w);
            check_state(c, st);
            for (const auto& rec : st.stages) CHECK(rec.sub_alpha == Ordinal::nat(rec.h.min()));
            // direct search over the whole window
            std::size_t direct = 0;
            for (unsigned j = 0; j < 2; ++j) {
                SearchResult res = greedy_homog_search(w, c, j, SearchBudget{2'000'000, 1'000'000});
                CHECK(audit_prefix(c, res.best).homogeneous);
                if (!res.exhausted) direct = std::max(direct, res.best.size());
            }
            if (direct > 0) CHECK(st.prefix.size() <= direct);
            CHECK(st.prefix.size() >= 10);
        }
    }
    SUBCASE("constant coloring keeps the window") {
        FinSet w = interval(1, 18);
        BuilderState st = solve_indecomposable(constant(P("w"), 0), w);
        CHECK(st.prefix == w);
        CHECK(st.color == 0U);
    }
    SUBCASE("one color keeps the window") {
        FinSet w = interval(1, 12);
        ColoringHandle c = handle(P("w^2"), mixing, 1);
        BuilderState st = solve_indecomposable(c, w);
        check_state(c, st);
        CHECK(st.prefix == w);
    }
    SUBCASE("omega^2 recurses into decomposable stages") {
        for (const auto& [name, f] : fixed_colorings()) {
            CAPTURE(name);
            for (auto shape : {ColoringHandle::Shape::Plain, ColoringHandle::Shape::Uplus}) {
                ColoringHandle c = handle(P("w^2"), f, 2, shape);
                BuilderState st = solve_indecomposable(c, interval(1, 11));
                check_state(c, st);
                CHECK(st.method == "staged");
                CHECK(st.stages.at(1).method == "scheduled");
                CHECK(brute_colors(c, st.prefix).size() <= 1);
            }
        }
    }
    CHECK_THROWS_AS(solve_indecomposable(handle(P("w+1"), min_parity), interval(1, 5)), std::invalid_argument);
    CHECK_THROWS_AS(solve_indecomposable(handle(P("4"), min_parity), interval(1, 5)), std::invalid_argument);
}

TEST_CASE("solve_decomposable") {
    SUBCASE("omega + 1 stage trace") {
        ColoringHandle c = constant(P("w+1"), 1);
        BuilderState st = solve_decomposable(c, interval(1, 10));
        check_state(c, st);
        REQUIRE(st.stages.size() >= 6);
        const std::vector<FinSet> hs{{1, 2}, {1, 3}, {2, 3}, {1, 4}, {2, 4}, {3, 4}};
        const std::vector<FinSet> ws{interval(3, 10), interval(4, 10), interval(4, 10),
                                     interval(5, 10), interval(5, 10), interval(5, 10)};
        for (std::size_t i = 0; i < 6; ++i) {
            CAPTURE(i);
            CHECK(st.stages[i].h == hs[i]);
            CHECK(st.stages[i].window == ws[i]);
            CHECK(st.stages[i].sub_alpha == Ordinal::nat(hs[i].max()));
            CHECK(st.stages[i].jump_level == Ordinal::nat(hs[i].max() + 1));
            CHECK(st.stages[i].color == 1U);
        }
        // all 45 pairs, each chosen once
        CHECK(st.stages.size() == 45);
        CHECK(st.z == interval(1, 10));
        CHECK(st.prefix == interval(1, 10));
    }
    SUBCASE("coverage of Z by the chosen sets") {
        for (const auto& [name, f] : fixed_colorings()) {
            CAPTURE(name);
            ColoringHandle c = handle(P("w+1"), f);
            BuilderState st = solve_decomposable(c, interval(1, 14));
            check_state(c, st);
            std::set<std::vector<std::uint64_t>> hs;
            for (const auto& rec : st.stages) hs.insert(rec.h.elems());
            for (const FinSet& u : enumerate_exact(P("2"), st.z)) CHECK(hs.count(u.elems()) == 1);
            CHECK(brute_colors(c, st.prefix).size() <= 1);
        }
    }
    SUBCASE("uplus shape and a limit alpha'") {
        for (const char* a : {"w+1", "w*2"}) {
            CAPTURE(a);
            ColoringHandle c = handle(P(a), sum_parity, 2, ColoringHandle::Shape::Uplus);
            BuilderState st = solve_decomposable(c, interval(1, 12));
            check_state(c, st);
            CHECK(brute_colors(c, st.prefix).size() <= 1);
        }
    }
    SUBCASE("a window without eligible sets starves") {
        // (1 uplus omega)-size sets with minimum 5 need seven elements
        ColoringHandle c = handle(P("w*2"), min_parity);
        BuilderState st = solve_decomposable(c, interval(5, 9));
        CHECK(st.status == BuilderState::Status::Starved);
        CHECK(st.stages.empty());
        CHECK(st.leftover == interval(5, 9));
        CHECK(st.prefix == interval(5, 9));
        check_state(c, st);
    }
    CHECK_THROWS_AS(solve_decomposable(handle(P("w^2"), min_parity), interval(1, 5)), std::invalid_argument);
}

TEST_CASE("finite dimensions") {
    for (const auto& [name, f] : fixed_colorings()) {
        CAPTURE(name);
        ColoringHandle c = handle(P("3"), f);
        BuilderState st = solve(c, interval(1, 16));
        check_state(c, st);
        CHECK(st.method == "finite-search");
        CHECK(st.prefix.size() >= 8);
        CHECK(brute_colors(c, st.prefix).size() == 1);
    }
    CHECK(solve_finite(constant(P("0"), 1), interval(1, 4)).color == 1U);
}

TEST_CASE("determinism and requirement checks catch tampering") {
    ColoringHandle c = handle(P("w+1"), max_parity);
    BuilderState a = solve(c, interval(1, 14));
    BuilderState b = solve(c, interval(1, 14));
    CHECK(a == b);
    REQUIRE(check_requirements(c, a).empty());

    BuilderState bad = a;
    bad.stages[2].window = interval(1, 14);
    CHECK_FALSE(check_requirements(c, bad).empty());
    bad = a;
    std::swap(bad.stages[1], bad.stages[2]);
    CHECK_FALSE(check_requirements(c, bad).empty());
    bad = a;
    bad.stages[0].color = 1 - bad.stages[0].color.value_or(0);
    CHECK_FALSE(check_requirements(c, bad).empty());

    ColoringHandle w = handle(P("w"), sum_parity);
    BuilderState s = solve(w, interval(1, 16));
    REQUIRE(check_requirements(w, s).empty());
    BuilderState bad2 = s;
    bad2.stages[1].h = FinSet{bad2.stages[1].h.min() + 1};
    CHECK_FALSE(check_requirements(w, bad2).empty());
}

TEST_CASE("audit_prefix agrees with the domain walker") {
    std::mt19937_64 rng(8);
    for (const char* a : {"2", "w", "w+1", "w*2"}) {
        for (auto shape : {ColoringHandle::Shape::Plain, ColoringHandle::Shape::Uplus}) {
            ColoringHandle c = handle(P(a), mixing, 2, shape);
            for (int k = 0; k < 10; ++k) {
                std::vector<std::uint64_t> v;
                for (std::uint64_t x = 1; x <= 14; ++x) {
                    if (rng() % 3 != 0) v.push_back(x);
                }
                FinSet h(v);
                HomogeneityReport x = audit_prefix(c, h);
                HomogeneityReport y = verify_homogeneous(c, h, 1'000'000);
                CHECK(x.homogeneous == y.homogeneous);
                if (x.homogeneous) CHECK(x.tested == y.tested);
                CHECK(x.homogeneous == (brute_colors(c, h).size() <= 1));
            }
        }
    }
}
