#include "ordlab/coloring.hpp"
#include "ordlab/jump.hpp"

#include "jump_support.hpp"

#include <doctest.h>

#include <random>

using namespace ordlab;
using namespace jump_support;

namespace {

Ordinal P(const char* s) { return parse_ordinal(s); }

OracleTable evens(std::uint64_t cap) {
    return OracleTable::of([](std::uint64_t v) { return v % 2 == 0; }, cap);
}

OracleFn table_fn(const OracleTable& t) {
    return [&t](std::uint64_t v) { return t.contains(v); };
}

OracleTable random_table(std::mt19937_64& rng, std::uint64_t cap) {
    OracleTable t(cap);
    for (std::uint64_t v = 0; v < cap; ++v) {
        if (rng() % 3 == 0) t.insert(v);
    }
    return t;
}

}  // namespace

TEST_CASE("program codes round-trip and every code decodes") {
    for (const auto& p : program_pool()) CHECK(decode_program(encode_program(p)) == p);
    CHECK(encode_program({}) == 1);
    CHECK(encode_program({Instr{}}) == 4);
    CHECK(decode_program(0) == Program{Instr{}});
    CHECK(decode_program(1).empty());
    // "1" then opcode 01 and a cut gamma field
    CHECK(decode_program(0b101) == Program{Instr{}});
    for (std::uint64_t e = 0; e < 5000; ++e) {
        Program p = decode_program(e);
        if (e > 1 && p != Program{Instr{}}) CHECK(encode_program(p) == e);
    }
}

TEST_CASE("assembler and disassembler") {
    Program p = assemble(kSearch);
    CHECK(assemble(disassemble(p)) == p);
    Program q = assemble("a: b: INC R3 # two labels\n decjz r3, a\n query 4\n DECJZ r1, 99\nHALT");
    REQUIRE(q.size() == 5);
    CHECK(q[1] == Instr{Instr::Op::DecJz, 3, 0});
    CHECK(q[2] == Instr{Instr::Op::Query, 4, 0});
    CHECK(q[3].target == 99);
    CHECK(assemble(disassemble(q)) == q);
    CHECK_THROWS_AS(assemble("JMP r1"), ParseError);
    CHECK_THROWS_AS(assemble("DECJZ r1, nowhere"), ParseError);
    CHECK_THROWS_AS(assemble("x: INC r1\nx: HALT"), ParseError);
    CHECK_THROWS_AS(assemble("INC"), ParseError);
    try {
        assemble("INC r1\n  QUERY rx");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 15);
    }
}

TEST_CASE("run_bounded examples") {
    OracleTable empty(100);
    BoundedRun h = run_bounded(4, empty, 7, 2);
    CHECK(format(h) == "Halted(0, 1, 0)");
    CHECK(!run_bounded(4, empty, 7, 1).halted());
    CHECK(!run_bounded(4, empty, 7, 0).halted());

    Program q = query_const(5);
    q.push_back(Instr{});
    OracleTable five = OracleTable::of(std::vector<std::uint64_t>{5}, 100);
    BoundedRun r = run_bounded(encode_program(q), five, 0, 10);
    CHECK(format(r) == "Halted(1, 7, 5)");
    CHECK(r.need() == 8);
    CHECK(!run_bounded(encode_program(q), five, 0, 7).halted());
    // the query value bounds the run as well
    BoundedRun big = run_program(assemble(kQueryInput), table_fn(empty), 50, 50);
    CHECK(big.steps == 1);
    CHECK(!big.halted());
    BoundedRun ok = run_program(assemble(kQueryInput), table_fn(empty), 50, 51);
    CHECK(ok.halted());
    CHECK(ok.need() == 51);

    OracleTable small(10);
    CHECK_THROWS_AS(run_program(query_const(12), table_fn(small), 0, 100), OracleCapExceeded);

    BoundedRun copy = run_program(assemble(kCopyInput), table_fn(empty), 9, 1000);
    CHECK(copy.output == 9);
    BoundedRun search = run_program(assemble(kSearch), table_fn(five), 2, 1000);
    CHECK(search.output == 5);
    CHECK(search.max_query == 5);
}

TEST_CASE("fuel monotonicity over the program pool") {
    std::mt19937_64 rng(7);
    OracleTable y = random_table(rng, 200);
    std::uint64_t halted = 0;
    for (const auto& p : program_pool()) {
        CompiledProgram cp(p);
        for (std::uint64_t x = 0; x < 6; ++x) {
            std::optional<BoundedRun> first;
            for (std::uint64_t m = 0; m <= 120; ++m) {
                BoundedRun r = cp.run(table_fn(y), x, m);
                if (first) {
                    REQUIRE(r.halted());
                    CHECK(r.output == first->output);
                    CHECK(r.steps == first->steps);
                } else if (r.halted()) {
                    first = r;
                    CHECK(r.steps < m);
                    CHECK(r.max_query.value_or(0) < m);
                    CHECK(r.need() == m);
                    ++halted;
                }
            }
        }
    }
    CHECK(halted > 100);
}

TEST_CASE("need with cycle detection agrees with plain runs") {
    std::mt19937_64 rng(11);
    OracleTable y = random_table(rng, 600);
    for (std::uint64_t e = 0; e < 3000; e += 3) {
        CompiledProgram cp(decode_program(e));
        for (std::uint64_t x = 0; x < 12; ++x) {
            BoundedRun r = cp.run(table_fn(y), x, 501);
            auto n = cp.need(table_fn(y), x, 500);
            REQUIRE(n.has_value() == r.halted());
            if (n) CHECK(*n == r.need());
        }
    }
    for (const auto& p : program_pool()) {
        CompiledProgram cp(p);
        for (std::uint64_t x = 0; x < 30; ++x) {
            BoundedRun r = cp.run(table_fn(y), x, 501);
            CHECK(cp.need(table_fn(y), x, 500).has_value() == r.halted());
        }
    }
}

TEST_CASE("ordinal codes and pairs") {
    JumpLab lab;
    std::vector<Ordinal> seen;
    std::vector<Nat> codes;
    for (const char* s : {"0", "1", "2", "3", "7", "w", "w+1", "w*2", "w*3+4", "w^2", "w^2+w", "w^3", "w^w", "w^(w+1)"}) {
        Ordinal g = P(s);
        Nat c = lab.ordinal_code(g);
        CHECK(c >= lab.norms().norm(g));
        CHECK(lab.decode_ordinal(c) == g);
        CHECK(std::find(codes.begin(), codes.end(), c) == codes.end());
        codes.push_back(c);
        Nat y = lab.pair(g, 3);
        if (y < 1'000'000'000) {
            auto u = lab.unpair(static_cast<std::uint64_t>(y));
            REQUIRE(u);
            CHECK(u->gamma == g);
            CHECK(u->z == 3);
        }
    }
    CHECK(lab.pair(P("0"), 0) == 15);
    CHECK(lab.pair(P("1"), 0) == 91);
    // codes that are not of the form pair(structural, norm) decode to nothing
    CHECK(!lab.decode_ordinal(0));
    CHECK(!lab.unpair(0));
    CHECK(lab.codebook() == std::vector<Ordinal>{P("0"), P("1"), P("2"), P("w")});
}

TEST_CASE("jump table approximations") {
    JumpLab lab(4096);
    FinSet x{0, 2, 4, 6};
    JumpTable t0 = tj_approx(x, P("0"), 64, lab);
    std::vector<std::uint64_t> base;
    for (auto v : x) base.push_back(static_cast<std::uint64_t>(lab.pair(P("0"), v)));
    CHECK(t0.table.members() == base);

    JumpTable t1 = tj_approx(x, P("1"), 64, lab);
    for (auto v : t0.table.members()) CHECK(t1.contains(v));
    // <HALT> has code 4
    CHECK(t1.contains(static_cast<std::uint64_t>(lab.pair(P("1"), 4))));
    CHECK(t1.contains(static_cast<std::uint64_t>(lab.pair(P("1"), 1))));
    CHECK(t1.undecided > 0);
    CHECK(t1.restrict(P("0"), lab).table == t0.table);

    JumpTable tw = tj_approx(x, P("w"), 64, lab);
    JumpTable t2 = tj_approx(x, P("2"), 64, lab);
    CHECK(tw.restrict(P("1"), lab).table == t1.table);
    CHECK(tw.table == t2.table);
    for (auto v : t1.table.members()) CHECK(t2.contains(v));

    for (const char* a : {"1", "2"}) {
        std::optional<JumpTable> prev;
        for (std::uint64_t fuel : {2, 4, 8, 32, 128, 1024}) {
            JumpTable cur = tj_approx(x, P(a), fuel, lab);
            if (prev) {
                for (auto v : prev->table.members()) CHECK(cur.contains(v));
            }
            prev = cur;
        }
    }
    CHECK_THROWS_AS(tj_approx(x, P("1"), 5000, lab), std::invalid_argument);
    CHECK(tj_approx(FinSet{100}, P("0"), 8, lab).dropped == 1);
}

TEST_CASE("machines M_a") {
    JumpLab lab;
    OracleTable a = evens(4096);
    MachineFamily mf(lab, a);
    const std::uint64_t y0 = static_cast<std::uint64_t>(lab.pair(P("0"), 2));
    const std::uint64_t y1 = static_cast<std::uint64_t>(lab.pair(P("0"), 3));
    CHECK(machine_M(P("1"), y0, FinSet{200}, a, lab));
    CHECK(!machine_M(P("1"), y1, FinSet{200}, a, lab));
    CHECK(!machine_M(P("1"), y0, FinSet{y0}, a, lab));
    // wrong shapes reject
    CHECK(!mf.accepts(P("1"), y0, FinSet{200, 201}));
    CHECK(!mf.accepts(P("2"), y0, FinSet{200}));
    CHECK(!mf.accepts(P("0"), y0, FinSet{}));
    // M_2(<2, z>, <x0, x1>) runs z on Y below x1; <1, z> is never accepted
    const std::uint64_t h = static_cast<std::uint64_t>(lab.pair(P("2"), 4));
    const std::uint64_t h1 = static_cast<std::uint64_t>(lab.pair(P("1"), 4));
    CHECK(!mf.accepts(P("2"), h1, FinSet{h + 1, h + 2}));
    CHECK(mf.accepts(P("2"), h, FinSet{h + 1, h + 2}));
    CHECK(!mf.accepts(P("2"), h, FinSet{h, h + 2}));
    // QUERY r0 has code 15 and halts after asking 0
    REQUIRE(encode_program(assemble("QUERY r0")) == 15);
    const std::uint64_t yq = static_cast<std::uint64_t>(lab.pair(P("2"), 15));
    CHECK(mf.accepts(P("2"), yq, FinSet{yq + 1, yq + 2}));
    CHECK(!mf.accepts(P("2"), yq, FinSet{yq + 1, yq + 2}.prefix(1)));
    CHECK(mf.y_set(P("1"), FinSet{yq + 2}).contains(y0));

    // limit clause unfolds along x0
    FinSet s = FinSet{3}.concat(FinSet{10, 11, 12});
    REQUIRE(is_exact(P("w"), s));
    for (std::uint64_t y = 0; y < 3; ++y) CHECK(mf.accepts(P("w"), y, s) == mf.accepts(P("3"), y, s.drop(1)));
    std::vector<std::uint64_t> tail;
    for (std::uint64_t v = 200; v < 300; ++v) tail.push_back(v);
    FinSet big = FinSet{100}.concat(FinSet(tail).prefix(100));
    REQUIRE(is_exact(P("w"), big));
    for (std::uint64_t y = 0; y < 100; ++y) CHECK(mf.accepts(P("w"), y, big) == mf.accepts(P("100"), y, big.drop(1)));
}

TEST_CASE("accept sets match when descending along s") {
    JumpLab lab;
    MachineFamily mf(lab, evens(4096));
    auto inst = lemma_instances(120, 5);
    REQUIRE(inst.size() >= 100);
    std::uint64_t compared = 0;
    for (const auto& in : inst) {
        CHECK(lemma_mismatches(mf, in, in.s.min()).empty());
        for (std::uint64_t y = 0; y < in.s.min(); ++y) compared += mf.accepts(in.b, y, in.t) ? 1 : 0;
    }
    CHECK(compared > 50);
}

TEST_CASE("jump colorings") {
    JumpLab lab;
    MachineFamily mf(lab, evens(1 << 15));
    CHECK(jump_coloring(P("1"), FinSet{0, 1, 2, 3}, mf) == 1);
    CHECK(jump_coloring_at(P("w"), FinSet{0, 1, 2}, mf) == 1);
    CHECK(jump_coloring_at(P("w+2"), FinSet{0, 1, 2}, mf) == 1);
    CHECK(jump_coloring_at(P("4"), FinSet{0, 1, 2, 3}, mf) == 1);
    CHECK_THROWS_AS(jump_coloring(P("1"), FinSet{0, 1, 2}, mf), std::invalid_argument);
    CHECK(jump_coloring(P("0"), FinSet{5, 6, 7}, mf) == 1);

    // the countdown program with input a0 - 1 halts between a1 and a2
    std::uint64_t e = static_cast<std::uint64_t>(encode_program(assemble(kCountDown)));
    std::uint64_t a0 = e + 1;
    CHECK(lab.compiled(e).need(table_fn(OracleTable(1)), a0 - 1, 4 * a0) == 2 * a0 + 1);
    CHECK(jump_coloring(P("1"), FinSet{a0, a0 + 1, 2 * a0 + 1, 2 * a0 + 2}, mf) == 0);
}

TEST_CASE("color-one windows for c_4") {
    JumpLab lab;
    OracleTable a = evens(1 << 15);
    MachineFamily mf(lab, a);
    ColorOneWindow w = color_one_window(P("1"), mf, 220, 40, 4000);
    REQUIRE(w.h.size() == 40);
    for (std::size_t i = 0; i + 1 < w.h.size(); ++i) CHECK(w.max_need[i] <= w.h[i + 1]);
    // all 4-subsets of the first 8 elements and a sample of the rest
    FinSet head = w.h.prefix(8);
    ColoringHandle c4{P("4"), ColoringHandle::Shape::Plain, 2, [&](const FinSet& s) { return jump_coloring(P("1"), s, mf); }};
    HomogeneityReport rep = verify_homogeneous(c4, head, 1000);
    CHECK(rep.homogeneous);
    CHECK(rep.complete);
    CHECK(rep.color == 1U);
    std::mt19937_64 rng(3);
    for (int k = 0; k < 25; ++k) {
        std::vector<std::uint64_t> idx;
        while (idx.size() < 4) {
            auto i = std::uniform_int_distribution<std::size_t>(0, w.h.size() - 1)(rng);
            if (std::find(idx.begin(), idx.end(), w.h[i]) == idx.end()) idx.push_back(w.h[i]);
        }
        std::sort(idx.begin(), idx.end());
        CHECK(jump_coloring(P("1"), FinSet(idx), mf) == 1);
    }

    // every program below h_i that halts on A at all halts by h_{i+1}
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::uint64_t e = 0; e < w.h[i]; ++e) {
            for (std::uint64_t x = 0; x < w.h[i]; ++x) {
                auto n = lab.compiled(e).need(table_fn(a), x, 20000);
                if (n) CHECK(*n <= w.h[i + 1]);
            }
        }
    }
    CHECK_THROWS_AS(color_one_window(P("1"), mf, 220, 40, 230), FuelExhausted);
    CHECK_THROWS_AS(color_one_window(P("2"), mf, 220, 4, 4000), std::invalid_argument);
}

TEST_CASE("filter programs") {
    JumpLab lab(1024);
    const Ordinal b = P("1");
    const std::uint64_t p00 = static_cast<std::uint64_t>(lab.pair(P("0"), 0));
    const std::uint64_t p10 = static_cast<std::uint64_t>(lab.pair(P("1"), 0));
    const std::uint64_t p20 = static_cast<std::uint64_t>(lab.pair(P("2"), 0));
    // tables reach past the code cap; the guard forwards such queries
    OracleTable y = OracleTable::of(std::vector<std::uint64_t>{p00, p10, p20, 3, 1128}, 4096);
    OracleTable restricted = OracleTable::of(std::vector<std::uint64_t>{p00, p10, 3, 1128}, 4096);
    OracleTable high = OracleTable::of(std::vector<std::uint64_t>{p20}, 4096);
    OracleTable none(4096);
    CHECK(filter_passes(p10, b, lab));
    CHECK(!filter_passes(p20, b, lab));
    CHECK(filter_passes(3, b, lab));
    CHECK(filter_passes(5000, b, lab));

    for (const auto& p : program_pool()) {
        FilterProgram f = filter(p, b, lab);
        FilterProgram top = filter(p, epsilon0(), lab);
        CompiledProgram cp(p), cf(f.program), ct(top.program);
        for (std::uint64_t x = 0; x < 4; ++x) {
            BoundedRun want = cp.run(table_fn(restricted), x, 2000);
            if (!want.halted()) continue;
            BoundedRun got = cf.run(table_fn(y), x, 1u << 22);
            REQUIRE(got.halted());
            CHECK(got.output == want.output);
            BoundedRun plain = cp.run(table_fn(y), x, 2000);
            if (plain.halted()) CHECK(ct.run(table_fn(y), x, 1u << 22).output == plain.output);
            BoundedRun empty_run = cp.run(table_fn(none), x, 2000);
            if (empty_run.halted()) CHECK(cf.run(table_fn(high), x, 1u << 22).output == empty_run.output);
        }
    }
    Program no_query = assemble(kCountDown);
    CHECK(filter(no_query, b, lab).program == no_query);
    CHECK(decode_program(filter_program(encode_program(query_const(3)), b, lab)) ==
          filter(query_const(3), b, lab).program);
    JumpLab huge(kMaxGuardTable + 1);
    CHECK_THROWS_AS(filter(query_const(3), b, huge), CodeCapExceeded);
}

TEST_CASE("run translation") {
    JumpLab lab(2048);
    const Ordinal b = P("1");
    JumpTable jt = tj_approx(FinSet{0, 1, 2, 3}, P("2"), 256, lab);
    OracleTable restricted = jt.restrict(b, lab).table;
    std::uint64_t translated = 0, with_queries = 0;
    for (const auto& p : program_pool()) {
        CompiledProgram cp(p);
        FilterProgram f = filter(p, b, lab);
        for (std::uint64_t x = 0; x < 4; ++x) {
            BoundedRun c = cp.run(table_fn(restricted), x, 3000, true);
            if (!c.halted()) continue;
            BoundedRun up = translate_run(Direction::BetaToAlpha, c, p, b, lab);
            REQUIRE(up.halted());
            CHECK(up.output == c.output);
            BoundedRun direct = CompiledProgram(f.program).run(table_fn(jt.table), x, up.steps + 1, true);
            CHECK(direct.trace == up.trace);
            BoundedRun back = translate_run(Direction::AlphaToBeta, up, p, b, lab);
            CHECK(back.trace == c.trace);
            CHECK(back.steps == c.steps);
            CHECK(back.output == c.output);
            ++translated;
            if (c.max_query) ++with_queries;
        }
    }
    CHECK(translated >= 60);
    CHECK(with_queries >= 10);

    Program copy = assemble(kCopyInput);
    BoundedRun c = run_program(copy, table_fn(restricted), 3, 100, true);
    CHECK(translate_run(Direction::BetaToAlpha, c, copy, b, lab).trace == c.trace);

    // a blocked query answered 1 cannot come from the restricted oracle
    const std::uint64_t p20 = static_cast<std::uint64_t>(lab.pair(P("2"), 0));
    Program ask = query_const(p20);
    OracleTable planted = OracleTable::of(std::vector<std::uint64_t>{p20}, 1024);
    BoundedRun bad = run_program(ask, table_fn(planted), 0, 2000, true);
    REQUIRE(bad.halted());
    CHECK(translate_run(Direction::BetaToAlpha, bad, ask, b, lab).outcome == BoundedRun::Outcome::Flagged);
    CHECK_THROWS_AS(translate_run(Direction::BetaToAlpha, run_program(ask, table_fn(planted), 0, 5), ask, b, lab),
                    std::invalid_argument);
}

TEST_CASE("n_bound") {
    JumpLab lab(4096), wide(1 << 14);
    for (const char* a : {"0", "1", "2", "w", "w+1", "w^2"}) {
        Ordinal o = P(a);
        CHECK(n_bound(o, o, lab) >= lab.norms().norm(o));
        CHECK(n_bound(o, o, wide) >= n_bound(o, o, lab));
    }
    CHECK(n_bound(P("w"), P("1"), lab) == 149);
    CHECK(n_bound(P("1"), P("1"), lab) == 149);
    CHECK_THROWS_AS(n_bound(P("1"), P("2"), lab), std::invalid_argument);
}

TEST_CASE("T membership") {
    JumpLab lab;
    OracleTable a = evens(1 << 15);
    MachineFamily mf(lab, a);
    ColorOneWindow w = color_one_window(P("1"), mf, 220, 130, 20000);
    for (std::uint64_t z = 0; z < 8; ++z) {
        std::uint64_t y = static_cast<std::uint64_t>(lab.pair(P("0"), z));
        TMembership t = T_membership(mf, P("1"), w.h, y, true);
        CHECK(t.member == (z % 2 == 0));
        CHECK(t.t == FinSet{w.h[0]});
        REQUIRE(t.t2);
        CHECK(*t.t2 == FinSet{w.h[125]});
        CHECK(!t.disagreement);
    }
    // pairs at level 1 are never accepted by M_1
    std::uint64_t y1 = static_cast<std::uint64_t>(lab.pair(P("1"), 4));
    CHECK(!T_membership(mf, P("1"), w.h, y1).member);
    CHECK_THROWS_AS(T_membership(mf, P("1"), FinSet{10, 20, 30}, 15), WindowTooSmall);
    CHECK_THROWS_AS(T_membership(mf, P("1"), FinSet{150, 151}, 300), WindowTooSmall);
    CHECK(!T_membership(mf, P("1"), w.h.prefix(5), 15, true).t2);
}

TEST_CASE("counting check") {
    JumpLab lab;
    CountingWitness w0 = counting_check(0, FinSet{0, 5, 9}, [](std::uint64_t, std::uint64_t) { return std::nullopt; });
    CHECK(w0.index == 1);
    CHECK(w0.separated == 0);
    CHECK_THROWS_AS(counting_check(2, FinSet{2, 3, 4}, [](std::uint64_t, std::uint64_t) { return std::nullopt; }),
                    std::invalid_argument);

    // every adversary placing the four halting times of a0 = 2 leaves a gap
    FinSet chain{2, 10, 20, 30, 40, 50, 60};
    std::vector<std::optional<std::uint64_t>> choices{std::nullopt, 5, 15, 25, 35, 45, 55, 70};
    std::uint64_t cases = 0;
    for (std::size_t c0 = 0; c0 < choices.size(); ++c0)
        for (std::size_t c1 = 0; c1 < choices.size(); ++c1)
            for (std::size_t c2 = 0; c2 < choices.size(); ++c2)
                for (std::size_t c3 = 0; c3 < choices.size(); ++c3) {
                    std::optional<std::uint64_t> pick[4] = {choices[c0], choices[c1], choices[c2], choices[c3]};
                    CountingWitness w = counting_check(2, chain, [&](std::uint64_t e, std::uint64_t x) { return pick[2 * e + x]; });
                    CHECK(w.separated <= 4);
                    for (auto n : pick) CHECK(!(n && *n > w.lo && *n <= w.hi));
                    ++cases;
                }
    CHECK(cases == 4096);

    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        std::uint64_t a0 = trial % 4;
        std::vector<std::uint64_t> c{a0};
        while (c.size() < a0 * a0 + 3) c.push_back(c.back() + 1 + rng() % 6);
        FinSet ch(c);
        OracleTable y = random_table(rng, ch.max() + 1);
        CountingWitness w = counting_check(a0, ch, y, lab);
        CHECK(w.lo == ch[w.index]);
        for (std::uint64_t e = 0; e < a0; ++e) {
            for (std::uint64_t x = 0; x < a0; ++x) {
                CHECK(run_bounded(e, y, x, w.lo).halted() == run_bounded(e, y, x, w.hi).halted());
            }
        }
    }
}
