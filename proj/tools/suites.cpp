#include "suites.hpp"

#include "ordlab/corpus.hpp"
#include "ordlab/jump.hpp"

#include "homog_support.hpp"
#include "jump_support.hpp"
#include "peel_support.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace ordlab::suites {

namespace {

constexpr std::size_t kStoredFailures = 25;

void fail(Report& r, std::string check, std::string counterexample) {
    ++r.violations;
    if (r.failures.size() < kStoredFailures) r.failures.push_back({std::move(check), std::move(counterexample)});
}

Ordinal P(const char* s) { return parse_ordinal(s); }

FinSet from_mask(std::uint64_t mask, std::uint64_t lo) {
    std::vector<std::uint64_t> xs;
    for (std::uint64_t i = 0; mask >> i; ++i) {
        if (mask >> i & 1U) xs.push_back(lo + i);
    }
    return FinSet(std::move(xs));
}

// ---- largeness and fundamental sequences ----

Report omega_largeness(const Options& o) {
    Report r;
    const std::uint64_t hi = o.n.value_or(11);
    if (hi > 20) throw std::invalid_argument("omega-largeness: --n must be at most 20");
    r.params = {{"lo", 0}, {"hi", hi}};
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (hi + 1)); ++mask) {
        FinSet s = from_mask(mask, 0);
        bool large = !s.empty() && s.size() >= s.min() + 1;
        bool exact = !s.empty() && s.size() == s.min() + 1;
        ++r.cases;
        if (is_large(Ordinal::omega(), s) != large) fail(r, "is_large(w, s) <=> |s| >= min s + 1", format(s));
        if (is_exact(Ordinal::omega(), s) != exact) fail(r, "is_exact(w, s) <=> |s| = min s + 1", format(s));
    }
    return r;
}

Ordinal default_max(const Options& o, const char* fallback) { return o.max.value_or(P(fallback)); }

Report nestedness(const Options& o) {
    Report r;
    const Ordinal max = default_max(o, "w^w");
    const std::uint64_t nmax = o.n.value_or(5);
    const std::size_t count = o.count.value_or(2000);
    auto corpus = corpus_below(max, count, o.seed);
    r.params = {{"max", format(max)}, {"n", nmax}, {"count", count}, {"seed", o.seed}};
    std::uint64_t pairs = corpus.size() * (corpus.size() - (corpus.empty() ? 0 : 1)) / 2;
    r.cases = pairs * (nmax >= 2 ? nmax - 1 : 0);
    for (const auto& v : nestedness_check(corpus, nmax)) {
        fail(r, "not (gamma > beta[n] > gamma[n]) for gamma < beta",
             "gamma = " + format(v.gamma) + ", beta = " + format(v.beta) + ", n = " + std::to_string(v.n));
    }
    r.stats = {{"corpus", corpus.size()}};
    return r;
}

struct FundKey {
    Ordinal a;
    std::uint64_t n;
    friend bool operator==(const FundKey&, const FundKey&) = default;
};

struct FundKeyHash {
    std::size_t operator()(const FundKey& k) const { return k.a.hash() * 1000003U ^ k.n; }
};

Report goodnorm(const Options& o) {
    Report r;
    const Ordinal max = default_max(o, "w^w");
    const std::size_t count = o.count.value_or(2000);
    const std::uint64_t width = o.n.value_or(7);
    if (width > 12) throw std::invalid_argument("goodnorm: --n (window width) must be at most 12");
    auto corpus = corpus_below(max, count, o.seed);
    r.params = {{"max", format(max)}, {"count", count}, {"width", width}, {"seed", o.seed}};
    NormContext norms;
    std::vector<std::uint64_t> nv;
    for (const auto& a : corpus) nv.push_back(norms.norm(a));

    // Clause 1: beta < delta implies beta <= delta[|beta|].
    std::uint64_t c1 = 0;
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        for (std::size_t b = 0; b < d; ++b) {
            ++c1;
            if (compare(corpus[b], fund(corpus[d], nv[b])) == Cmp::GT) {
                fail(r, "beta <= delta[|beta|]",
                     "beta = " + format(corpus[b]) + ", delta = " + format(corpus[d]) + ", |beta| = " +
                         std::to_string(nv[b]));
            }
        }
    }

    // Clause 2: for s inside {|beta|, ..., |beta| + width - 1} with
    // delta[s] <= beta some prefix t of s has delta[t] = beta. Along s the
    // values delta[t] strictly decrease, so a violation is an edge of the
    // subset tree that jumps from above beta to below it.
    std::map<std::uint64_t, std::vector<std::size_t>> by_norm;
    for (std::size_t i = 0; i < corpus.size(); ++i) by_norm[nv[i]].push_back(i);
    std::unordered_map<FundKey, Ordinal, FundKeyHash> memo;
    auto f = [&](const Ordinal& a, std::uint64_t n) -> const Ordinal& {
        auto [it, fresh] = memo.try_emplace(FundKey{a, n});
        if (fresh) it->second = fund(a, n);
        return it->second;
    };
    std::uint64_t c2 = 0;
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        for (const auto& [n, members] : by_norm) {
            // corpus is sorted, so members below d are exactly the betas < delta
            auto end = std::lower_bound(members.begin(), members.end(), d);
            if (end == members.begin()) continue;
            c2 += static_cast<std::uint64_t>(end - members.begin());
            std::vector<std::uint64_t> path;
            std::function<void(const Ordinal&, std::uint64_t)> walk = [&](const Ordinal& v, std::uint64_t from) {
                if (v.is_zero()) return;
                for (std::uint64_t x = from; x < n + width; ++x) {
                    const Ordinal c = f(v, x);
                    path.push_back(x);
                    // least beta with norm n strictly above c
                    auto it = std::upper_bound(members.begin(), end, c, [&](const Ordinal& val, std::size_t i) {
                        return compare(val, corpus[i]) == Cmp::LT;
                    });
                    if (it != end && compare(corpus[*it], v) == Cmp::LT) {
                        fail(r, "delta[s] <= beta implies delta[t] = beta for some prefix t",
                             "delta = " + format(corpus[d]) + ", beta = " + format(corpus[*it]) + ", s = " +
                                 format(FinSet(path)));
                    }
                    walk(c, x + 1);
                    path.pop_back();
                }
            };
            walk(corpus[d], n);
        }
    }
    r.cases = c1 + c2;
    r.stats = {{"corpus", corpus.size()}, {"clause1_pairs", c1}, {"clause2_pairs", c2}, {"fund_evaluations", memo.size()}};
    return r;
}

Report monotonicity(const Options& o) {
    Report r;
    const Ordinal max = default_max(o, "w^2");
    const std::uint64_t hi = o.n.value_or(10);
    if (hi > 14) throw std::invalid_argument("monotonicity: --n must be at most 14");
    std::vector<Ordinal> alphas;
    for (const auto& a : polynomial_corpus(3, 4)) {
        if (compare(a, max) != Cmp::GT) alphas.push_back(a);
    }
    r.params = {{"max", format(max)}, {"lo", 1}, {"hi", hi}};
    const std::uint64_t full = (std::uint64_t{1} << hi) - 1;
    std::vector<char> large(full + 1), exact(full + 1);
    for (const auto& a : alphas) {
        for (std::uint64_t m = 0; m <= full; ++m) {
            FinSet s = from_mask(m, 1);
            large[m] = is_large(a, s);
            exact[m] = is_exact(a, s);
        }
        for (std::uint64_t t = 0; t <= full; ++t) {
            // every submask s of t, t itself included
            for (std::uint64_t s = t;; s = (s - 1) & t) {
                ++r.cases;
                if (large[s] && !large[t]) {
                    fail(r, "s subset of t and s alpha-large implies t alpha-large",
                         "alpha = " + format(a) + ", s = " + format(from_mask(s, 1)) + ", t = " + format(from_mask(t, 1)));
                }
                if (s != t && exact[t] && large[s]) {
                    fail(r, "s proper subset of t and t alpha-size implies s alpha-small",
                         "alpha = " + format(a) + ", s = " + format(from_mask(s, 1)) + ", t = " + format(from_mask(t, 1)));
                }
                if (s == 0) break;
            }
        }
    }
    r.stats = {{"alphas", alphas.size()}};
    return r;
}

// ---- peeling ----

using peel_support::in_sub;

const char* const kPeelAlphas[] = {"1", "2", "w"};

ContextPtr finite_ctx(const Ordinal& alpha) { return make_context(alpha, std::make_shared<FiniteOrder>(3)); }

// Every tuple of at most three single-summand terms of depth <= 2 over
// {0, 1, 2}, then `sampled` random tuples of terms with up to two summands
// per level.
std::vector<TermTuple> peel_tuples(const ContextPtr& ctx, std::size_t sampled, std::uint64_t seed) {
    auto subs = peel_support::small_subs(ctx->alpha);
    auto small = term_corpus(ctx, {0, 1, 2}, subs, 2, 1);
    std::vector<TermTuple> out;
    for (const auto& a : small) {
        out.push_back({a});
        for (const auto& b : small) {
            out.push_back({a, b});
            for (const auto& c : small) out.push_back({a, b, c});
        }
    }
    std::mt19937_64 rng(seed);
    std::vector<Term> pool;
    while (pool.size() < 150) pool.push_back(peel_support::random_term(rng, ctx, subs, 2, 2, 3));
    for (std::size_t k = 0; k < sampled; ++k) out.push_back(peel_support::random_tuple(rng, pool, 1 + k % 3));
    return out;
}

Json peel_params(const Options& o, std::size_t sampled) {
    return {{"alphas", {"1", "2", "w"}}, {"x_size", 3}, {"depth", 2}, {"sampled", sampled}, {"seed", o.seed}};
}

Report peel_structure(const Options& o) {
    Report r;
    const std::size_t sampled = o.count.value_or(1500);
    r.params = peel_params(o, sampled);
    for (const char* al : kPeelAlphas) {
        auto ctx = finite_ctx(P(al));
        Peeler p(ctx);
        auto rhos = peel_support::sample_indices(ctx->alpha);
        auto deltas = peel_support::sample_deltas(ctx->alpha);
        for (const auto& a : peel_tuples(ctx, sampled, o.seed)) {
            ++r.cases;
            std::vector<PeelTuple> res;
            for (const auto& rho : rhos) res.push_back(p.peel(rho, a));
            for (std::size_t j = 1; j < rhos.size(); ++j) {
                for (std::size_t i = 0; i < j; ++i) {
                    for (std::size_t e = 0; e < a.size(); ++e) {
                        if (!in_sub(res[j][e], res[i][e])) {
                            fail(r, "p-bar_rho(A)(i) in Sub(p-bar_nu(A)(i))",
                                 std::string("alpha = ") + al + ", A = " + format(a) + ", nu = " + format(rhos[i]) +
                                     ", rho = " + format(rhos[j]) + ", i = " + std::to_string(e));
                        }
                    }
                }
            }
            for (std::size_t e = 0; e < a.size(); ++e) {
                const PeelEntry& top = res.back()[e];
                if (!(std::holds_alternative<XElem>(top) || std::get<Term>(top).is_zero())) {
                    fail(r, "p-bar at omega^alpha lies in X or is 0",
                         std::string("alpha = ") + al + ", A = " + format(a) + ", i = " + std::to_string(e));
                }
            }
            for (const auto& d : deltas) {
                for (const auto& t : p.peel_below(d, a)) {
                    if (!peel_support::stabilized_shape(t, d)) {
                        fail(r, "stabilized entries are constants or phi_b(s) with b >= delta",
                             std::string("alpha = ") + al + ", A = " + format(a) + ", delta = " + format(d));
                    }
                }
            }
        }
    }
    return r;
}

Report convergence(const Options& o) {
    Report r;
    const std::size_t sampled = o.count.value_or(1500);
    const std::uint64_t extra = o.n.value_or(3);
    r.params = peel_params(o, sampled);
    r.params["steps_past_bound"] = extra;
    for (const char* al : kPeelAlphas) {
        auto ctx = finite_ctx(P(al));
        Peeler p(ctx);
        auto deltas = peel_support::sample_deltas(ctx->alpha);
        for (const auto& a : peel_tuples(ctx, sampled, o.seed)) {
            ++r.cases;
            for (const auto& d : deltas) {
                for (std::size_t i = 0; i < a.size(); ++i) {
                    const std::uint64_t n = p.norm(a[i]);
                    const Ordinal bound = p.convergence_bound(d, a[i]);
                    const Term at = p.peel_terms(bound, a)[i];
                    for (std::uint64_t j = 1; j <= extra; ++j) {
                        for (const Ordinal& rho : {add(bound, Ordinal::nat(j)), mul_nat(Ordinal::omega_pow(fund(d, n)), n + j)}) {
                            if (p.peel_terms(rho, a)[i] != at) {
                                fail(r, "p_{<omega^delta}(A) = p_{omega^{delta[|t|]} * |t|}(A)",
                                     std::string("alpha = ") + al + ", A = " + format(a) + ", delta = " + format(d) +
                                         ", i = " + std::to_string(i) + ", rho = " + format(rho));
                            }
                        }
                    }
                }
            }
        }
    }
    return r;
}

Report zeta_scan(const Options& o) {
    Report r;
    const std::size_t sampled = o.count.value_or(1500);
    r.params = peel_params(o, sampled);
    std::uint64_t with_zeta = 0;
    for (const char* al : kPeelAlphas) {
        auto ctx = finite_ctx(P(al));
        Peeler p(ctx);
        for (const auto& a : peel_tuples(ctx, sampled, o.seed)) {
            ++r.cases;
            auto z = p.zeta(a);
            auto full = peel_support::zeta_full(p, a);
            if (z != full) {
                fail(r, "S(t)-scan zeta equals full-scan zeta",
                     std::string("alpha = ") + al + ", A = " + format(a) + ", S-scan = " + (z ? format(*z) : "none") +
                         ", full = " + (full ? format(*full) : "none"));
            }
            if (!z) continue;
            ++with_zeta;
            auto s = zeta_candidates(a.front());
            if (*z != p.top() && std::find(s.begin(), s.end(), *z) == s.end()) {
                fail(r, "zeta in S(A(0)) or omega^alpha", std::string("alpha = ") + al + ", A = " + format(a));
            }
        }
    }
    r.stats = {{"with_zeta", with_zeta}};
    return r;
}

Report prefix_coloring(const Options& o) {
    Report r;
    const std::size_t count = o.count.value_or(90);
    const std::uint64_t fuel = o.fuel.value_or(100000);
    r.params = {{"alphas", {"1", "2", "w"}}, {"kinds", 3}, {"m_count", count}, {"fuel", fuel}};
    std::uint64_t colorbar_cases = 0;
    for (const char* al : kPeelAlphas) {
        auto ctx = make_context(P(al), std::make_shared<NatOrder>(true));
        Peeler p(ctx);
        std::vector<Ordinal> nus;
        for (const char* s : {"0", "1", "2", "3", "w", "w+1", "w*2"}) {
            if (compare(P(s), p.top()) != Cmp::GT) nus.push_back(P(s));
        }
        for (int kind = 0; kind < 3; ++kind) {
            auto sigma = peel_support::sample_sequence(ctx, kind, fuel);
            MTable t = build_M(sigma, count, p);
            FinSet mm = t.minus();
            for (std::size_t start = 0; start < 8 && start < mm.size(); ++start) {
                FinSet s = mm.drop(start).prefix(60);
                for (const auto& nu : nus) {
                    Ordinal need = add(Ordinal::nat(1), nu);
                    if (!is_large(need, s)) continue;
                    NumStream xs = NumStream::of(s);
                    FinSet u = min_exact_prefix(need, xs);
                    auto pu = p.peel(nu, t.tau_of(u));
                    for (std::size_t len = u.size(); len <= s.size(); len += 7) {
                        ++r.cases;
                        auto ps = p.peel(nu, t.tau_of(s.prefix(len)));
                        if (compare_entry(pu[0], ps[0], ctx) != Cmp::EQ) {
                            fail(r, "p_nu(u) = p_nu(s) for u the (1+nu)-size prefix of s",
                                 std::string("alpha = ") + al + ", kind = " + std::to_string(kind) + ", nu = " +
                                     format(nu) + ", s = " + format(s.prefix(len)));
                        }
                    }
                }
                if (!is_large(p.top(), s)) continue;
                ++r.cases;
                ++colorbar_cases;
                NumStream xs = NumStream::of(s);
                FinSet u = min_exact_prefix(p.top(), xs);
                if (colorbar(u, t, p) != colorbar(s, t, p, false)) {
                    fail(r, "colorbar(s) = colorbar(size prefix of s)",
                         std::string("alpha = ") + al + ", kind = " + std::to_string(kind) + ", s = " + format(s));
                }
            }
        }
    }
    if (colorbar_cases == 0) fail(r, "at least one colorbar case", "no omega^alpha-large window");
    r.stats = {{"colorbar_cases", colorbar_cases}};
    return r;
}

Report wop_extraction(const Options& o) {
    Report r;
    const std::size_t window = o.count.value_or(60);
    const std::uint64_t want = o.n.value_or(20);
    const std::uint64_t fuel = o.fuel.value_or(100000);
    r.params = {{"alpha", "1"}, {"order", "reversed naturals"}, {"sigma", "phi_1(i)"}, {"window", window},
                {"min_extracted", want}, {"fuel", fuel}};
    WopRun run;
    try {
        run = wop_pipeline(window, fuel);
    } catch (const ColorWitness& e) {
        fail(r, "the color-0 set extracts without a witness", "set = " + format(e.set()) + ", color = " + std::to_string(e.color()));
        return r;
    }
    r.cases = run.extracted.size();
    if (run.window.size() < window) fail(r, "window size", std::to_string(run.window.size()));
    if (run.extracted.size() < want) {
        fail(r, "extracted at least " + std::to_string(want) + " elements", std::to_string(run.extracted.size()));
    }
    for (std::size_t i = 1; i < run.extracted.size(); ++i) {
        if (run.extracted[i] <= run.extracted[i - 1]) {
            fail(r, "extracted sequence strictly increasing", "position " + std::to_string(i));
        }
    }
    r.stats = {{"window", run.window.size()},
               {"homogeneous", run.search.best.size()},
               {"search_truncated", run.search.truncated},
               {"search_exhausted", run.search.exhausted},
               {"extracted", run.extracted}};
    return r;
}

// ---- jump lab ----

OracleTable evens(std::uint64_t cap) {
    return OracleTable::of([](std::uint64_t v) { return v % 2 == 0; }, cap);
}

OracleTable random_table(std::mt19937_64& rng, std::uint64_t cap) {
    OracleTable t(cap);
    for (std::uint64_t v = 0; v < cap; ++v) {
        if (rng() % 3 == 0) t.insert(v);
    }
    return t;
}

Report jump_coherence(const Options& o) {
    Report r;
    const std::size_t want_instances = o.count.value_or(120);
    const std::uint64_t input_cap = 64;
    r.params = {{"pool", 50}, {"lemma_instances", want_instances}, {"input_cap", input_cap}, {"trials", 100}, {"seed", o.seed}};
    const auto pool = jump_support::program_pool();

    // (a) fuel monotonicity
    std::mt19937_64 rng(o.seed);
    OracleTable y = random_table(rng, 200);
    auto fn = [&y](std::uint64_t v) { return y.contains(v); };
    std::uint64_t mono = 0;
    for (std::size_t pi = 0; pi < pool.size(); ++pi) {
        CompiledProgram cp(pool[pi]);
        for (std::uint64_t x = 0; x < 6; ++x) {
            std::optional<BoundedRun> first;
            for (std::uint64_t m = 0; m <= 120; ++m) {
                ++mono;
                BoundedRun run = cp.run(fn, x, m);
                if (first && !(run.halted() && run.output == first->output)) {
                    fail(r, "Halted at m implies Halted at m' >= m with equal output",
                         "program " + std::to_string(pi) + ", x = " + std::to_string(x) + ", m = " + std::to_string(m));
                }
                if (!first && run.halted()) first = run;
            }
        }
    }

    // (b) accept sets along s
    JumpLab lab;
    MachineFamily mf(lab, evens(4096));
    auto inst = jump_support::lemma_instances(want_instances, o.seed + 4);
    if (inst.size() < 100) fail(r, "at least 100 lemma instances", std::to_string(inst.size()));
    for (const auto& in : inst) {
        for (std::uint64_t bad : jump_support::lemma_mismatches(mf, in, input_cap)) {
            fail(r, "accept sets of M_b(., t) and M_a(., s t) agree",
                 "a = " + format(in.a) + ", s = " + format(in.s) + ", t = " + format(in.t) + ", y = " + std::to_string(bad));
        }
    }

    // (c) translator round trip
    JumpLab small(2048);
    const Ordinal b = P("1");
    JumpTable jt = tj_approx(FinSet{0, 1, 2, 3}, P("2"), 256, small);
    OracleTable restricted = jt.restrict(b, small).table;
    auto rfn = [&restricted](std::uint64_t v) { return restricted.contains(v); };
    std::uint64_t translated = 0;
    for (std::size_t pi = 0; pi < pool.size(); ++pi) {
        const Program& p = pool[pi];
        CompiledProgram cp(p);
        for (std::uint64_t x = 0; x < 4; ++x) {
            BoundedRun c = cp.run(rfn, x, 3000, true);
            if (!c.halted()) continue;
            ++translated;
            BoundedRun up = translate_run(Direction::BetaToAlpha, c, p, b, small);
            BoundedRun back = up.halted() ? translate_run(Direction::AlphaToBeta, up, p, b, small) : up;
            if (!up.halted() || up.output != c.output || back.trace != c.trace || back.steps != c.steps ||
                back.output != c.output) {
                fail(r, "translate there and back is the identity",
                     "program " + std::to_string(pi) + ", x = " + std::to_string(x));
            }
        }
    }

    // (d) counting witnesses
    std::mt19937_64 crng(o.seed + 98);
    std::uint64_t found = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::uint64_t a0 = static_cast<std::uint64_t>(trial % 4);
        std::vector<std::uint64_t> c{a0};
        while (c.size() < a0 * a0 + 3) c.push_back(c.back() + 1 + crng() % 6);
        FinSet chain(c);
        OracleTable yt = random_table(crng, chain.max() + 1);
        std::string where = "a0 = " + std::to_string(a0) + ", chain = " + format(chain);
        try {
            CountingWitness w = counting_check(a0, chain, yt, lab);
            bool ok = w.lo == chain[w.index] && w.hi == chain[w.index + 1];
            for (std::uint64_t e = 0; e < a0 && ok; ++e) {
                for (std::uint64_t x = 0; x < a0 && ok; ++x) {
                    ok = run_bounded(e, yt, x, w.lo).halted() == run_bounded(e, yt, x, w.hi).halted();
                }
            }
            if (ok) {
                ++found;
            } else {
                fail(r, "counting witness is unseparated", where);
            }
        } catch (const std::logic_error& e) {
            fail(r, "counting check finds a witness", where + ": " + e.what());
        }
    }
    r.cases = mono + inst.size() + translated + 100;
    r.stats = {{"monotonicity_runs", mono},
               {"lemma_instances", inst.size()},
               {"translated_runs", translated},
               {"witnesses", found}};
    return r;
}

Report t_extraction(const Options& o) {
    Report r;
    const std::uint64_t fuel = o.fuel.value_or(1024);
    const std::uint64_t ycap = o.n.value_or(8);
    r.params = {{"A", "evens"}, {"a", "1"}, {"y_below", ycap}, {"z_below", ycap}, {"fuel", fuel}};
    JumpLab lab;
    OracleTable a = evens(1 << 15);
    MachineFamily mf(lab, a);
    ColorOneWindow w = color_one_window(P("1"), mf, 220, 130, 20000);
    std::vector<std::uint64_t> xw;
    for (std::uint64_t v = 0; v < 64; v += 2) xw.push_back(v);
    JumpTable tj = tj_approx(FinSet(xw), P("1"), fuel, lab);

    // Literal y below the cap, then <gamma, z> for gamma in {0, 1}.
    std::vector<std::uint64_t> ys;
    for (std::uint64_t y = 0; y < ycap; ++y) ys.push_back(y);
    for (const char* g : {"0", "1"}) {
        for (std::uint64_t z = 0; z < ycap; ++z) ys.push_back(static_cast<std::uint64_t>(lab.pair(P(g), z)));
    }
    std::uint64_t agree = 0, disagreements = 0;
    Json rows = Json::array();
    for (std::uint64_t y : ys) {
        ++r.cases;
        TMembership t = T_membership(mf, P("1"), w.h, y, true);
        bool approx = tj.contains(y);
        agree += t.member == approx ? 1 : 0;
        disagreements += t.disagreement ? 1 : 0;
        auto u = lab.unpair(y);
        rows.push_back({{"y", y},
                        {"pair", u ? "<" + format(u->gamma) + ", " + std::to_string(u->z) + ">" : "none"},
                        {"T", t.member},
                        {"tj_approx", approx}});
        if (u && u->gamma.is_zero() && t.member != a.contains(u->z)) {
            fail(r, "<0, z> in T iff z in A", "z = " + std::to_string(u->z));
        }
    }
    r.stats = {{"window_size", w.h.size()},
               {"agreement", agree},
               {"agreement_rate", ys.empty() ? 1.0 : static_cast<double>(agree) / static_cast<double>(ys.size())},
               {"cross_check_disagreements", disagreements},
               {"rows", rows}};
    return r;
}

// ---- builder ----

Report builder(const Options& o) {
    Report r;
    const std::uint64_t hi = o.n.value_or(24);
    const std::size_t target = o.count.value_or(12);
    const std::uint64_t cap = o.fuel.value_or(1'000'000);
    r.params = {{"alphas", {"3", "w", "w+1"}}, {"k", 2}, {"window", "1.." + std::to_string(hi)}, {"target_len", target},
                {"audit_cap", cap}};
    Json runs = Json::array();
    const FinSet window = homog_support::interval(1, hi);
    for (const char* al : {"3", "w", "w+1"}) {
        for (const auto& [name, fn] : homog_support::fixed_colorings()) {
            ++r.cases;
            ColoringHandle c = homog_support::handle(P(al), fn);
            BuilderState st = solve(c, window);
            HomogeneityReport audit = audit_prefix(c, st.prefix, cap);
            auto reqs = check_requirements(c, st, cap);
            std::string where = std::string("alpha = ") + al + ", coloring = " + name;
            if (st.status == BuilderState::Status::BudgetExhausted) fail(r, "builder finished within budget", where + ": " + st.failure);
            if (st.prefix.size() < target) {
                fail(r, "prefix length >= " + std::to_string(target), where + ", prefix = " + format(st.prefix));
            }
            if (!audit.homogeneous) {
                fail(r, "every tested alpha-size subset of the prefix is monochromatic",
                     where + ", prefix = " + format(st.prefix) + ", witnesses = " + format(*audit.witness_a) + " / " +
                         format(*audit.witness_b));
            }
            for (const auto& v : reqs) fail(r, "stage requirement", where + ": " + v);
            runs.push_back({{"alpha", al},
                            {"coloring", name},
                            {"method", st.method},
                            {"status", format(st.status)},
                            {"stages", st.stages.size()},
                            {"prefix", format(st.prefix)},
                            {"color", st.color ? Json(*st.color) : Json(nullptr)},
                            {"audited", audit.tested},
                            {"audit_complete", audit.complete}});
        }
    }
    r.stats = {{"runs", runs}};
    return r;
}

}  // namespace

Json to_json(const Report& r, bool with_timing) {
    Json failures = Json::array();
    for (const auto& f : r.failures) failures.push_back({{"check", f.check}, {"counterexample", f.counterexample}});
    Json j = {{"v", kSchemaVersion},  {"suite", r.suite},           {"params", r.params}, {"cases", r.cases},
              {"failures", failures}, {"violations", r.violations}, {"stats", r.stats}};
    if (with_timing) j["millis"] = r.millis;
    return j;
}

const std::vector<SuiteInfo>& registry() {
    static const std::vector<SuiteInfo> all{
        {"omega-largeness", "is_large/is_exact for omega against |s| vs min s + 1, every s in {0..n}", omega_largeness},
        {"nestedness", "no gamma < beta and 1 < n <= --n with gamma > beta[n] > gamma[n]", nestedness},
        {"goodnorm", "beta <= delta[|beta|], and prefixes hitting beta exactly", goodnorm},
        {"monotonicity", "largeness is upward closed, size sets have small proper subsets", monotonicity},
        {"peel-structure", "Sub membership along peeling indices and stabilized shapes", peel_structure},
        {"convergence", "peeling past the convergence bound changes nothing", convergence},
        {"prefix-coloring", "p_nu and colorbar depend on the size prefix only", prefix_coloring},
        {"zeta-scan", "the S(t)-scan for zeta agrees with the full scan", zeta_scan},
        {"wop-extraction", "alpha = 1 pipeline extracts an increasing sequence", wop_extraction},
        {"jump-coherence", "fuel monotonicity, accept sets, translation, counting", jump_coherence},
        {"t-extraction", "T membership against tj_approx on a color-1 window", t_extraction},
        {"builder", "solve on fixed colorings, audited by an independent verifier", builder},
    };
    return all;
}

const SuiteInfo* find_suite(std::string_view name) {
    for (const auto& s : registry()) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

Report run_suite(const SuiteInfo& info, const Options& opts) {
    auto t0 = std::chrono::steady_clock::now();
    Report r = info.run(opts);
    r.suite = info.name;
    r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<Ordinal> corpus_below(const Ordinal& max, std::size_t count, std::uint64_t seed) {
    std::set<Ordinal> out;
    for (const auto& a : polynomial_corpus(3, 3)) {
        if (compare(a, max) == Cmp::LT) out.insert(a);
    }
    const bool past_omega_omega = compare(max, P("w^w")) == Cmp::GT;
    std::mt19937_64 rng(seed);
    for (std::size_t tries = 0; out.size() < count && tries < 100 * count; ++tries) {
        Ordinal a;
        if (past_omega_omega && tries % 4 == 3) {
            a = random_below_eps0(rng, 2, 3, 4);
        } else {
            std::vector<std::uint64_t> exps;
            unsigned terms = 1 + static_cast<unsigned>(rng() % 4);
            for (unsigned i = 0; i < terms; ++i) exps.push_back(rng() % 9);
            std::sort(exps.rbegin(), exps.rend());
            exps.erase(std::unique(exps.begin(), exps.end()), exps.end());
            for (auto e : exps) a = add(a, mul_nat(Ordinal::omega_pow(Ordinal::nat(e)), 1 + rng() % 9));
        }
        if (compare(a, max) == Cmp::LT) out.insert(a);
    }
    return {out.begin(), out.end()};
}

WopRun wop_pipeline(std::size_t window, std::uint64_t fuel, const SearchBudget& budget) {
    auto ctx = make_context(Ordinal::nat(1), std::make_shared<NatOrder>(true));
    Peeler p(ctx);
    DescendingSeq sigma([ctx](std::uint64_t i) { return Term::constant(ctx, i); }, fuel);
    WopRun run;
    run.table = build_M(sigma, window + 1, p);
    run.window = run.table.minus();
    ColoringHandle c{p.top(), ColoringHandle::Shape::Plain, 4,
                     [&](const FinSet& s) { return colorbar(s, run.table, p); }};
    run.search = greedy_homog_search(run.window, c, 0, budget);
    run.extracted = extract_descending(run.search.best, run.table, p);
    return run;
}

}  // namespace ordlab::suites
