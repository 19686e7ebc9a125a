#include "ordlab/corpus.hpp"
#include "ordlab/fundseq.hpp"
#include "ordlab/homog.hpp"
#include "ordlab/jump.hpp"
#include "ordlab/largeness.hpp"
#include "ordlab/peeling.hpp"

#include "homog_support.hpp"
#include "jump_support.hpp"
#include "peel_support.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace ordlab;

namespace {

void BM_Compare(benchmark::State& state) {
    auto xs = mixed_corpus(3, 512);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(compare(xs[i % xs.size()], xs[(i * 7 + 1) % xs.size()]));
        ++i;
    }
}
BENCHMARK(BM_Compare);

void BM_Fund(benchmark::State& state) {
    auto xs = mixed_corpus(5, 512);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fund(xs[i % xs.size()], 2 + i % 7));
        ++i;
    }
}
BENCHMARK(BM_Fund);

// Fresh context each time, so the memo does not hide the decision procedure.
void BM_Norm(benchmark::State& state) {
    auto xs = polynomial_corpus(3, 3);
    for (auto _ : state) {
        NormContext ctx;
        for (const auto& a : xs) benchmark::DoNotOptimize(ctx.norm(a));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(xs.size()));
}
BENCHMARK(BM_Norm);

void BM_IsLargeOmegaSquared(benchmark::State& state) {
    const Ordinal a = parse_ordinal("w^2");
    NumStream xs = NumStream::arithmetic(static_cast<std::uint64_t>(state.range(0)), 1);
    FinSet s = min_exact_prefix(a, xs);
    for (auto _ : state) benchmark::DoNotOptimize(is_large(a, s));
    state.counters["size"] = static_cast<double>(s.size());
}
BENCHMARK(BM_IsLargeOmegaSquared)->Arg(2)->Arg(4)->Arg(6);

void BM_EnumerateExact(benchmark::State& state) {
    FinSet ground = homog_support::interval(1, static_cast<std::uint64_t>(state.range(0)));
    const Ordinal a = Ordinal::omega();
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_exact(a, ground).size());
}
BENCHMARK(BM_EnumerateExact)->Arg(10)->Arg(14)->Arg(18);

void BM_PeelTop(benchmark::State& state) {
    auto ctx = make_context(Ordinal::omega(), std::make_shared<FiniteOrder>(3));
    std::mt19937_64 rng(1);
    auto subs = peel_support::small_subs(ctx->alpha);
    std::vector<Term> pool;
    while (pool.size() < 64) pool.push_back(peel_support::random_term(rng, ctx, subs, 2, 2, 3));
    std::size_t i = 0;
    for (auto _ : state) {
        Peeler p(ctx);
        benchmark::DoNotOptimize(p.peel(p.top(), {pool[i % 64], pool[(i + 5) % 64], pool[(i + 9) % 64]}));
        ++i;
    }
}
BENCHMARK(BM_PeelTop);

void BM_Zeta(benchmark::State& state) {
    auto ctx = make_context(Ordinal::nat(2), std::make_shared<FiniteOrder>(3));
    std::mt19937_64 rng(2);
    auto subs = peel_support::small_subs(ctx->alpha);
    std::vector<Term> pool;
    while (pool.size() < 64) pool.push_back(peel_support::random_term(rng, ctx, subs, 2, 2, 3));
    std::size_t i = 0;
    for (auto _ : state) {
        Peeler p(ctx);
        benchmark::DoNotOptimize(p.zeta({pool[i % 64], pool[(i + 3) % 64]}));
        ++i;
    }
}
BENCHMARK(BM_Zeta);

void BM_RunBounded(benchmark::State& state) {
    auto pool = jump_support::program_pool();
    std::vector<CompiledProgram> progs(pool.begin(), pool.end());
    OracleTable y = OracleTable::of([](std::uint64_t v) { return v % 3 == 0; }, 4096);
    auto fn = [&y](std::uint64_t v) { return y.contains(v); };
    for (auto _ : state) {
        for (const auto& p : progs) benchmark::DoNotOptimize(p.run(fn, 5, 2000));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(progs.size()));
}
BENCHMARK(BM_RunBounded);

void BM_Solve(benchmark::State& state) {
    const char* alphas[] = {"3", "w", "w+1"};
    ColoringHandle c = homog_support::handle(parse_ordinal(alphas[state.range(0)]), homog_support::sum_parity);
    FinSet window = homog_support::interval(1, 24);
    for (auto _ : state) benchmark::DoNotOptimize(solve(c, window).prefix.size());
}
BENCHMARK(BM_Solve)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
