#include "ordlab/homog.hpp"

#include "ordlab/peeling.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>

namespace ordlab {

std::optional<std::size_t> large_prefix_len(const Ordinal& a, const FinSet& s) {
    Ordinal x = a;
    std::size_t k = 0;
    while (!x.is_zero()) {
        if (k >= s.size()) return std::nullopt;
        x = fund(x, s[k++]);
    }
    return k;
}

// ---------------------------------------------------------------------------
// Reductions

namespace {

Reduction identity_reduction(const ColoringHandle& c) {
    return Reduction{c, 0, [](const FinSet& h) { return h; }};
}

// Steps of alpha-descent along t until the value is target.
std::optional<std::size_t> steps_to(const Ordinal& alpha, const Ordinal& target, const FinSet& t) {
    Ordinal x = alpha;
    std::size_t k = 0;
    while (x != target) {
        if (k >= t.size() || x < target) return std::nullopt;
        x = fund(x, t[k++]);
    }
    return k;
}

}  // namespace

Reduction reduce_dimension(const ColoringHandle& c, const Ordinal& a, const NormContext& norms) {
    if (c.shape != ColoringHandle::Shape::Plain || !c.alpha.is_indecomposable()) {
        throw std::invalid_argument("reduce_dimension: the coloring must be plain over omega^b-size sets");
    }
    Ordinal top = Ordinal::omega_pow(a);
    if (top < c.alpha) throw std::invalid_argument("reduce_dimension: target dimension is below the source");
    if (top == c.alpha) return identity_reduction(c);

    std::uint64_t floor = norms.norm(c.alpha);
    ColoringHandle d{top, ColoringHandle::Shape::Plain, c.palette, nullptr};
    d.eval = [c, floor](const FinSet& s) {
        if (s.empty() || s.min() <= floor) {
            throw NormGuardViolated(format(s) + " has minimum at most the norm " + std::to_string(floor));
        }
        auto k = large_prefix_len(c.alpha, s);
        if (!k) throw std::logic_error(format(s) + " has no " + format(c.alpha) + "-size initial segment");
        return c.eval(s.prefix(*k));
    };
    return Reduction{d, floor, [](const FinSet& h) { return h; }};
}

Reduction reduce_to_lead(const ColoringHandle& c, const Ordinal& alpha) {
    Ordinal l = lead(alpha);
    if (c.shape != ColoringHandle::Shape::Plain || c.alpha != l) {
        throw std::invalid_argument("reduce_to_lead: the coloring must be plain over lead(alpha)-size sets");
    }
    if (alpha.is_indecomposable()) return identity_reduction(c);

    ColoringHandle d{alpha, ColoringHandle::Shape::Plain, c.palette, nullptr};
    d.eval = [c, alpha, l](const FinSet& t) {
        auto k = steps_to(alpha, l, t);
        if (!k) throw std::logic_error(format(t) + " does not descend through " + format(l));
        return c.eval(t.drop(*k));
    };
    Ordinal rest = left_subtract(alpha, l);
    return Reduction{d, 0, [rest](const FinSet& h) {
                         auto k = large_prefix_len(rest, h);
                         return k ? h.drop(*k) : FinSet{};
                     }};
}

// ---------------------------------------------------------------------------
// Builder

std::string format(BuilderState::Status s) {
    switch (s) {
    case BuilderState::Status::Ok: return "ok";
    case BuilderState::Status::BudgetExhausted: return "budget-exhausted";
    case BuilderState::Status::Starved: return "starved";
    }
    return "?";
}

ColoringHandle stage_coloring(const ColoringHandle& c, const FinSet& h, const Ordinal& sub_alpha) {
    // h t lies in the domain of c whenever t lies in the domain of the result.
    return ColoringHandle{sub_alpha, c.shape, c.palette, [c, h](const FinSet& t) { return c.eval(h.concat(t)); }};
}

namespace {

struct BudgetOut {
    std::vector<std::size_t> path;
    std::string what;
};

struct Ctx {
    BuildBudget budget;
    std::uint64_t evals = 0;
    std::vector<std::size_t> path;

    [[noreturn]] void fail(const std::string& what) const { throw BudgetOut{path, what}; }
};

BuilderState fresh(const ColoringHandle& c) {
    BuilderState st;
    st.alpha = c.alpha;
    st.shape = c.shape;
    st.palette = c.palette;
    return st;
}

std::optional<FinSet> first_domain_set(const ColoringHandle& c, const FinSet& w) {
    std::optional<FinSet> first;
    visit_domain(c, w, std::nullopt, [&](const FinSet& s) {
        first = s;
        return false;
    });
    return first;
}

void dispatch(Ctx& ctx, const ColoringHandle& c, const FinSet& w, BuilderState& st);

void run_finite(Ctx& ctx, const ColoringHandle& c, const FinSet& w, BuilderState& st) {
    st.method = "finite-search";
    auto first = first_domain_set(c, w);
    if (!first) {
        st.prefix = w;
        return;
    }
    std::vector<unsigned> order{c(*first)};
    for (unsigned j = 0; j < c.palette; ++j) {
        if (j != order.front()) order.push_back(j);
    }
    SearchBudget sb{ctx.budget.nodes, ctx.budget.checks_per_step};
    std::optional<FinSet> best;
    unsigned best_color = order.front();
    for (unsigned j : order) {
        SearchResult res = greedy_homog_search(w, c, j, sb);
        st.truncated = st.truncated || res.truncated;
        if (!best || res.best.size() > best->size()) {
            best = res.best;
            best_color = j;
        }
        if (best->size() == w.size()) break;
    }
    st.prefix = *best;
    if (first_domain_set(c, st.prefix)) st.color = best_color;
}

// Runs the sub-solve of one stage and fills in its record.
void stage_solve(Ctx& ctx, const ColoringHandle& f, const FinSet& w, std::size_t i, StageRecord& rec,
                 BuilderState& st) {
    std::uint64_t before = ctx.evals;
    ctx.path.push_back(i);
    BuilderState sub = fresh(f);
    dispatch(ctx, f, w, sub);
    ctx.path.pop_back();
    rec.window = sub.prefix;
    rec.color = sub.color;
    rec.method = sub.method;
    rec.evaluations = ctx.evals - before;
    rec.truncated = sub.truncated;
    st.truncated = st.truncated || sub.truncated;
    rec.starved = sub.status == BuilderState::Status::Starved;
}

void run_staged(Ctx& ctx, const ColoringHandle& c, const FinSet& w, BuilderState& st) {
    st.method = "staged";
    FinSet hset = w;
    std::vector<std::uint64_t> z;
    while (!hset.empty()) {
        std::size_t i = st.stages.size();
        if (i >= ctx.budget.stages) ctx.fail("stage budget");
        std::uint64_t h = hset.min();
        StageRecord rec;
        rec.index = i;
        rec.h = FinSet{h};
        rec.sub_alpha = fund(c.alpha, h);
        rec.jump_level = successor(rec.sub_alpha);
        stage_solve(ctx, stage_coloring(c, rec.h, rec.sub_alpha), hset.drop(1), i, rec, st);
        hset = rec.window;
        z.push_back(h);
        st.stages.push_back(std::move(rec));
    }
    st.z = FinSet(z);

    // Pigeonhole on Z. A stage without color has no extension inside its
    // window, so it may join any class.
    std::vector<std::uint64_t> best;
    for (unsigned j = 0; j < c.palette; ++j) {
        std::vector<std::uint64_t> cls;
        bool colored = false;
        for (const auto& rec : st.stages) {
            if (!rec.color || *rec.color == j) cls.push_back(rec.h.min());
            colored = colored || (rec.color && *rec.color == j);
        }
        if (j == 0 || cls.size() > best.size()) {
            best = cls;
            st.color = colored ? std::optional<unsigned>(j) : std::nullopt;
        }
    }
    st.prefix = FinSet(best);
}

void run_scheduled(Ctx& ctx, const ColoringHandle& c, const FinSet& w, BuilderState& st) {
    st.method = "scheduled";
    Ordinal l = lead(c.alpha);
    Ordinal rest = left_subtract(c.alpha, l);
    ColoringHandle shape{rest, ColoringHandle::Shape::Uplus, 1, [](const FinSet&) { return 0U; }};

    std::vector<FinSet> cand;
    visit_domain(shape, w, std::nullopt, [&](const FinSet& s) {
        if (cand.size() >= ctx.budget.candidates) ctx.fail("candidate budget");
        cand.push_back(s);
        return true;
    });
    std::sort(cand.begin(), cand.end(), code_less);

    std::vector<bool> chosen(cand.size(), false);
    std::map<std::vector<std::uint64_t>, std::optional<unsigned>> colors;
    std::set<std::uint64_t> z;
    FinSet hset = w;
    auto eligible = [&](const FinSet& s) {
        return std::all_of(s.begin(), s.end(), [&](std::uint64_t v) {
            return z.count(v) || std::binary_search(hset.begin(), hset.end(), v);
        });
    };
    for (;;) {
        std::size_t idx = 0;
        while (idx < cand.size() && (chosen[idx] || !eligible(cand[idx]))) ++idx;
        if (idx == cand.size()) break;
        std::size_t i = st.stages.size();
        if (i >= ctx.budget.stages) ctx.fail("stage budget");
        StageRecord rec;
        rec.index = i;
        rec.h = cand[idx];
        rec.sub_alpha = fund(l, rec.h.max());
        rec.jump_level = successor(rec.sub_alpha);
        stage_solve(ctx, stage_coloring(c, rec.h, rec.sub_alpha), hset.above(rec.h.max()), i, rec, st);
        chosen[idx] = true;
        hset = rec.window;
        colors[rec.h.elems()] = rec.color;
        z.insert(rec.h.begin(), rec.h.end());
        st.stages.push_back(std::move(rec));
    }
    // Every (1 uplus alpha')-size subset of Z and the leftover window was
    // chosen, so leftover elements only occur above some h_i, inside H_i.
    st.leftover = hset;
    if (!hset.empty()) {
        st.status = BuilderState::Status::Starved;
        st.failure_path = {st.stages.size()};
        st.failure = "no eligible set while " + std::to_string(hset.size()) + " window elements remain";
    }

    // Longest prefix of Z whose (1 uplus alpha')-size subsets were all chosen.
    FinSet zall(std::vector<std::uint64_t>(z.begin(), z.end()));
    std::optional<std::uint64_t> cut;
    std::uint64_t seen = 0;
    visit_domain(shape, zall, std::nullopt, [&](const FinSet& u) {
        if (++seen > ctx.budget.candidates) ctx.fail("candidate budget");
        if (!colors.count(u.elems())) cut = cut ? std::min(*cut, u.max()) : u.max();
        return true;
    });
    std::vector<std::uint64_t> covered;
    for (std::uint64_t v : zall) {
        if (!cut || v < *cut) covered.push_back(v);
    }
    st.z = FinSet(covered);
    st.uncovered = zall.size() - covered.size();

    // The induced coloring of Z, with uncolored sets read as j.
    std::optional<BuilderState> best;
    ctx.path.push_back(st.stages.size());
    for (unsigned j = 0; j < c.palette; ++j) {
        ColoringHandle f{rest, ColoringHandle::Shape::Uplus, c.palette, [&colors, j](const FinSet& u) {
                             auto it = colors.find(u.elems());
                             return it != colors.end() && it->second ? *it->second : j;
                         }};
        BuilderState sub = fresh(f);
        dispatch(ctx, f, st.z, sub);
        if (!best || sub.prefix.size() > best->prefix.size()) best = std::move(sub);
    }
    ctx.path.pop_back();
    st.truncated = st.truncated || best->truncated;
    st.prefix = best->prefix.concat(st.leftover);
    for (const auto& rec : st.stages) {
        if (rec.color && rec.h.is_subset_of(st.prefix)) {
            st.color = rec.color;
            break;
        }
    }
}

void dispatch(Ctx& ctx, const ColoringHandle& c, const FinSet& w, BuilderState& st) {
    if (c.alpha.is_nat()) {
        run_finite(ctx, c, w, st);
    } else if (c.alpha.is_indecomposable()) {
        run_staged(ctx, c, w, st);
    } else {
        run_scheduled(ctx, c, w, st);
    }
}

using Runner = void (*)(Ctx&, const ColoringHandle&, const FinSet&, BuilderState&);

BuilderState run_top(const ColoringHandle& c, const FinSet& w, const BuildBudget& budget, Runner runner) {
    auto ctx = std::make_shared<Ctx>();
    ctx->budget = budget;
    ColoringHandle counted = c;
    counted.eval = [inner = c.eval, ctx](const FinSet& s) {
        if (++ctx->evals > ctx->budget.evaluations) ctx->fail("evaluation budget");
        return inner(s);
    };
    BuilderState st = fresh(c);
    try {
        runner(*ctx, counted, w, st);
    } catch (const BudgetOut& e) {
        st.status = BuilderState::Status::BudgetExhausted;
        st.failure_path = e.path;
        st.failure = e.what;
        st.prefix = FinSet{};
        st.color.reset();
    }
    st.evaluations = ctx->evals;
    return st;
}

}  // namespace

BuilderState solve(const ColoringHandle& c, const FinSet& window, const BuildBudget& budget) {
    return run_top(c, window, budget, dispatch);
}

BuilderState solve_finite(const ColoringHandle& c, const FinSet& window, const BuildBudget& budget) {
    if (!c.alpha.is_nat()) throw std::invalid_argument("solve_finite: alpha must be finite");
    return run_top(c, window, budget, run_finite);
}

BuilderState solve_indecomposable(const ColoringHandle& c, const FinSet& window, const BuildBudget& budget) {
    if (c.alpha.is_nat() || !c.alpha.is_indecomposable()) {
        throw std::invalid_argument("solve_indecomposable: alpha must be infinite and indecomposable");
    }
    return run_top(c, window, budget, run_staged);
}

BuilderState solve_uplus(const ColoringHandle& d, const FinSet& window, const BuildBudget& budget) {
    if (d.shape != ColoringHandle::Shape::Uplus || d.alpha != Ordinal::omega()) {
        throw std::invalid_argument("solve_uplus: the coloring must be over (1 uplus omega)-size sets");
    }
    return run_top(d, window, budget, run_staged);
}

BuilderState solve_decomposable(const ColoringHandle& c, const FinSet& window, const BuildBudget& budget) {
    if (c.alpha.is_nat() || c.alpha.is_indecomposable()) {
        throw std::invalid_argument("solve_decomposable: alpha must be infinite and decomposable");
    }
    return run_top(c, window, budget, run_scheduled);
}

// ---------------------------------------------------------------------------
// Checks

HomogeneityReport audit_prefix(const ColoringHandle& c, const FinSet& h, std::uint64_t cap) {
    HomogeneityReport rep;
    std::optional<FinSet> first;
    auto test = [&](const FinSet& s) {
        if (rep.tested >= cap) {
            rep.complete = false;
            return false;
        }
        ++rep.tested;
        unsigned col = c(s);
        if (!rep.color) {
            rep.color = col;
            first = s;
        } else if (col != *rep.color) {
            rep.homogeneous = false;
            rep.complete = false;
            rep.witness_a = first;
            rep.witness_b = s;
            return false;
        }
        return true;
    };
    for (const FinSet& b : enumerate_exact(c.alpha, h)) {
        if (c.shape == ColoringHandle::Shape::Plain) {
            if (!test(b)) return rep;
            continue;
        }
        for (std::uint64_t x : h) {
            if (!b.empty() && x <= b.max()) continue;
            std::vector<std::uint64_t> s = b.elems();
            s.push_back(x);
            if (!test(FinSet(std::move(s)))) return rep;
        }
    }
    return rep;
}

namespace {

void check_stage_coloring(const ColoringHandle& c, const StageRecord& rec, std::uint64_t cap,
                          std::vector<std::string>& out) {
    std::string tag = "stage " + std::to_string(rec.index) + ": ";
    // A window that does not lie above h_i is reported by the caller.
    if (!rec.window.empty() && rec.window.min() <= rec.h.max()) return;
    HomogeneityReport rep;
    try {
        rep = audit_prefix(stage_coloring(c, rec.h, rec.sub_alpha), rec.window, cap);
    } catch (const std::exception& e) {
        out.push_back(tag + "stage coloring failed: " + e.what());
        return;
    }
    if (!rep.homogeneous) {
        out.push_back(tag + "window is not homogeneous for the stage coloring");
    } else if (!rep.complete) {
        out.push_back(tag + "window check hit the cap");
    } else if (rep.color != rec.color) {
        out.push_back(tag + "recorded color differs from the window's color");
    }
}

}  // namespace

std::vector<std::string> check_requirements(const ColoringHandle& c, const BuilderState& st, std::uint64_t cap) {
    std::vector<std::string> out;
    const auto& ss = st.stages;
    auto tag = [](std::size_t i) { return "stage " + std::to_string(i) + ": "; };
    if (st.method == "staged") {
        for (std::size_t i = 0; i < ss.size(); ++i) {
            const auto& r = ss[i];
            if (i > 0) {
                const FinSet& prev = ss[i - 1].window;
                if (prev.empty() || r.h.min() != prev.min()) out.push_back(tag(i) + "h_i is not min H_{i-1}");
                if (!r.window.is_subset_of(prev) || r.window.size() >= prev.size()) {
                    out.push_back(tag(i) + "H_i is not a proper subset of H_{i-1}");
                }
            }
            if (!r.window.empty() && r.h.min() >= r.window.min()) out.push_back(tag(i) + "h_i >= min H_i");
            if (!(r.jump_level < st.alpha)) out.push_back(tag(i) + "jump level not below alpha");
            if (r.sub_alpha != fund(st.alpha, r.h.min())) out.push_back(tag(i) + "sub-dimension is not alpha[h_i]");
            check_stage_coloring(c, r, cap, out);
        }
        std::vector<std::uint64_t> hs;
        for (const auto& r : ss) hs.push_back(r.h.min());
        if (st.z != FinSet(hs)) out.push_back("Z is not {h_i}");
        if (!st.prefix.is_subset_of(st.z)) out.push_back("prefix is not inside Z");
    } else if (st.method == "scheduled") {
        Ordinal l = lead(st.alpha);
        Ordinal rest = left_subtract(st.alpha, l);
        ColoringHandle shape{rest, ColoringHandle::Shape::Uplus, 1, [](const FinSet&) { return 0U; }};
        std::set<std::vector<std::uint64_t>> hs;
        std::set<std::uint64_t> earlier;
        for (std::size_t i = 0; i < ss.size(); ++i) {
            const auto& r = ss[i];
            if (!shape.in_domain(r.h)) out.push_back(tag(i) + "h_i is not (1 uplus alpha')-size");
            if (i > 0) {
                const FinSet& prev = ss[i - 1].window;
                if (!code_less(ss[i - 1].h, r.h)) out.push_back(tag(i) + "h_i does not follow h_{i-1}");
                if (!r.window.is_subset_of(prev)) out.push_back(tag(i) + "H_i is not inside H_{i-1}");
                for (std::uint64_t v : r.h) {
                    if (!earlier.count(v) && !std::binary_search(prev.begin(), prev.end(), v)) {
                        out.push_back(tag(i) + "h_i was not eligible");
                        break;
                    }
                }
            }
            if (!r.window.empty() && r.h.max() >= r.window.min()) out.push_back(tag(i) + "max h_i >= min H_i");
            if (!(r.jump_level < l)) out.push_back(tag(i) + "jump level not below lead(alpha)");
            if (r.sub_alpha != fund(l, r.h.max())) out.push_back(tag(i) + "sub-dimension is not lead(alpha)[max h_i]");
            check_stage_coloring(c, r, cap, out);
            hs.insert(r.h.elems());
            earlier.insert(r.h.begin(), r.h.end());
        }
        visit_domain(shape, st.z, std::nullopt, [&](const FinSet& u) {
            if (!hs.count(u.elems())) {
                out.push_back("coverage: " + format(u) + " is not among the h_i");
                return false;
            }
            return true;
        });
        for (std::uint64_t v : st.z) {
            if (!earlier.count(v)) out.push_back("Z holds an element outside every h_i");
        }
        if (!st.prefix.is_subset_of(st.z.concat(st.leftover))) out.push_back("prefix is not inside Z and the leftover");
        if (!st.stages.empty() && !st.leftover.is_subset_of(st.stages.back().window)) {
            out.push_back("leftover is not inside the last window");
        }
    }
    return out;
}

}  // namespace ordlab
