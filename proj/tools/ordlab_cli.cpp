#include "suites.hpp"

#include "ordlab/corpus.hpp"
#include "ordlab/fundseq.hpp"
#include "ordlab/homog.hpp"
#include "ordlab/jump.hpp"
#include "ordlab/largeness.hpp"
#include "ordlab/peeling.hpp"

#include "homog_support.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace ordlab;
using Json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kSuiteFailure = 1, kUsage = 2, kFuel = 3, kStarved = 4 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::uint64_t default_fuel() {
    if (const char* env = std::getenv("ORDLAB_FUEL")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError(std::string("ORDLAB_FUEL is not a number: ") + env);
        }
    }
    return kDefaultFuel;
}

Ordinal ord_arg(const std::string& text) { return parse_ordinal(text); }

Nat nat_arg(const std::string& text) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        throw UsageError("expected a natural number: " + text);
    }
    return Nat(text);
}

// "lo..hi" or a set in the set grammar.
FinSet window_arg(const std::string& text) {
    if (auto dots = text.find(".."); dots != std::string::npos) {
        std::uint64_t lo = static_cast<std::uint64_t>(nat_arg(text.substr(0, dots)));
        std::uint64_t hi = static_cast<std::uint64_t>(nat_arg(text.substr(dots + 2)));
        if (lo > hi) throw UsageError("empty window " + text);
        return homog_support::interval(lo, hi);
    }
    return parse_finset(text);
}

// finite:N, nat or rev.
std::shared_ptr<const LinearOrder> order_arg(const std::string& text) {
    if (text == "nat") return std::make_shared<NatOrder>(false);
    if (text == "rev") return std::make_shared<NatOrder>(true);
    if (text.rfind("finite:", 0) == 0) return std::make_shared<FiniteOrder>(static_cast<std::uint64_t>(nat_arg(text.substr(7))));
    throw UsageError("unknown order " + text + " (finite:N, nat or rev)");
}

OracleTable oracle_arg(const std::string& text, std::uint64_t cap) {
    if (text == "evens") return OracleTable::of([](std::uint64_t v) { return v % 2 == 0; }, cap);
    if (text == "odds") return OracleTable::of([](std::uint64_t v) { return v % 2 == 1; }, cap);
    if (text == "empty") return OracleTable(cap);
    if (text.rfind("set:", 0) == 0) {
        FinSet s = parse_finset(text.substr(4));
        if (!s.empty() && s.max() >= cap) throw UsageError("oracle member beyond the cap");
        return OracleTable::of(s.elems(), cap);
    }
    throw UsageError("unknown oracle " + text + " (evens, odds, empty or set:{...})");
}

std::string read_source(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

// ---- ord ----

void add_ord(CLI::App& app, std::function<int()>& action) {
    auto* ord = app.add_subcommand("ord", "Ordinal calculator");
    ord->require_subcommand(1);

    auto a = std::make_shared<std::string>();
    auto b = std::make_shared<std::string>();
    auto* cmp = ord->add_subcommand("cmp", "Compare two ordinals: LT, EQ or GT");
    cmp->add_option("a", *a)->required();
    cmp->add_option("b", *b)->required();
    cmp->callback([&action, a, b] {
        action = [a, b] {
            std::cout << to_string(compare(ord_arg(*a), ord_arg(*b))) << "\n";
            return kOk;
        };
    });

    auto* fmt = ord->add_subcommand("format", "Canonical form");
    fmt->add_option("a", *a)->required();
    fmt->callback([&action, a] {
        action = [a] {
            std::cout << format(ord_arg(*a)) << "\n";
            return kOk;
        };
    });

    auto* sum = ord->add_subcommand("add", "Ordinal sum a + b");
    sum->add_option("a", *a)->required();
    sum->add_option("b", *b)->required();
    sum->callback([&action, a, b] {
        action = [a, b] {
            std::cout << format(add(ord_arg(*a), ord_arg(*b))) << "\n";
            return kOk;
        };
    });

    auto* ld = ord->add_subcommand("lead", "Leading Cantor normal form term");
    ld->add_option("a", *a)->required();
    ld->callback([&action, a] {
        action = [a] {
            std::cout << format(lead(ord_arg(*a))) << "\n";
            return kOk;
        };
    });

    auto ceiling = std::make_shared<std::string>("eps0");
    auto fuel = std::make_shared<std::optional<std::uint64_t>>();
    auto* nrm = ord->add_subcommand("norm", "Norm against the working ceiling");
    nrm->add_option("a", *a)->required();
    nrm->add_option("--ceiling", *ceiling, "eps0, gamma0 or an ordinal")->capture_default_str();
    nrm->add_option("--fuel", *fuel, "Recursion fuel (default $ORDLAB_FUEL or 1000000)");
    nrm->callback([&action, a, ceiling, fuel] {
        action = [a, ceiling, fuel] {
            Bound c = *ceiling == "eps0" ? Bound(epsilon0()) : *ceiling == "gamma0" ? Bound::gamma0() : Bound(ord_arg(*ceiling));
            NormContext ctx(c, fuel->value_or(default_fuel()));
            std::cout << ctx.norm(ord_arg(*a)) << "\n";
            return kOk;
        };
    });

    auto* code = ord->add_subcommand("code", "Structural code and norm-dominating code");
    code->add_option("a", *a)->required();
    code->callback([&action, a] {
        action = [a] {
            Ordinal o = ord_arg(*a);
            NormContext ctx;
            std::cout << "structural," << structural_code(o) << "\n";
            std::cout << "dominating," << ordinal_code(o, ctx) << "\n";
            return kOk;
        };
    });
}

// ---- fund ----

void add_fund(CLI::App& app, std::function<int()>& action) {
    struct Args {
        std::string alpha;
        std::optional<std::uint64_t> n, upto;
        std::optional<std::string> set;
    };
    auto args = std::make_shared<Args>();
    auto* f = app.add_subcommand("fund", "Fundamental sequences as CSV");
    f->add_option("alpha", args->alpha)->required();
    auto* n = f->add_option("--n", args->n, "Print alpha[n]");
    auto* upto = f->add_option("--upto", args->upto, "CSV n,alpha[n] for n = 0..N");
    auto* set = f->add_option("--set", args->set, "CSV of the descent alpha[s_0][s_1]...");
    n->excludes(upto)->excludes(set);
    upto->excludes(set);
    f->callback([&action, args] {
        action = [args] {
            Ordinal a = ord_arg(args->alpha);
            if (args->n) {
                std::cout << format(fund(a, *args->n)) << "\n";
            } else if (args->set) {
                std::cout << "step,x,value\n";
                std::size_t i = 0;
                for (std::uint64_t x : parse_finset(*args->set)) {
                    a = fund(a, x);
                    std::cout << i++ << "," << x << ",\"" << format(a) << "\"\n";
                }
            } else {
                std::cout << "n,value\n";
                for (std::uint64_t k = 0; k <= args->upto.value_or(10); ++k) std::cout << k << ",\"" << format(fund(a, k)) << "\"\n";
            }
            return kOk;
        };
    });
}

// ---- large ----

void add_large(CLI::App& app, std::function<int()>& action) {
    struct Args {
        std::string alpha, set;
        std::uint64_t start = 1, step = 1, count = 10;
        unsigned k = 1;
        std::optional<std::uint64_t> fuel;
    };
    auto args = std::make_shared<Args>();
    auto* large = app.add_subcommand("large", "Largeness tools");
    large->require_subcommand(1);

    auto* check = large->add_subcommand("check", "Classify a set: exact, large or small");
    check->add_option("--alpha", args->alpha)->required();
    check->add_option("--set", args->set)->required();
    check->callback([&action, args] {
        action = [args] {
            Ordinal a = ord_arg(args->alpha);
            FinSet s = parse_finset(args->set);
            std::cout << (is_exact(a, s) ? "exact" : is_large(a, s) ? "large" : "small") << "\n";
            return kOk;
        };
    });

    auto* en = large->add_subcommand("enumerate", "All alpha-size subsets of a ground set");
    en->add_option("--alpha", args->alpha)->required();
    en->add_option("--ground", args->set)->required();
    en->callback([&action, args] {
        action = [args] {
            for (const auto& s : enumerate_exact(ord_arg(args->alpha), parse_finset(args->set))) std::cout << format(s) << "\n";
            return kOk;
        };
    });

    auto stream_opts = [&](CLI::App* sub) {
        sub->add_option("--alpha", args->alpha)->required();
        sub->add_option("--start", args->start, "First stream element")->capture_default_str();
        sub->add_option("--step", args->step, "Stream step")->capture_default_str()->check(CLI::PositiveNumber);
        sub->add_option("--fuel", args->fuel, "Pull budget (default $ORDLAB_FUEL or 1000000)");
    };
    auto* pre = large->add_subcommand("prefix", "Shortest alpha-large prefix of an arithmetic stream");
    stream_opts(pre);
    pre->callback([&action, args] {
        action = [args] {
            NumStream xs = NumStream::arithmetic(args->start, args->step, args->fuel.value_or(default_fuel()));
            std::cout << format(min_exact_prefix(ord_arg(args->alpha), xs)) << "\n";
            return kOk;
        };
    });

    auto* sc = large->add_subcommand("scatter", "Scattered stream S^k(alpha, X) as CSV");
    stream_opts(sc);
    sc->add_option("--count", args->count, "Elements to print")->capture_default_str();
    sc->add_option("--k", args->k, "Iterations of the scattering")->capture_default_str()->check(CLI::PositiveNumber);
    sc->callback([&action, args] {
        action = [args] {
            const std::uint64_t fuel = args->fuel.value_or(default_fuel());
            auto xs = std::make_shared<NumStream>(NumStream::arithmetic(args->start, args->step, fuel));
            NumStream out = scatter_n(args->k, ord_arg(args->alpha), xs, fuel);
            std::cout << "index,value\n";
            for (std::uint64_t i = 0; i < args->count; ++i) std::cout << i << "," << out.next() << "\n";
            return kOk;
        };
    });
}

// ---- peel ----

void add_peel(CLI::App& app, std::function<int()>& action) {
    struct Args {
        std::string alpha = "1", order = "finite:3", rho = "1", tuple;
    };
    auto args = std::make_shared<Args>();
    auto* peel = app.add_subcommand("peel", "Peeling functions, zeta and the 4-coloring on term tuples");
    peel->require_subcommand(1);
    auto common = [&](CLI::App* sub) {
        sub->add_option("tuple", args->tuple, "Terms separated by ';'")->required();
        sub->add_option("--alpha", args->alpha, "Ambient alpha")->capture_default_str();
        sub->add_option("--order", args->order, "Base order: finite:N, nat or rev")->capture_default_str();
    };
    auto setup = [](const Args& a) {
        auto ctx = make_context(ord_arg(a.alpha), order_arg(a.order));
        return std::make_pair(ctx, parse_tuple(a.tuple, ctx));
    };

    auto* bar = peel->add_subcommand("bar", "p-bar_rho of a tuple");
    common(bar);
    bar->add_option("--rho", args->rho, "Index rho <= omega^alpha")->capture_default_str();
    bar->callback([&action, args, setup] {
        action = [args, setup] {
            auto [ctx, a] = setup(*args);
            Peeler p(ctx);
            std::vector<std::string> parts;
            for (const auto& e : p.peel(ord_arg(args->rho), a)) parts.push_back(format(e, ctx));
            std::cout << join(parts, "; ") << "\n";
            return kOk;
        };
    });

    auto* zeta = peel->add_subcommand("zeta", "Least zeta with p_zeta(A) <= p_zeta(A-), or none");
    common(zeta);
    zeta->callback([&action, args, setup] {
        action = [args, setup] {
            auto [ctx, a] = setup(*args);
            Peeler p(ctx);
            auto z = p.zeta(a);
            std::cout << (z ? format(*z) : "none") << "\n";
            return kOk;
        };
    });

    auto* color = peel->add_subcommand("color", "The 4-coloring of a tuple of at least two terms");
    common(color);
    color->callback([&action, args, setup] {
        action = [args, setup] {
            auto [ctx, a] = setup(*args);
            Peeler p(ctx);
            std::cout << p.color4(a) << "\n";
            return kOk;
        };
    });
}

void add_wop(CLI::App& app, std::function<int()>& action) {
    struct Args {
        std::size_t window = 60;
        std::optional<std::uint64_t> fuel;
        std::uint64_t nodes = SearchBudget{}.nodes;
    };
    auto args = std::make_shared<Args>();
    auto* w = app.add_subcommand("wop-demo", "alpha = 1 extraction pipeline; CSV of the extracted sequence");
    w->add_option("--window", args->window, "M- elements searched")->capture_default_str()->check(CLI::PositiveNumber);
    w->add_option("--fuel", args->fuel, "Sequence fuel (default $ORDLAB_FUEL or 1000000)");
    w->add_option("--nodes", args->nodes, "Search node budget")->capture_default_str();
    w->callback([&action, args] {
        action = [args] {
            SearchBudget budget;
            budget.nodes = args->nodes;
            auto run = suites::wop_pipeline(args->window, args->fuel.value_or(default_fuel()), budget);
            std::cout << "index,x\n";
            for (std::size_t i = 0; i < run.extracted.size(); ++i) std::cout << i << "," << run.extracted[i] << "\n";
            return kOk;
        };
    });
}

// ---- jump ----

void add_jump(CLI::App& app, std::function<int()>& action) {
    struct Args {
        std::string file = "-", code, alpha = "1", set, oracle = "evens", gamma = "0";
        std::uint64_t x = 0, m = 1000, cap = 4096, fuel = 256, y = 0, z = 0, oracle_cap = 1 << 15;
        bool trace = false;
    };
    auto args = std::make_shared<Args>();
    auto* jump = app.add_subcommand("jump", "Register machines, jump tables, M_a and colorings");
    jump->require_subcommand(1);

    auto* as = jump->add_subcommand("assemble", "Program text to its code");
    as->add_option("file", args->file, "Source file, '-' for stdin")->capture_default_str();
    as->callback([&action, args] {
        action = [args] {
            std::cout << encode_program(assemble(read_source(args->file))) << "\n";
            return kOk;
        };
    });

    auto* dis = jump->add_subcommand("disasm", "Code to program text");
    dis->add_option("code", args->code)->required();
    dis->callback([&action, args] {
        action = [args] {
            std::cout << disassemble(decode_program(nat_arg(args->code)));
            return kOk;
        };
    });

    auto* run = jump->add_subcommand("run", "Bounded run: Halted(output, steps, max query), Running or Flagged");
    auto* code_opt = run->add_option("--code", args->code, "Program code");
    auto* file_opt = run->add_option("--file", args->file, "Program source");
    code_opt->excludes(file_opt);
    run->add_option("--x", args->x, "Input")->capture_default_str();
    run->add_option("--m", args->m, "Step and query bound")->capture_default_str();
    run->add_option("--oracle", args->oracle, "evens, odds, empty or set:{...}")->capture_default_str();
    run->add_option("--oracle-cap", args->oracle_cap, "Oracle table size")->capture_default_str();
    run->add_flag("--trace", args->trace, "Print the trace as CSV pc,query,answer");
    run->callback([&action, args, code_opt] {
        action = [args, code_opt] {
            Program p = code_opt->count() ? decode_program(nat_arg(args->code)) : assemble(read_source(args->file));
            OracleTable y = oracle_arg(args->oracle, args->oracle_cap);
            BoundedRun r = run_program(p, [&y](std::uint64_t v) { return y.contains(v); }, args->x, args->m, args->trace);
            std::cout << format(r) << "\n";
            if (args->trace) {
                std::cout << "pc,query,answer\n";
                for (const auto& s : r.trace) {
                    std::cout << s.pc << "," << (s.query ? std::to_string(*s.query) : "") << "," << (s.query ? (s.answer ? "1" : "0") : "") << "\n";
                }
            }
            return kOk;
        };
    });

    auto* table = jump->add_subcommand("table", "Jump table approximation as CSV y,gamma,z");
    table->add_option("--window", args->set, "X window")->required();
    table->add_option("--alpha", args->alpha, "Jump level")->capture_default_str();
    table->add_option("--fuel", args->fuel, "Halting fuel, at most the code cap")->capture_default_str();
    table->add_option("--cap", args->cap, "Code cap")->capture_default_str();
    table->callback([&action, args] {
        action = [args] {
            JumpLab lab(args->cap);
            JumpTable t = tj_approx(window_arg(args->set), ord_arg(args->alpha), args->fuel, lab);
            std::cout << "y,gamma,z\n";
            for (std::uint64_t y : t.table.members()) {
                auto u = lab.unpair(y);
                std::cout << y << ",\"" << (u ? format(u->gamma) : "") << "\"," << (u ? std::to_string(u->z) : "") << "\n";
            }
            std::cerr << "undecided " << t.undecided << ", dropped " << t.dropped << "\n";
            return kOk;
        };
    });

    auto* machine = jump->add_subcommand("machine", "M_a(y, s) over a window of A: accept or reject");
    machine->add_option("--alpha", args->alpha)->capture_default_str();
    machine->add_option("--y", args->y)->required();
    machine->add_option("--set", args->set)->required();
    machine->add_option("--oracle", args->oracle, "A: evens, odds, empty or set:{...}")->capture_default_str();
    machine->add_option("--oracle-cap", args->oracle_cap, "A window size")->capture_default_str();
    machine->callback([&action, args] {
        action = [args] {
            JumpLab lab;
            MachineFamily mf(lab, oracle_arg(args->oracle, args->oracle_cap));
            std::cout << (mf.accepts(ord_arg(args->alpha), args->y, parse_finset(args->set)) ? "accept" : "reject") << "\n";
            return kOk;
        };
    });

    auto* color = jump->add_subcommand("color", "c_{a+3} of <a0, a1, a2> followed by an a-size set");
    color->add_option("--alpha", args->alpha)->capture_default_str();
    color->add_option("--set", args->set)->required();
    color->add_option("--oracle", args->oracle, "A: evens, odds, empty or set:{...}")->capture_default_str();
    color->add_option("--oracle-cap", args->oracle_cap, "A window size")->capture_default_str();
    color->callback([&action, args] {
        action = [args] {
            JumpLab lab;
            MachineFamily mf(lab, oracle_arg(args->oracle, args->oracle_cap));
            std::cout << jump_coloring(ord_arg(args->alpha), parse_finset(args->set), mf) << "\n";
            return kOk;
        };
    });

    auto* pair = jump->add_subcommand("pair", "Code of <gamma, z>");
    pair->add_option("--gamma", args->gamma)->capture_default_str();
    pair->add_option("--z", args->z)->capture_default_str();
    pair->callback([&action, args] {
        action = [args] {
            JumpLab lab;
            std::cout << lab.pair(ord_arg(args->gamma), args->z) << "\n";
            return kOk;
        };
    });

    auto* unpair = jump->add_subcommand("unpair", "Decode y as <gamma, z>, or none");
    unpair->add_option("y", args->y)->required();
    unpair->callback([&action, args] {
        action = [args] {
            JumpLab lab;
            auto u = lab.unpair(args->y);
            std::cout << (u ? "<" + format(u->gamma) + ", " + std::to_string(u->z) + ">" : "none") << "\n";
            return kOk;
        };
    });
}

// ---- solve ----

Json to_json(const StageRecord& s) {
    return {{"index", s.index},
            {"h", format(s.h)},
            {"window", format(s.window)},
            {"color", s.color ? Json(*s.color) : Json(nullptr)},
            {"sub_alpha", format(s.sub_alpha)},
            {"jump_level", format(s.jump_level)},
            {"method", s.method},
            {"evaluations", s.evaluations},
            {"truncated", s.truncated},
            {"starved", s.starved}};
}

Json to_json(const BuilderState& st) {
    Json stages = Json::array();
    for (const auto& s : st.stages) stages.push_back(to_json(s));
    return {{"alpha", format(st.alpha)},
            {"shape", format(st.shape)},
            {"palette", st.palette},
            {"method", st.method},
            {"status", format(st.status)},
            {"color", st.color ? Json(*st.color) : Json(nullptr)},
            {"prefix", format(st.prefix)},
            {"prefix_len", st.prefix.size()},
            {"z", format(st.z)},
            {"uncovered", st.uncovered},
            {"leftover", format(st.leftover)},
            {"evaluations", st.evaluations},
            {"truncated", st.truncated},
            {"failure_path", st.failure_path},
            {"failure", st.failure},
            {"stages", stages}};
}

homog_support::ColorFn coloring_arg(const std::string& name) {
    if (name == "mixing") return homog_support::mixing;
    for (const auto& [n, f] : homog_support::fixed_colorings()) {
        if (n == name) return f;
    }
    throw UsageError("unknown coloring " + name + " (min-parity, sum-parity, max-parity, mixing, constant)");
}

void add_solve(CLI::App& app, std::function<int()>& action) {
    struct Args {
        std::string alpha = "w", shape = "plain", coloring = "min-parity", window = "1..24";
        unsigned colors = 2;
        std::size_t target = 12;
        std::optional<std::uint64_t> budget;
        std::uint64_t audit_cap = 1'000'000;
    };
    auto args = std::make_shared<Args>();
    auto* s = app.add_subcommand("solve", "Fueled homogeneous-set construction; JSON BuilderState report");
    s->add_option("--alpha", args->alpha)->capture_default_str();
    s->add_option("--shape", args->shape)->capture_default_str()->check(CLI::IsMember({"plain", "uplus"}));
    s->add_option("--colors", args->colors, "Palette size k")->capture_default_str()->check(CLI::Range(1U, 64U));
    s->add_option("--coloring", args->coloring, "min-parity, sum-parity, max-parity, mixing or constant")->capture_default_str();
    s->add_option("--window", args->window, "lo..hi or a set")->capture_default_str();
    s->add_option("--target-len", args->target, "Required prefix length")->capture_default_str();
    s->add_option("--budget", args->budget, "Evaluations of the coloring (default $ORDLAB_FUEL or 20000000)");
    s->add_option("--audit-cap", args->audit_cap, "Domain sets the independent audit may test")->capture_default_str();
    s->callback([&action, args] {
        action = [args] {
            Ordinal a = ord_arg(args->alpha);
            auto shape = args->shape == "uplus" ? ColoringHandle::Shape::Uplus : ColoringHandle::Shape::Plain;
            ColoringHandle c = args->coloring == "constant" ? homog_support::constant(a, 0, args->colors, shape)
                                                            : homog_support::handle(a, coloring_arg(args->coloring), args->colors, shape);
            BuildBudget budget;
            if (args->budget) {
                budget.evaluations = *args->budget;
            } else if (std::getenv("ORDLAB_FUEL")) {
                budget.evaluations = default_fuel();
            }
            BuilderState st = solve(c, window_arg(args->window), budget);
            HomogeneityReport audit = audit_prefix(c, st.prefix, args->audit_cap);
            Json j = to_json(st);
            j["target_len"] = args->target;
            j["target_met"] = st.prefix.size() >= args->target;
            j["audit"] = {{"homogeneous", audit.homogeneous}, {"tested", audit.tested}, {"complete", audit.complete}};
            j["requirement_violations"] = check_requirements(c, st, args->audit_cap);
            std::cout << j.dump(2) << "\n";
            if (st.status == BuilderState::Status::BudgetExhausted) return kFuel;
            if (!audit.homogeneous || !j["requirement_violations"].empty() || st.prefix.size() < args->target) {
                return kSuiteFailure;
            }
            return st.status == BuilderState::Status::Starved ? kStarved : kOk;
        };
    });
}

// ---- suite ----

void add_suite(CLI::App& app, std::function<int()>& action) {
    struct Args {
        std::string name;
        suites::Options opts;
        std::string max;
        bool no_timing = false;
    };
    auto args = std::make_shared<Args>();
    auto* suite = app.add_subcommand("suite", "Property suites with JSON reports");
    suite->require_subcommand(1);

    auto* list = suite->add_subcommand("list", "Names and summaries");
    list->callback([&action] {
        action = [] {
            for (const auto& s : suites::registry()) std::cout << s.name << "\t" << s.summary << "\n";
            return kOk;
        };
    });

    auto* run = suite->add_subcommand("run", "Run one suite; exit 1 when it has failures");
    run->add_option("name", args->name)->required();
    run->add_option("--seed", args->opts.seed, "Random seed")->capture_default_str();
    run->add_option("--max", args->max, "Corpus bound (ordinal)");
    run->add_option("--n", args->opts.n, "Suite-specific size parameter");
    run->add_option("--count", args->opts.count, "Suite-specific count");
    run->add_option("--fuel", args->opts.fuel, "Suite-specific fuel");
    run->add_flag("--no-timing", args->no_timing, "Omit the millis field");
    run->callback([&action, args] {
        action = [args] {
            const suites::SuiteInfo* info = suites::find_suite(args->name);
            if (!info) throw UsageError("unknown suite " + args->name + "; see `suite list`");
            if (!args->max.empty()) args->opts.max = ord_arg(args->max);
            suites::Report r = suites::run_suite(*info, args->opts);
            std::cout << suites::to_json(r, !args->no_timing).dump(2) << "\n";
            return r.passed() ? kOk : kSuiteFailure;
        };
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ordlab: ordinal notations, largeness, peeling, jump lab and homogeneous sets"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file with option defaults; flags override");
    std::function<int()> action;
    add_ord(app, action);
    add_fund(app, action);
    add_large(app, action);
    add_peel(app, action);
    add_wop(app, action);
    add_jump(app, action);
    add_solve(app, action);
    add_suite(app, action);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    try {
        return action ? action() : kUsage;
    } catch (const FuelExhausted& e) {
        std::cerr << "fuel exhausted: " << e.what() << "\n";
        return kFuel;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error at " << e.position() << ": " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kSuiteFailure;
    }
}
