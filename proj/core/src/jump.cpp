#include "ordlab/jump.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace ordlab {

namespace {

constexpr std::uint64_t kNoLimit = std::numeric_limits<std::uint64_t>::max();

void put_gamma(std::vector<bool>& bits, std::uint64_t n) {
    int len = std::bit_width(n);
    for (int i = 0; i + 1 < len; ++i) bits.push_back(false);
    for (int i = len - 1; i >= 0; --i) bits.push_back((n >> i) & 1U);
}

struct BitReader {
    const Nat& e;
    std::int64_t pos;  // next bit index, counting down

    bool done() const { return pos < 0; }
    std::optional<bool> bit() {
        if (pos < 0) return std::nullopt;
        return boost::multiprecision::bit_test(e, static_cast<unsigned>(pos--));
    }
    std::optional<std::uint64_t> gamma() {
        int zeros = 0;
        for (;;) {
            auto b = bit();
            if (!b) return std::nullopt;
            if (*b) break;
            if (++zeros > 63) return std::nullopt;
        }
        std::uint64_t v = 1;
        for (int i = 0; i < zeros; ++i) {
            auto b = bit();
            if (!b) return std::nullopt;
            v = (v << 1) | (*b ? 1U : 0U);
        }
        return v;
    }
};

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > kNoLimit / a) return kNoLimit;
    return a * b;
}

}  // namespace

Nat encode_program(const Program& p) {
    std::vector<bool> bits{true};
    for (const auto& in : p) {
        if (in.r == kNoLimit || in.target == kNoLimit) throw std::invalid_argument("register or label too large to encode");
        switch (in.op) {
            case Instr::Op::Halt: bits.insert(bits.end(), {false, false}); break;
            case Instr::Op::Inc:
                bits.insert(bits.end(), {false, true});
                put_gamma(bits, in.r + 1);
                break;
            case Instr::Op::DecJz:
                bits.insert(bits.end(), {true, false});
                put_gamma(bits, in.r + 1);
                put_gamma(bits, in.target + 1);
                break;
            case Instr::Op::Query:
                bits.insert(bits.end(), {true, true});
                put_gamma(bits, in.r + 1);
                break;
        }
    }
    std::vector<unsigned char> bytes((bits.size() + 7) / 8, 0);
    std::size_t pad = bytes.size() * 8 - bits.size();
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) {
            std::size_t k = i + pad;
            bytes[k / 8] |= static_cast<unsigned char>(0x80U >> (k % 8));
        }
    }
    Nat e;
    boost::multiprecision::import_bits(e, bytes.begin(), bytes.end(), 8);
    return e;
}

Program decode_program(const Nat& e) {
    const Program fallback{Instr{}};
    if (e <= 0) return fallback;
    BitReader rd{e, static_cast<std::int64_t>(boost::multiprecision::msb(e)) - 1};
    Program p;
    while (!rd.done()) {
        auto hi = rd.bit(), lo = rd.bit();
        if (!hi || !lo) return fallback;
        Instr in;
        if (!*hi && !*lo) {
            p.push_back(in);
            continue;
        }
        auto r = rd.gamma();
        if (!r) return fallback;
        in.r = *r - 1;
        if (*hi && !*lo) {
            in.op = Instr::Op::DecJz;
            auto t = rd.gamma();
            if (!t) return fallback;
            in.target = *t - 1;
        } else {
            in.op = *hi ? Instr::Op::Query : Instr::Op::Inc;
        }
        p.push_back(in);
    }
    return p;
}

namespace {

struct Line {
    std::size_t pos;
    std::string_view text;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

bool is_ident(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s.front())) || s.front() == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::optional<std::uint64_t> parse_u64(std::string_view s) {
    if (s.empty() || s.size() > 19) return std::nullopt;
    std::uint64_t v = 0;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
}

}  // namespace

Program assemble(std::string_view text) {
    std::vector<Line> lines;
    std::size_t at = 0;
    while (at <= text.size()) {
        std::size_t nl = text.find('\n', at);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view raw = text.substr(at, nl - at);
        if (auto h = raw.find('#'); h != std::string_view::npos) raw = raw.substr(0, h);
        std::size_t lead = 0;
        while (lead < raw.size() && std::isspace(static_cast<unsigned char>(raw[lead]))) ++lead;
        std::string_view body = trim(raw);
        if (!body.empty()) lines.push_back({at + lead, body});
        at = nl + 1;
    }

    std::unordered_map<std::string, std::uint64_t> labels;
    struct Pending {
        std::size_t pos;
        std::string op;
        std::vector<std::pair<std::size_t, std::string_view>> args;
    };
    std::vector<Pending> instrs;
    for (const auto& ln : lines) {
        std::string_view s = ln.text;
        std::size_t pos = ln.pos;
        while (!s.empty()) {
            auto colon = s.find(':');
            if (colon == std::string_view::npos) break;
            std::string_view name = trim(s.substr(0, colon));
            if (!is_ident(name)) break;
            if (!labels.emplace(std::string(name), instrs.size()).second) {
                throw ParseError("duplicate label '" + std::string(name) + "'", pos);
            }
            std::size_t skip = colon + 1;
            while (skip < s.size() && std::isspace(static_cast<unsigned char>(s[skip]))) ++skip;
            s.remove_prefix(skip);
            pos += skip;
        }
        if (s.empty()) continue;
        std::size_t sp = 0;
        while (sp < s.size() && !std::isspace(static_cast<unsigned char>(s[sp]))) ++sp;
        Pending pd{pos, upper(s.substr(0, sp)), {}};
        std::size_t i = sp;
        while (i < s.size()) {
            while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == ',')) ++i;
            std::size_t j = i;
            while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != ',') ++j;
            if (j > i) pd.args.emplace_back(pos + i, s.substr(i, j - i));
            i = j;
        }
        instrs.push_back(std::move(pd));
    }

    auto reg = [](std::size_t pos, std::string_view a) {
        if (!a.empty() && (a.front() == 'r' || a.front() == 'R')) a.remove_prefix(1);
        auto v = parse_u64(a);
        if (!v || *v == kNoLimit) throw ParseError("expected a register", pos);
        return *v;
    };
    auto arity = [](const Pending& pd, std::size_t n) {
        if (pd.args.size() != n) {
            throw ParseError(pd.op + " takes " + std::to_string(n) + " operand" + (n == 1 ? "" : "s"), pd.pos);
        }
    };

    Program p;
    for (const auto& pd : instrs) {
        Instr in;
        if (pd.op == "HALT") {
            arity(pd, 0);
        } else if (pd.op == "INC" || pd.op == "QUERY") {
            arity(pd, 1);
            in.op = pd.op == "INC" ? Instr::Op::Inc : Instr::Op::Query;
            in.r = reg(pd.args[0].first, pd.args[0].second);
        } else if (pd.op == "DECJZ") {
            arity(pd, 2);
            in.op = Instr::Op::DecJz;
            in.r = reg(pd.args[0].first, pd.args[0].second);
            auto [tpos, t] = pd.args[1];
            if (auto it = labels.find(std::string(t)); it != labels.end()) {
                in.target = it->second;
            } else if (auto v = parse_u64(t); v && *v != kNoLimit) {
                in.target = *v;
            } else {
                throw ParseError("unknown label '" + std::string(t) + "'", tpos);
            }
        } else {
            throw ParseError("unknown instruction '" + pd.op + "'", pd.pos);
        }
        p.push_back(in);
    }
    return p;
}

std::string disassemble(const Program& p) {
    std::vector<bool> target(p.size() + 1, false);
    for (const auto& in : p) {
        if (in.op == Instr::Op::DecJz && in.target <= p.size()) target[in.target] = true;
    }
    std::ostringstream out;
    for (std::size_t pc = 0; pc <= p.size(); ++pc) {
        if (target[pc]) out << 'L' << pc << ":\n";
        if (pc == p.size()) break;
        const Instr& in = p[pc];
        switch (in.op) {
            case Instr::Op::Halt: out << "  HALT\n"; break;
            case Instr::Op::Inc: out << "  INC r" << in.r << '\n'; break;
            case Instr::Op::Query: out << "  QUERY r" << in.r << '\n'; break;
            case Instr::Op::DecJz:
                out << "  DECJZ r" << in.r << ", ";
                if (in.target <= p.size()) {
                    out << 'L' << in.target << '\n';
                } else {
                    out << in.target << '\n';
                }
                break;
        }
    }
    return out.str();
}

OracleCapExceeded::OracleCapExceeded(std::uint64_t value, std::uint64_t cap)
    : std::runtime_error("oracle query " + std::to_string(value) + " at or beyond the table cap " +
                         std::to_string(cap)),
      value_(value) {}

OracleTable OracleTable::of(const std::vector<std::uint64_t>& members, std::uint64_t cap) {
    OracleTable t(cap);
    for (auto v : members) t.insert(v);
    return t;
}

OracleTable OracleTable::of(const std::function<bool(std::uint64_t)>& pred, std::uint64_t cap) {
    OracleTable t(cap);
    for (std::uint64_t v = 0; v < cap; ++v) {
        if (pred(v)) t.bits_[v] = true;
    }
    return t;
}

bool OracleTable::contains(std::uint64_t v) const {
    if (v >= bits_.size()) throw OracleCapExceeded(v, bits_.size());
    return bits_[v];
}

void OracleTable::insert(std::uint64_t v) {
    if (v >= bits_.size()) throw OracleCapExceeded(v, bits_.size());
    bits_[v] = true;
}

std::vector<std::uint64_t> OracleTable::members() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t v = 0; v < bits_.size(); ++v) {
        if (bits_[v]) out.push_back(v);
    }
    return out;
}

std::uint64_t BoundedRun::need() const { return std::max(steps, max_query.value_or(0)) + 1; }

std::string format(const BoundedRun& r) {
    switch (r.outcome) {
        case BoundedRun::Outcome::Halted:
            return "Halted(" + std::to_string(r.output) + ", " + std::to_string(r.steps) + ", " +
                   std::to_string(r.max_query.value_or(0)) + ")";
        case BoundedRun::Outcome::Running: return "Running";
        case BoundedRun::Outcome::Flagged: return "Flagged";
    }
    return "?";
}

CompiledProgram::CompiledProgram(const Program& p) {
    std::unordered_map<std::uint64_t, std::uint32_t> dense;
    auto idx = [&](std::uint64_t r) {
        auto [it, fresh] = dense.emplace(r, static_cast<std::uint32_t>(dense.size()));
        return it->second;
    };
    for (const auto& in : p) {
        Op op{in.op, 0, in.target};
        if (in.op != Instr::Op::Halt) op.r = idx(in.r);
        ops_.push_back(op);
    }
    nregs_ = static_cast<std::uint32_t>(dense.size());
    if (auto it = dense.find(1); it != dense.end()) in_reg_ = it->second;
    if (auto it = dense.find(0); it != dense.end()) out_reg_ = it->second;
}

BoundedRun CompiledProgram::exec(const OracleFn& oracle, std::uint64_t x, std::uint64_t m, bool trace,
                                 bool detect_loops) const {
    BoundedRun run;
    run.input = x;
    std::vector<std::uint64_t> regs(nregs_, 0);
    if (in_reg_) regs[*in_reg_] = x;
    std::uint64_t pc = 0;
    // Brent-style marks for cycle detection. A return to the marked pc is a
    // cycle that repeats forever when no register shrank and no register that
    // grew was found zero or queried on the way.
    std::uint64_t mark_pc = 0, next_mark = 1;
    std::vector<std::uint64_t> mark_regs;
    std::vector<bool> zero_seen;
    bool marked = false;
    auto cycles = [&] {
        for (std::size_t i = 0; i < regs.size(); ++i) {
            if (regs[i] < mark_regs[i]) return false;
            if (regs[i] > mark_regs[i] && zero_seen[i]) return false;
        }
        return true;
    };
    for (;;) {
        if (run.steps + 1 >= m) return run;
        if (detect_loops) {
            if (marked && pc == mark_pc && cycles()) return run;
            if (run.steps == next_mark) {
                mark_pc = pc;
                mark_regs = regs;
                zero_seen.assign(regs.size(), false);
                marked = true;
                next_mark *= 2;
            }
        }
        ++run.steps;
        if (pc >= ops_.size() || ops_[pc].op == Instr::Op::Halt) {
            if (trace) run.trace.push_back({pc, std::nullopt, false});
            run.outcome = BoundedRun::Outcome::Halted;
            run.output = out_reg_ ? regs[*out_reg_] : 0;
            return run;
        }
        const Op& op = ops_[pc];
        std::uint64_t& r = regs[op.r];
        switch (op.op) {
            case Instr::Op::Inc:
                if (trace) run.trace.push_back({pc, std::nullopt, false});
                ++r;
                ++pc;
                break;
            case Instr::Op::DecJz:
                if (trace) run.trace.push_back({pc, std::nullopt, false});
                if (r == 0) {
                    if (detect_loops && marked) zero_seen[op.r] = true;
                    pc = op.target;
                } else {
                    --r;
                    ++pc;
                }
                break;
            case Instr::Op::Query: {
                std::uint64_t v = r;
                if (v >= m) return run;
                bool ans = oracle(v);
                if (detect_loops && marked) zero_seen[op.r] = true;
                if (trace) run.trace.push_back({pc, v, ans});
                run.max_query = std::max(run.max_query.value_or(0), v);
                r = ans ? 1 : 0;
                ++pc;
                break;
            }
            case Instr::Op::Halt: break;
        }
    }
}

BoundedRun CompiledProgram::run(const OracleFn& oracle, std::uint64_t x, std::uint64_t m, bool trace) const {
    return exec(oracle, x, m, trace, false);
}

std::optional<std::uint64_t> CompiledProgram::need(const OracleFn& oracle, std::uint64_t x, std::uint64_t limit) const {
    if (limit == kNoLimit) throw std::invalid_argument("need limit too large");
    BoundedRun r = exec(oracle, x, limit + 1, false, true);
    if (!r.halted()) return std::nullopt;
    return r.need();
}

BoundedRun run_program(const Program& p, const OracleFn& oracle, std::uint64_t x, std::uint64_t m, bool trace) {
    return CompiledProgram(p).run(oracle, x, m, trace);
}

BoundedRun run_bounded(const Nat& e, const OracleTable& oracle, std::uint64_t x, std::uint64_t m, bool trace) {
    return run_program(decode_program(e), [&](std::uint64_t v) { return oracle.contains(v); }, x, m, trace);
}

JumpLab::JumpLab(std::uint64_t code_cap, std::shared_ptr<const NormContext> norms)
    : cap_(code_cap), norms_(norms ? std::move(norms) : std::make_shared<NormContext>()) {}

Nat JumpLab::ordinal_code(const Ordinal& g) const { return cantor_pair(structural_code(g), norms_->norm(g)); }

Nat JumpLab::pair(const Ordinal& g, const Nat& z) const { return cantor_pair(ordinal_code(g), z); }

std::optional<Ordinal> JumpLab::decode_structural(const Nat& c) {
    if (c == 0) return Ordinal();
    auto [node, rest] = cantor_unpair(c - 1);
    auto [subarg, m1] = cantor_unpair(node);
    auto [sc, ac] = cantor_unpair(subarg);
    auto sub = decode_structural(sc);
    if (!sub) return std::nullopt;
    auto arg = decode_structural(ac);
    if (!arg) return std::nullopt;
    auto tail = decode_structural(rest);
    if (!tail) return std::nullopt;
    Ordinal g = add(mul_nat(Ordinal::veblen(*sub, *arg), m1 + 1), *tail);
    if (structural_code(g) != c) return std::nullopt;
    return g;
}

std::optional<Ordinal> JumpLab::decode_ordinal(const Nat& c) {
    if (auto it = ord_memo_.find(c); it != ord_memo_.end()) return it->second;
    auto [sc, n] = cantor_unpair(c);
    std::optional<Ordinal> g = decode_structural(sc);
    if (g && (!norms_->ceiling().above(*g) || Nat(norms_->norm(*g)) != n)) g.reset();
    ord_memo_.emplace(c, g);
    return g;
}

std::optional<CodedPair> JumpLab::unpair(std::uint64_t y) {
    if (auto it = pair_memo_.find(y); it != pair_memo_.end()) return it->second;
    auto [c, z] = cantor_unpair(Nat(y));
    std::optional<CodedPair> out;
    if (auto g = decode_ordinal(c)) out = CodedPair{*g, static_cast<std::uint64_t>(z)};
    pair_memo_.emplace(y, out);
    return out;
}

const std::vector<Ordinal>& JumpLab::codebook() {
    if (!codebook_) {
        std::vector<Ordinal> out;
        for (std::uint64_t c = 0; c * (c + 1) / 2 < cap_; ++c) {
            if (auto g = decode_ordinal(c)) out.push_back(*g);
        }
        std::sort(out.begin(), out.end());
        codebook_ = std::move(out);
    }
    return *codebook_;
}

const CompiledProgram& JumpLab::compiled(const Nat& e) {
    auto it = programs_.find(e);
    if (it == programs_.end()) {
        it = programs_.emplace(e, std::make_unique<CompiledProgram>(decode_program(e))).first;
    }
    return *it->second;
}

JumpTable JumpTable::restrict(const Ordinal& g, JumpLab& lab) const {
    JumpTable out{g, fuel, OracleTable(table.cap()), undecided, dropped};
    for (auto y : table.members()) {
        auto u = lab.unpair(y);
        if (u && u->gamma <= g) out.table.insert(y);
    }
    return out;
}

JumpTable tj_approx(const FinSet& x_window, const Ordinal& a, std::uint64_t fuel, JumpLab& lab) {
    if (fuel > lab.code_cap()) throw std::invalid_argument("fuel exceeds the code cap");
    if (!lab.norms().ceiling().above(a)) throw std::invalid_argument("level is not below the working ceiling");
    JumpTable jt{a, fuel, OracleTable(lab.code_cap()), 0, 0};
    for (auto x : x_window) {
        Nat y = lab.pair(Ordinal(), x);
        if (y < lab.code_cap()) {
            jt.table.insert(static_cast<std::uint64_t>(y));
        } else {
            ++jt.dropped;
        }
    }
    for (const auto& d : lab.codebook()) {
        if (!d.is_successor() || d > a) continue;
        OracleTable prev = jt.table;
        auto oracle = [&](std::uint64_t v) { return prev.contains(v); };
        for (std::uint64_t e = 0;; ++e) {
            Nat y = lab.pair(d, e);
            if (y >= lab.code_cap()) break;
            BoundedRun r = lab.compiled(e).run(oracle, 0, fuel);
            if (r.halted()) {
                jt.table.insert(static_cast<std::uint64_t>(y));
            } else {
                ++jt.undecided;
            }
        }
    }
    return jt;
}

const std::vector<bool>& MachineFamily::accept_set(const Ordinal& a, const FinSet& s) {
    auto key = std::make_pair(a, s.elems());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    std::vector<bool> res;
    if (!a.is_zero() && !s.empty() && is_exact(a, s)) {
        std::uint64_t n = s.min();
        res.assign(n, false);
        if (a == Ordinal::nat(1)) {
            for (std::uint64_t y = 0; y < n; ++y) {
                auto u = lab_.unpair(y);
                res[y] = u && u->gamma.is_zero() && a_.contains(u->z);
            }
        } else if (a.is_limit()) {
            FinSet rest = s.drop(1);
            const auto& sub = accept_set(fund(a, n), rest);
            for (std::uint64_t y = 0; y < n && y < sub.size(); ++y) res[y] = sub[y];
        } else {
            Ordinal b = predecessor(a);
            FinSet rest = s.drop(1);
            std::vector<bool> sub = accept_set(b, rest);
            std::optional<OracleTable> ys;
            for (std::uint64_t y = 0; y < n; ++y) {
                auto u = lab_.unpair(y);
                if (!u) continue;
                if (u->gamma <= b) {
                    res[y] = y < sub.size() && sub[y];
                } else if (u->gamma == a) {
                    if (!ys) {
                        ys.emplace(rest.max());
                        for (std::uint64_t w = 0; w < sub.size(); ++w) {
                            if (sub[w]) ys->insert(w);
                        }
                    }
                    const OracleTable& tab = *ys;
                    BoundedRun r = lab_.compiled(u->z).run([&](std::uint64_t v) { return tab.contains(v); }, 0, rest.min());
                    res[y] = r.halted();
                }
            }
        }
    }
    return memo_.emplace(std::move(key), std::move(res)).first->second;
}

bool MachineFamily::accepts(const Ordinal& a, std::uint64_t y, const FinSet& s) {
    const auto& set = accept_set(a, s);
    return y < set.size() && set[y];
}

OracleTable MachineFamily::y_set(const Ordinal& a, const FinSet& s) {
    if (s.empty()) throw std::invalid_argument("Y needs a nonempty s");
    OracleTable t(s.max() + 1);
    const auto& set = accept_set(a, s);
    for (std::uint64_t y = 0; y < set.size(); ++y) {
        if (set[y]) t.insert(y);
    }
    return t;
}

bool machine_M(const Ordinal& a, std::uint64_t y, const FinSet& s, const OracleTable& a_window, JumpLab& lab) {
    MachineFamily mf(lab, a_window);
    return mf.accepts(a, y, s);
}

unsigned jump_coloring(const Ordinal& a, const FinSet& tuple, MachineFamily& machines) {
    if (!is_exact(add(a, Ordinal::nat(3)), tuple)) {
        throw std::invalid_argument(format(tuple) + " is not " + format(add(a, Ordinal::nat(3))) + "-size");
    }
    std::uint64_t a0 = tuple[0], a1 = tuple[1], a2 = tuple[2];
    FinSet s = tuple.drop(3);
    OracleTable y = a.is_zero() ? OracleTable(a2) : machines.y_set(a, s);
    auto oracle = [&](std::uint64_t v) { return y.contains(v); };
    for (std::uint64_t e = 0; e < a0; ++e) {
        const CompiledProgram& prog = machines.lab().compiled(e);
        for (std::uint64_t x = 0; x < a0; ++x) {
            auto n = prog.need(oracle, x, a2);
            if (n && *n > a1) return 0;
        }
    }
    return 1;
}

unsigned jump_coloring_at(const Ordinal& g, const FinSet& tuple, MachineFamily& machines) {
    Ordinal a = g;
    for (int i = 0; i < 3; ++i) {
        if (!a.is_successor()) return 1;
        a = predecessor(a);
    }
    return jump_coloring(a, tuple, machines);
}

bool filter_passes(std::uint64_t v, const Ordinal& b, JumpLab& lab) {
    if (v >= lab.code_cap()) return true;
    auto u = lab.unpair(v);
    return !u || u->gamma <= b;
}

FilterProgram filter(const Program& p, const Ordinal& b, JumpLab& lab) {
    const std::uint64_t cap = lab.code_cap();
    if (cap > kMaxGuardTable) throw CodeCapExceeded("code cap " + std::to_string(cap) + " exceeds the guard table limit");
    std::uint64_t maxreg = 1;
    for (const auto& in : p) {
        if (in.op != Instr::Op::Halt) maxreg = std::max(maxreg, in.r);
    }
    if (maxreg > kNoLimit - 4) throw CodeCapExceeded("register index too large for a guard");
    const std::uint64_t T = maxreg + 1, U = maxreg + 2, Z = maxreg + 3;
    const std::uint64_t guard_len = cap + 13;

    FilterProgram fp{{}, b, {}};
    std::uint64_t cur = 0;
    for (const auto& in : p) {
        fp.start.push_back(cur);
        cur += in.op == Instr::Op::Query ? guard_len : 1;
    }
    fp.start.push_back(cur);
    const std::uint64_t len = p.size();
    auto remap = [&](std::uint64_t t) { return t <= len ? fp.start[t] : cur + (t - len); };

    std::vector<bool> blocked(cap, false);
    bool any_query = std::any_of(p.begin(), p.end(), [](const Instr& in) { return in.op == Instr::Op::Query; });
    if (any_query) {
        for (std::uint64_t v = 0; v < cap; ++v) blocked[v] = !filter_passes(v, b, lab);
    }

    auto decjz = [](std::uint64_t r, std::uint64_t t) { return Instr{Instr::Op::DecJz, r, t}; };
    auto inc = [](std::uint64_t r) { return Instr{Instr::Op::Inc, r, 0}; };
    for (std::uint64_t pc = 0; pc < len; ++pc) {
        const Instr& in = p[pc];
        if (in.op == Instr::Op::DecJz) {
            fp.program.push_back(decjz(in.r, remap(in.target)));
            continue;
        }
        if (in.op != Instr::Op::Query) {
            fp.program.push_back(in);
            continue;
        }
        const std::uint64_t s = fp.start[pc], next = fp.start[pc + 1];
        const std::uint64_t over = s + 4 + cap, good = over + 2, bad = good + 5;
        // move r into T and U
        fp.program.push_back(decjz(in.r, s + 4));
        fp.program.push_back(inc(T));
        fp.program.push_back(inc(U));
        fp.program.push_back(decjz(Z, s));
        // dispatch on the value, one step per candidate
        for (std::uint64_t k = 0; k < cap; ++k) fp.program.push_back(decjz(T, blocked[k] ? bad : good));
        // at or above the cap: clear T and forward
        fp.program.push_back(decjz(T, good));
        fp.program.push_back(decjz(Z, over));
        // forward: restore r from U and ask
        fp.program.push_back(decjz(U, good + 3));
        fp.program.push_back(inc(in.r));
        fp.program.push_back(decjz(Z, good));
        fp.program.push_back(Instr{Instr::Op::Query, in.r, 0});
        fp.program.push_back(decjz(Z, next));
        // blocked: clear U, leaving r = 0
        fp.program.push_back(decjz(U, next));
        fp.program.push_back(decjz(Z, bad));
    }
    return fp;
}

Nat filter_program(const Nat& e, const Ordinal& b, JumpLab& lab) {
    return encode_program(filter(decode_program(e), b, lab).program);
}

BoundedRun translate_run(Direction dir, const BoundedRun& run, const Program& p, const Ordinal& b, JumpLab& lab) {
    if (!run.halted()) throw std::invalid_argument("only halted runs translate");
    if (run.trace.empty()) throw std::invalid_argument("translation needs a traced run");
    std::vector<std::pair<std::uint64_t, bool>> queries;
    for (const auto& st : run.trace) {
        if (st.query) queries.emplace_back(*st.query, st.answer);
    }
    std::size_t idx = 0;
    auto mismatch = [] { return std::logic_error("run does not belong to the program"); };

    if (dir == Direction::BetaToAlpha) {
        for (std::size_t i = 0; i < run.trace.size(); ++i) {
            const auto& st = run.trace[i];
            if (st.query && st.answer && !filter_passes(*st.query, b, lab)) {
                BoundedRun flagged;
                flagged.outcome = BoundedRun::Outcome::Flagged;
                flagged.input = run.input;
                flagged.steps = i + 1;
                return flagged;
            }
        }
        FilterProgram fp = filter(p, b, lab);
        auto oracle = [&](std::uint64_t v) {
            while (idx < queries.size() && !filter_passes(queries[idx].first, b, lab)) ++idx;
            if (idx >= queries.size() || queries[idx].first != v) throw mismatch();
            return queries[idx++].second;
        };
        std::uint64_t per_step = sat_mul(8, std::max(run.max_query.value_or(0), lab.code_cap())) + 32;
        std::uint64_t bound = sat_mul(run.steps + 1, per_step);
        BoundedRun out = CompiledProgram(fp.program).run(oracle, run.input, bound, true);
        if (!out.halted()) throw mismatch();
        return out;
    }

    auto oracle = [&](std::uint64_t v) {
        if (!filter_passes(v, b, lab)) return false;
        if (idx >= queries.size() || queries[idx].first != v) throw mismatch();
        return queries[idx++].second;
    };
    BoundedRun out = CompiledProgram(p).run(oracle, run.input, run.steps + 1, true);
    if (!out.halted() || idx != queries.size()) throw mismatch();
    return out;
}

Nat n_bound(const Ordinal& a, const Ordinal& b, JumpLab& lab) {
    if (b > a) throw std::invalid_argument("n_bound needs b <= a");
    Nat cb = lab.ordinal_code(b);
    Nat out = std::max(Nat(lab.norms().norm(a)), Nat(lab.norms().norm(b)));
    for (unsigned kind = 1; kind <= 3; ++kind) out = std::max(out, cantor_pair(kind, cb));
    return out;
}

TMembership T_membership(MachineFamily& machines, const Ordinal& a, const FinSet& h, std::uint64_t y, bool cross_check) {
    Nat th = std::max(Nat(y), n_bound(a, a, machines.lab()));
    if (h.empty() || th >= h.max()) throw WindowTooSmall("window ends below the threshold " + th.str());
    const std::uint64_t low = static_cast<std::uint64_t>(th);

    NumStream s3 = scatter_n(3, a, std::make_shared<NumStream>(NumStream::of(h)));
    std::vector<std::uint64_t> above;
    try {
        for (;;) {
            std::uint64_t v = s3.next();
            if (v > low) above.push_back(v);
        }
    } catch (const FuelExhausted&) {
    }
    auto candidate = [&](std::size_t skip) -> std::optional<FinSet> {
        if (above.size() <= skip) return std::nullopt;
        NumStream xs = NumStream::of(FinSet(std::vector<std::uint64_t>(above.begin() + static_cast<std::ptrdiff_t>(skip), above.end())));
        try {
            return min_exact_prefix(a, xs);
        } catch (const FuelExhausted&) {
            return std::nullopt;
        }
    };

    TMembership out;
    auto t = candidate(0);
    if (!t) throw WindowTooSmall("no " + format(a) + "-size set inside S^3 above " + th.str());
    out.t = *t;
    out.member = machines.accepts(a, y, out.t);
    if (cross_check) {
        out.t2 = candidate(1);
        if (out.t2) {
            out.member2 = machines.accepts(a, y, *out.t2);
            out.disagreement = *out.member2 != out.member;
        }
    }
    return out;
}

CountingWitness counting_check(std::uint64_t a0, const FinSet& chain, const NeedFn& need) {
    if (chain.empty() || chain[0] != a0) throw std::invalid_argument("the chain must start at a0");
    if (a0 > (1U << 16) || chain.size() < a0 * a0 + 3) throw std::invalid_argument("the chain needs a0^2 + 3 elements");
    std::vector<std::uint64_t> needs;
    for (std::uint64_t e = 0; e < a0; ++e) {
        for (std::uint64_t x = 0; x < a0; ++x) {
            if (auto n = need(e, x)) needs.push_back(*n);
        }
    }
    std::sort(needs.begin(), needs.end());
    CountingWitness out;
    std::optional<std::size_t> first;
    for (std::size_t i = 1; i + 1 < chain.size(); ++i) {
        auto it = std::upper_bound(needs.begin(), needs.end(), chain[i]);
        bool sep = it != needs.end() && *it <= chain[i + 1];
        if (sep) {
            ++out.separated;
        } else if (!first) {
            first = i;
        }
    }
    if (!first) throw std::logic_error("every pair separated; the counting bound failed");
    out.index = *first;
    out.lo = chain[*first];
    out.hi = chain[*first + 1];
    return out;
}

CountingWitness counting_check(std::uint64_t a0, const FinSet& chain, const OracleTable& y, JumpLab& lab) {
    auto oracle = [&](std::uint64_t v) { return y.contains(v); };
    std::uint64_t limit = chain.empty() ? 0 : chain.max();
    return counting_check(a0, chain, [&](std::uint64_t e, std::uint64_t x) { return lab.compiled(e).need(oracle, x, limit); });
}

OracleTable low_y_set(const Ordinal& a, MachineFamily& machines, std::uint64_t bound) {
    OracleTable t(bound);
    if (a.is_zero()) return t;
    if (a != Ordinal::nat(1)) throw std::invalid_argument("low Y sets are s-independent only for a <= 1");
    for (std::uint64_t y = 0; y < bound; ++y) {
        auto u = machines.lab().unpair(y);
        if (u && u->gamma.is_zero() && machines.a_window().contains(u->z)) t.insert(y);
    }
    return t;
}

ColorOneWindow color_one_window(const Ordinal& a, MachineFamily& machines, std::uint64_t start, std::size_t count,
                                std::uint64_t horizon) {
    if (!(a.is_zero() || a == Ordinal::nat(1))) throw std::invalid_argument("color-one windows are built for a <= 1");
    if (start > horizon) throw std::invalid_argument("start lies beyond the horizon");
    OracleTable y = low_y_set(a, machines, horizon + 1);
    auto oracle = [&](std::uint64_t v) { return y.contains(v); };
    std::vector<std::uint64_t> h{start};
    ColorOneWindow out;
    std::uint64_t done = 0, max_need = 0;
    while (h.size() < count) {
        std::uint64_t q = h.back();
        for (std::uint64_t e = 0; e < q; ++e) {
            const CompiledProgram& prog = machines.lab().compiled(e);
            for (std::uint64_t x = e >= done ? 0 : done; x < q; ++x) {
                if (auto n = prog.need(oracle, x, horizon)) max_need = std::max(max_need, *n);
            }
        }
        done = q;
        out.max_need.push_back(max_need);
        std::uint64_t next = std::max(q + 1, max_need);
        if (next > horizon) throw FuelExhausted("color-one window passes the horizon " + std::to_string(horizon));
        h.push_back(next);
    }
    out.h = FinSet(std::move(h));
    return out;
}

}  // namespace ordlab
