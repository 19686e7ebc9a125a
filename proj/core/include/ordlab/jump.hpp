#pragma once

#include "ordlab/fundseq.hpp"
#include "ordlab/largeness.hpp"
#include "ordlab/ordinal.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ordlab {

// Register machine. Input arrives in r1, output is read from r0, all other
// registers start at 0. Jumping to or falling past the end halts.
struct Instr {
    enum class Op { Halt, Inc, DecJz, Query };
    Op op = Op::Halt;
    std::uint64_t r = 0;
    // DecJz only: jump here when r is 0, otherwise decrement and fall through.
    std::uint64_t target = 0;

    friend bool operator==(const Instr&, const Instr&) = default;
};

using Program = std::vector<Instr>;

// Bit string behind a leading 1: per instruction a 2-bit opcode followed by
// Elias-gamma fields r+1 (and target+1 for DecJz).
Nat encode_program(const Program& p);
// Total: anything that does not parse decodes to the one-instruction HALT.
Program decode_program(const Nat& e);

// One instruction per line, labels as `name:`, comments after '#'.
// Throws ParseError.
Program assemble(std::string_view text);
std::string disassemble(const Program& p);

class OracleCapExceeded : public std::runtime_error {
public:
    OracleCapExceeded(std::uint64_t value, std::uint64_t cap);
    std::uint64_t value() const { return value_; }

private:
    std::uint64_t value_;
};

// Finite characteristic table on [0, cap). Looking up cap or beyond throws.
class OracleTable {
public:
    explicit OracleTable(std::uint64_t cap = 0) : bits_(cap, false) {}
    static OracleTable of(const std::vector<std::uint64_t>& members, std::uint64_t cap);
    static OracleTable of(const std::function<bool(std::uint64_t)>& pred, std::uint64_t cap);

    std::uint64_t cap() const { return bits_.size(); }
    bool contains(std::uint64_t v) const;
    void insert(std::uint64_t v);
    std::vector<std::uint64_t> members() const;

    friend bool operator==(const OracleTable&, const OracleTable&) = default;

private:
    std::vector<bool> bits_;
};

using OracleFn = std::function<bool(std::uint64_t)>;

struct TraceStep {
    std::uint64_t pc = 0;
    std::optional<std::uint64_t> query;
    bool answer = false;

    friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct BoundedRun {
    // Flagged: a translation met an inconsistent query and stopped.
    enum class Outcome { Halted, Running, Flagged };
    Outcome outcome = Outcome::Running;
    std::uint64_t input = 0;
    std::uint64_t output = 0;
    std::uint64_t steps = 0;
    std::optional<std::uint64_t> max_query;
    std::vector<TraceStep> trace;

    bool halted() const { return outcome == Outcome::Halted; }
    // Least bound at which this halted run is still Halted.
    std::uint64_t need() const;
};

std::string format(const BoundedRun& r);

// Program with registers renumbered densely, ready to run.
class CompiledProgram {
public:
    explicit CompiledProgram(const Program& p);

    // Halted only when steps < m and every query < m. A query at or above m
    // ends the run as Running before the oracle is asked.
    BoundedRun run(const OracleFn& oracle, std::uint64_t x, std::uint64_t m, bool trace = false) const;
    std::size_t size() const { return ops_.size(); }
    // The least m with a Halted run, if it is at most limit. Revisited
    // machine states end the search early.
    std::optional<std::uint64_t> need(const OracleFn& oracle, std::uint64_t x, std::uint64_t limit) const;

private:
    BoundedRun exec(const OracleFn& oracle, std::uint64_t x, std::uint64_t m, bool trace, bool detect_loops) const;

    struct Op {
        Instr::Op op;
        std::uint32_t r;
        std::uint64_t target;
    };
    std::vector<Op> ops_;
    std::uint32_t nregs_ = 0;
    std::optional<std::uint32_t> in_reg_, out_reg_;
};

BoundedRun run_program(const Program& p, const OracleFn& oracle, std::uint64_t x, std::uint64_t m, bool trace = false);
BoundedRun run_bounded(const Nat& e, const OracleTable& oracle, std::uint64_t x, std::uint64_t m, bool trace = false);

struct CodedPair {
    Ordinal gamma;
    std::uint64_t z;
};

// Codes, pair decoding and program caches shared by the jump-lab operations.
// The code of an ordinal is pair(structural code, norm), which is injective
// and dominates the norm. Not thread-safe.
class JumpLab {
public:
    explicit JumpLab(std::uint64_t code_cap = 4096, std::shared_ptr<const NormContext> norms = nullptr);

    std::uint64_t code_cap() const { return cap_; }
    const NormContext& norms() const { return *norms_; }

    Nat ordinal_code(const Ordinal& g) const;
    std::optional<Ordinal> decode_ordinal(const Nat& c);
    // <gamma, z>.
    Nat pair(const Ordinal& g, const Nat& z) const;
    std::optional<CodedPair> unpair(std::uint64_t y);
    // Ordinals gamma with <gamma, 0> below the code cap, ascending.
    const std::vector<Ordinal>& codebook();

    const CompiledProgram& compiled(const Nat& e);

private:
    std::optional<Ordinal> decode_structural(const Nat& c);

    std::uint64_t cap_;
    std::shared_ptr<const NormContext> norms_;
    std::map<Nat, std::optional<Ordinal>> ord_memo_;
    std::unordered_map<std::uint64_t, std::optional<CodedPair>> pair_memo_;
    std::optional<std::vector<Ordinal>> codebook_;
    std::map<Nat, std::unique_ptr<CompiledProgram>> programs_;
};

// Approximation of the a-th jump of a window of X: pairs below the code cap.
struct JumpTable {
    Ordinal level;
    std::uint64_t fuel = 0;
    OracleTable table;
    // Halting tests still Running at the fuel.
    std::uint64_t undecided = 0;
    // Window elements x whose pair <0, x> is not below the cap.
    std::uint64_t dropped = 0;

    bool contains(std::uint64_t y) const { return table.contains(y); }
    // Entries <delta, z> with delta <= g.
    JumpTable restrict(const Ordinal& g, JumpLab& lab) const;
};

// Requires fuel <= the code cap, so every query stays inside the table.
JumpTable tj_approx(const FinSet& x_window, const Ordinal& a, std::uint64_t fuel, JumpLab& lab);

// The machines M_a over a fixed window of A. Accept sets are memoized per
// (a, s); a query on A at or beyond its cap throws.
class MachineFamily {
public:
    MachineFamily(JumpLab& lab, OracleTable a_window) : lab_(lab), a_(std::move(a_window)) {}

    bool accepts(const Ordinal& a, std::uint64_t y, const FinSet& s);
    // M_a(y, s) for every y < min s; empty for a malformed s.
    const std::vector<bool>& accept_set(const Ordinal& a, const FinSet& s);
    // {y <= max s : M_a(y, s) accepts}, with cap max s + 1.
    OracleTable y_set(const Ordinal& a, const FinSet& s);

    JumpLab& lab() { return lab_; }
    const OracleTable& a_window() const { return a_; }

private:
    JumpLab& lab_;
    OracleTable a_;
    std::map<std::pair<Ordinal, std::vector<std::uint64_t>>, std::vector<bool>> memo_;
};

bool machine_M(const Ordinal& a, std::uint64_t y, const FinSet& s, const OracleTable& a_window, JumpLab& lab);

// c_{a+3} on <a0, a1, a2> followed by an a-size s. Throws
// std::invalid_argument when the tuple is not (a+3)-size.
unsigned jump_coloring(const Ordinal& a, const FinSet& tuple, MachineFamily& machines);
// The coloring with index g: c_{a+3} when g = a + 3, constantly 1 otherwise.
unsigned jump_coloring_at(const Ordinal& g, const FinSet& tuple, MachineFamily& machines);

class CodeCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// f_b applied to a program, with the map from old to new program counters.
struct FilterProgram {
    Program program;
    Ordinal bound;
    // start[pc] is where instruction pc of the source begins.
    std::vector<std::uint64_t> start;
};

// Every QUERY is replaced by a guard that answers 0 for values below the code
// cap that decode to <gamma, z> with gamma > b; other values reach the oracle.
// Throws CodeCapExceeded when the guard table would exceed kMaxGuardTable.
inline constexpr std::uint64_t kMaxGuardTable = 1 << 16;
FilterProgram filter(const Program& p, const Ordinal& b, JumpLab& lab);
Nat filter_program(const Nat& e, const Ordinal& b, JumpLab& lab);
// Whether the filter for b forwards a query for v to the oracle.
bool filter_passes(std::uint64_t v, const Ordinal& b, JumpLab& lab);

enum class Direction {
    // Run of p on Y restricted to b, to a run of filter(p, b) on Y.
    BetaToAlpha,
    // Run of filter(p, b) on Y, to a run of p on Y restricted to b.
    AlphaToBeta,
};

// Oracle-free: answers are read off the trace of run, which must be Halted
// and traced. BetaToAlpha returns a Flagged run when a query that the filter
// would block was answered 1.
BoundedRun translate_run(Direction dir, const BoundedRun& run, const Program& p, const Ordinal& b, JumpLab& lab);

// max(|a|, |b|, and the codes of f_b, f_{a->b} and f_{b->a}); a transformer
// is coded as pair(kind, code of b) with kinds 1, 2 and 3.
Nat n_bound(const Ordinal& a, const Ordinal& b, JumpLab& lab);

class WindowTooSmall : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TMembership {
    bool member = false;
    FinSet t;
    // Cross-check mode: the next candidate and its verdict, when the window
    // holds one.
    std::optional<FinSet> t2;
    std::optional<bool> member2;
    bool disagreement = false;
};

// Evaluates M_a(y, t) on the first a-size t inside S^3(a, H) above
// max(y, n_bound(a, a)). Throws WindowTooSmall.
TMembership T_membership(MachineFamily& machines, const Ordinal& a, const FinSet& h, std::uint64_t y,
                         bool cross_check = false);

struct CountingWitness {
    // Pair (chain[index], chain[index + 1]), index >= 1.
    std::size_t index = 0;
    std::uint64_t lo = 0, hi = 0;
    // Consecutive pairs separated by some (e, x) with e, x < a0.
    std::size_t separated = 0;
};

// need(e, x): least bound at which {e}(x) halts, if it does within the chain.
using NeedFn = std::function<std::optional<std::uint64_t>(std::uint64_t e, std::uint64_t x)>;

// chain = a0 < a1 < ... with at least a0^2 + 3 elements. Returns the first
// pair (a_i, a_{i+1}), i >= 1, that no (e, x) halts strictly between.
CountingWitness counting_check(std::uint64_t a0, const FinSet& chain, const NeedFn& need);
CountingWitness counting_check(std::uint64_t a0, const FinSet& chain, const OracleTable& y, JumpLab& lab);

// A window on which c_{a+3} is constantly 1, for a in {0, 1}, where Y_a^s
// below a2 does not depend on s. Built by taking each next element at least
// the largest halting need among e, x below the previous one, with needs
// looked up to horizon.
struct ColorOneWindow {
    FinSet h;
    // Largest finite need seen for e, x < h[i].
    std::vector<std::uint64_t> max_need;
};

ColorOneWindow color_one_window(const Ordinal& a, MachineFamily& machines, std::uint64_t start, std::size_t count,
                                std::uint64_t horizon);

// The oracle Y_a^s restricted below bound for a in {0, 1}.
OracleTable low_y_set(const Ordinal& a, MachineFamily& machines, std::uint64_t bound);

}  // namespace ordlab
