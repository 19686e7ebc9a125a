#pragma once

#include "ordlab/coloring.hpp"
#include "ordlab/fundseq.hpp"
#include "ordlab/largeness.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ordlab {

// Length of the shortest a-large prefix of s, if s is a-large.
std::optional<std::size_t> large_prefix_len(const Ordinal& a, const FinSet& s);

class NormGuardViolated : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A derived coloring together with the map that turns its homogeneous sets
// into homogeneous sets of the source coloring.
struct Reduction {
    ColoringHandle coloring;
    // Ground elements must exceed this.
    std::uint64_t floor = 0;
    std::function<FinSet(const FinSet&)> transfer;
};

// c colors omega^b-size sets; the result colors omega^a-size sets (b <= a) by
// the color of their omega^b-size initial segment. Sets with min at most
// norm(omega^b) throw NormGuardViolated. The transfer is the identity.
Reduction reduce_dimension(const ColoringHandle& c, const Ordinal& a, const NormContext& norms);

// c colors lead(alpha)-size sets; the result colors alpha-size sets t by
// c(t minus its alpha'-size prefix), where alpha = lead(alpha) + alpha'. The
// transfer drops the alpha'-size prefix. Identity for indecomposable alpha.
Reduction reduce_to_lead(const ColoringHandle& c, const Ordinal& alpha);

struct BuildBudget {
    // Nodes per finite search and per color.
    std::uint64_t nodes = 20000;
    std::uint64_t checks_per_step = 1'000'000;
    // Evaluations of the input coloring over the whole build.
    std::uint64_t evaluations = 20'000'000;
    std::uint64_t stages = 100000;
    // (1 uplus alpha')-size candidates enumerated in the decomposable case.
    std::uint64_t candidates = 200000;
};

struct StageRecord {
    std::size_t index = 0;
    // {h_i} in the indecomposable case, the chosen (1 uplus alpha')-size set
    // in the decomposable case.
    FinSet h;
    // Stand-in for H_i.
    FinSet window;
    // f(h_i); empty when H_i holds no set of the sub-domain.
    std::optional<unsigned> color;
    Ordinal sub_alpha;
    // Jump level the construction would use for H_i: sub_alpha + 1.
    Ordinal jump_level;
    // How H_i was found: finite-search, staged or scheduled.
    std::string method;
    std::uint64_t evaluations = 0;
    bool truncated = false;
    // The sub-solve ran out of eligible sets before its window was used up.
    bool starved = false;

    friend bool operator==(const StageRecord&, const StageRecord&) = default;
};

struct BuilderState {
    // Starved: the window ran out of eligible sets before it was used up;
    // the prefix is still sound.
    enum class Status { Ok, BudgetExhausted, Starved };

    Ordinal alpha;
    ColoringHandle::Shape shape = ColoringHandle::Shape::Plain;
    unsigned palette = 2;
    // finite-search, staged or scheduled.
    std::string method;
    std::vector<StageRecord> stages;
    // Z; in the decomposable case the longest prefix covered by the h_i.
    FinSet z;
    // Elements of Z dropped by the coverage check.
    std::size_t uncovered = 0;
    // Decomposable case: window elements left when no eligible set remained.
    // They join the prefix.
    FinSet leftover;
    FinSet prefix;
    std::optional<unsigned> color;
    Status status = Status::Ok;
    // Stages leading to the failure, outermost first.
    std::vector<std::size_t> failure_path;
    std::string failure;
    std::uint64_t evaluations = 0;
    bool truncated = false;

    friend bool operator==(const BuilderState&, const BuilderState&) = default;
};

std::string format(BuilderState::Status s);

// Dispatches on alpha: finite search for finite alpha, the staged
// construction for indecomposable alpha, scheduling for decomposable alpha.
BuilderState solve(const ColoringHandle& c, const FinSet& window, const BuildBudget& budget = {});
// Exhaustive budgeted search for the largest homogeneous subset.
BuilderState solve_finite(const ColoringHandle& c, const FinSet& window, const BuildBudget& budget = {});
// Stages h_i = min H_{i-1}, H_i homogeneous for t -> c(<h_i> t) on the
// alpha[h_i] (or 1 uplus alpha[h_i]) sized sets, then pigeonhole on Z.
BuilderState solve_indecomposable(const ColoringHandle& c, const FinSet& window, const BuildBudget& budget = {});
// solve_indecomposable for colorings of the (1 uplus omega)-size sets.
BuilderState solve_uplus(const ColoringHandle& d, const FinSet& window, const BuildBudget& budget = {});
// Stages pick the least eligible (1 uplus alpha')-size set h_i, then H_i is
// homogeneous for t -> c(h_i t) on the lead(alpha)[max h_i] sized sets above
// max h_i; the induced coloring of Z is solved recursively.
BuilderState solve_decomposable(const ColoringHandle& c, const FinSet& window, const BuildBudget& budget = {});

// t -> c(h t) on the sets of shape c.shape and size sub_alpha.
ColoringHandle stage_coloring(const ColoringHandle& c, const FinSet& h, const Ordinal& sub_alpha);

// Re-checks the stage requirements of the construction that produced state.
// Returns one line per violation.
std::vector<std::string> check_requirements(const ColoringHandle& c, const BuilderState& state,
                                            std::uint64_t cap = 1'000'000);

// Homogeneity check that enumerates domain sets with enumerate_exact,
// independently of the walker the builder uses.
HomogeneityReport audit_prefix(const ColoringHandle& c, const FinSet& h, std::uint64_t cap = 1'000'000);

}  // namespace ordlab
