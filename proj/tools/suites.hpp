#pragma once

// Property suites shared by the `suite run` subcommand and the acceptance
// binary. Every suite is deterministic given its options.

#include "ordlab/homog.hpp"
#include "ordlab/peeling.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ordlab::suites {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Knobs a suite may read. Unset fields take the suite's default.
struct Options {
    std::uint64_t seed = 1;
    std::optional<Ordinal> max;
    std::optional<std::uint64_t> n;
    std::optional<std::size_t> count;
    std::optional<std::uint64_t> fuel;
};

struct Failure {
    std::string check;
    // Offending case in the textual grammars.
    std::string counterexample;
};

struct Report {
    std::string suite;
    Json params = Json::object();
    std::uint64_t cases = 0;
    std::vector<Failure> failures;
    // Violations beyond the stored failures are only counted.
    std::uint64_t violations = 0;
    // Suite-specific measurements.
    Json stats = Json::object();
    double millis = 0;

    bool passed() const { return violations == 0; }
};

// Schema {v, suite, params, cases, failures[], violations, stats, millis}.
Json to_json(const Report& r, bool with_timing = true);

struct SuiteInfo {
    std::string name;
    std::string summary;
    Report (*run)(const Options&);
};

const std::vector<SuiteInfo>& registry();
const SuiteInfo* find_suite(std::string_view name);
// Runs the suite and fills in the name and wall time. FuelExhausted
// propagates.
Report run_suite(const SuiteInfo& info, const Options& opts);

// Ordinals below max (and below omega^omega unless max is larger): a small
// polynomial grid plus seeded random Cantor normal forms.
std::vector<Ordinal> corpus_below(const Ordinal& max, std::size_t count, std::uint64_t seed);

// The alpha = 1 well-ordering pipeline over the reversed naturals with
// sigma(i) = phi_1(i): build M, search a color-0 set in the first `window`
// elements of M-, and extract the descending sequence.
struct WopRun {
    MTable table;
    FinSet window;
    SearchResult search;
    std::vector<XElem> extracted;
};
WopRun wop_pipeline(std::size_t window, std::uint64_t fuel, const SearchBudget& budget = {});

}  // namespace ordlab::suites
