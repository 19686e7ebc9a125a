#pragma once

#include "ordlab/fundseq.hpp"
#include "ordlab/ordinal.hpp"

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ordlab {

// Strictly increasing finite sequence of naturals.
class FinSet {
public:
    FinSet() = default;
    FinSet(std::initializer_list<std::uint64_t> xs);
    explicit FinSet(std::vector<std::uint64_t> xs);

    const std::vector<std::uint64_t>& elems() const { return xs_; }
    std::size_t size() const { return xs_.size(); }
    bool empty() const { return xs_.empty(); }
    std::uint64_t min() const;
    std::uint64_t max() const;
    std::uint64_t operator[](std::size_t i) const { return xs_[i]; }
    auto begin() const { return xs_.begin(); }
    auto end() const { return xs_.end(); }

    // s minus its maximum.
    FinSet star() const;
    FinSet prefix(std::size_t k) const;
    FinSet drop(std::size_t k) const;
    bool is_prefix_of(const FinSet& t) const;
    bool is_subset_of(const FinSet& t) const;
    // Elements strictly above v.
    FinSet above(std::uint64_t v) const;
    // s followed by t; requires max s < min t.
    FinSet concat(const FinSet& t) const;
    // Sum of 2^x; compared as a binary number.
    Nat code() const;

    friend bool operator==(const FinSet&, const FinSet&) = default;

private:
    std::vector<std::uint64_t> xs_;
};

// Order of FinSet::code without building the bigint.
bool code_less(const FinSet& a, const FinSet& b);

std::string format(const FinSet& s);
// "1,2,3" or "{1,2,3}"; throws ParseError.
FinSet parse_finset(std::string_view text);

bool is_large(const Ordinal& a, const FinSet& s);
bool is_small(const Ordinal& a, const FinSet& s);
bool is_exact(const Ordinal& a, const FinSet& s);

// Pull-based strictly increasing stream with a budget on pulls.
class NumStream {
public:
    using Gen = std::function<std::optional<std::uint64_t>()>;

    NumStream(Gen gen, std::uint64_t fuel);

    static NumStream arithmetic(std::uint64_t start, std::uint64_t step, std::uint64_t fuel = kDefaultFuel);
    // Exhausting the list is reported like running out of fuel.
    static NumStream of(const FinSet& s);

    std::uint64_t next();
    std::uint64_t peek();
    std::uint64_t pulls() const { return pulls_; }
    // X minus its first element.
    NumStream& skip(std::size_t k);
    std::vector<std::uint64_t> take(std::size_t k);

private:
    Gen gen_;
    std::uint64_t fuel_;
    std::uint64_t pulls_ = 0;
    std::optional<std::uint64_t> buffered_;
    std::optional<std::uint64_t> last_;
};

// The shortest a-large prefix of xs (consumed from the stream).
FinSet min_exact_prefix(const Ordinal& a, NumStream& xs);

// All a-size subsets of ground, ordered by code.
std::vector<FinSet> enumerate_exact(const Ordinal& a, const FinSet& ground);

struct UplusSplit {
    FinSet sb;
    FinSet sa;
    bool sa_exact = false;
};

// s = s_b followed by s_a with s_b b-size and s_a a-large.
std::optional<UplusSplit> uplus_decompose(const Ordinal& a, const Ordinal& b, const FinSet& s);

// S(a, X): first element, then repeatedly skip three elements and a minimal
// a-size block of consecutive elements, and emit the next one.
NumStream scatter(const Ordinal& a, std::shared_ptr<NumStream> xs, std::uint64_t fuel = kDefaultFuel);
NumStream scatter_n(unsigned k, const Ordinal& a, std::shared_ptr<NumStream> xs, std::uint64_t fuel = kDefaultFuel);

}  // namespace ordlab
