#include "ordlab/largeness.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace ordlab {

FinSet::FinSet(std::initializer_list<std::uint64_t> xs) : FinSet(std::vector<std::uint64_t>(xs)) {}

FinSet::FinSet(std::vector<std::uint64_t> xs) : xs_(std::move(xs)) {
    for (std::size_t i = 1; i < xs_.size(); ++i) {
        if (xs_[i - 1] >= xs_[i]) throw std::invalid_argument("FinSet elements must strictly increase");
    }
}

std::uint64_t FinSet::min() const {
    if (xs_.empty()) throw std::domain_error("min of empty set");
    return xs_.front();
}

std::uint64_t FinSet::max() const {
    if (xs_.empty()) throw std::domain_error("max of empty set");
    return xs_.back();
}

FinSet FinSet::star() const {
    if (xs_.empty()) return *this;
    return prefix(xs_.size() - 1);
}

FinSet FinSet::prefix(std::size_t k) const {
    FinSet out;
    out.xs_.assign(xs_.begin(), xs_.begin() + static_cast<std::ptrdiff_t>(std::min(k, xs_.size())));
    return out;
}

FinSet FinSet::drop(std::size_t k) const {
    FinSet out;
    if (k < xs_.size()) out.xs_.assign(xs_.begin() + static_cast<std::ptrdiff_t>(k), xs_.end());
    return out;
}

bool FinSet::is_prefix_of(const FinSet& t) const {
    return xs_.size() <= t.xs_.size() && std::equal(xs_.begin(), xs_.end(), t.xs_.begin());
}

bool FinSet::is_subset_of(const FinSet& t) const {
    return std::includes(t.xs_.begin(), t.xs_.end(), xs_.begin(), xs_.end());
}

FinSet FinSet::above(std::uint64_t v) const {
    FinSet out;
    out.xs_.assign(std::upper_bound(xs_.begin(), xs_.end(), v), xs_.end());
    return out;
}

FinSet FinSet::concat(const FinSet& t) const {
    if (!xs_.empty() && !t.xs_.empty() && xs_.back() >= t.xs_.front()) {
        throw std::invalid_argument("concat needs max s < min t");
    }
    FinSet out = *this;
    out.xs_.insert(out.xs_.end(), t.xs_.begin(), t.xs_.end());
    return out;
}

Nat FinSet::code() const {
    Nat c = 0;
    for (auto x : xs_) boost::multiprecision::bit_set(c, static_cast<unsigned>(x));
    return c;
}

bool code_less(const FinSet& a, const FinSet& b) {
    auto i = a.elems().rbegin();
    auto j = b.elems().rbegin();
    for (; i != a.elems().rend() && j != b.elems().rend(); ++i, ++j) {
        if (*i != *j) return *i < *j;
    }
    return j != b.elems().rend();
}

std::string format(const FinSet& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + "}";
}

FinSet parse_finset(std::string_view text) {
    std::vector<std::uint64_t> xs;
    std::size_t i = 0;
    auto ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    ws();
    bool braced = i < text.size() && text[i] == '{';
    if (braced) ++i;
    ws();
    bool expect_value = false;
    while (i < text.size() && text[i] != '}') {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) throw ParseError("expected a natural number", i);
        std::uint64_t v = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            v = v * 10 + static_cast<std::uint64_t>(text[i] - '0');
            ++i;
        }
        if (!xs.empty() && xs.back() >= v) throw ParseError("set elements must strictly increase", i);
        xs.push_back(v);
        ws();
        expect_value = false;
        if (i < text.size() && text[i] == ',') {
            ++i;
            ws();
            expect_value = true;
        }
    }
    if (expect_value) throw ParseError("trailing comma", i);
    if (braced) {
        if (i >= text.size()) throw ParseError("expected '}'", i);
        ++i;
    }
    ws();
    if (i != text.size()) throw ParseError("unexpected character", i);
    return FinSet(std::move(xs));
}

bool is_large(const Ordinal& a, const FinSet& s) { return fund_set(a, s.elems()).is_zero(); }

bool is_small(const Ordinal& a, const FinSet& s) { return !is_large(a, s); }

bool is_exact(const Ordinal& a, const FinSet& s) {
    if (s.empty()) return a.is_zero();
    return is_large(a, s) && is_small(a, s.star());
}

NumStream::NumStream(Gen gen, std::uint64_t fuel) : gen_(std::move(gen)), fuel_(fuel) {}

NumStream NumStream::arithmetic(std::uint64_t start, std::uint64_t step, std::uint64_t fuel) {
    if (step == 0) throw std::invalid_argument("arithmetic stream needs a positive step");
    auto cur = std::make_shared<std::uint64_t>(start);
    return NumStream(
        [cur, step]() -> std::optional<std::uint64_t> {
            std::uint64_t v = *cur;
            *cur += step;
            return v;
        },
        fuel);
}

NumStream NumStream::of(const FinSet& s) {
    auto items = std::make_shared<std::vector<std::uint64_t>>(s.elems());
    auto pos = std::make_shared<std::size_t>(0);
    return NumStream(
        [items, pos]() -> std::optional<std::uint64_t> {
            if (*pos >= items->size()) return std::nullopt;
            return (*items)[(*pos)++];
        },
        s.size());
}

std::uint64_t NumStream::peek() {
    if (!buffered_) {
        if (pulls_ >= fuel_) throw FuelExhausted("stream fuel exhausted");
        auto v = gen_();
        if (!v) throw FuelExhausted("stream ended");
        if (last_ && *v <= *last_) throw std::logic_error("stream is not strictly increasing");
        ++pulls_;
        last_ = v;
        buffered_ = v;
    }
    return *buffered_;
}

std::uint64_t NumStream::next() {
    std::uint64_t v = peek();
    buffered_.reset();
    return v;
}

NumStream& NumStream::skip(std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) next();
    return *this;
}

std::vector<std::uint64_t> NumStream::take(std::size_t k) {
    std::vector<std::uint64_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(next());
    return out;
}

FinSet min_exact_prefix(const Ordinal& a, NumStream& xs) {
    std::vector<std::uint64_t> out;
    Ordinal x = a;
    while (!x.is_zero()) {
        std::uint64_t v = xs.next();
        out.push_back(v);
        x = fund(x, v);
    }
    return FinSet(std::move(out));
}

namespace {

void exact_dfs(const Ordinal& x, const FinSet& ground, std::size_t from, std::vector<std::uint64_t>& cur,
               std::vector<FinSet>& out) {
    for (std::size_t i = from; i < ground.size(); ++i) {
        Ordinal y = fund(x, ground[i]);
        cur.push_back(ground[i]);
        if (y.is_zero()) {
            out.emplace_back(cur);
        } else {
            exact_dfs(y, ground, i + 1, cur, out);
        }
        cur.pop_back();
    }
}

}  // namespace

std::vector<FinSet> enumerate_exact(const Ordinal& a, const FinSet& ground) {
    std::vector<FinSet> out;
    if (a.is_zero()) {
        out.emplace_back();
        return out;
    }
    std::vector<std::uint64_t> cur;
    exact_dfs(a, ground, 0, cur, out);
    std::sort(out.begin(), out.end(), code_less);
    return out;
}

std::optional<UplusSplit> uplus_decompose(const Ordinal& a, const Ordinal& b, const FinSet& s) {
    std::size_t k = 0;
    Ordinal x = b;
    while (!x.is_zero()) {
        if (k >= s.size()) return std::nullopt;
        x = fund(x, s[k++]);
    }
    UplusSplit out{s.prefix(k), s.drop(k), false};
    if (!is_large(a, out.sa)) return std::nullopt;
    out.sa_exact = is_exact(a, out.sa);
    return out;
}

NumStream scatter(const Ordinal& a, std::shared_ptr<NumStream> xs, std::uint64_t fuel) {
    auto started = std::make_shared<bool>(false);
    return NumStream(
        [a, xs, started]() -> std::optional<std::uint64_t> {
            if (*started) {
                xs->skip(3);
                (void)min_exact_prefix(a, *xs);
            }
            *started = true;
            return xs->next();
        },
        fuel);
}

NumStream scatter_n(unsigned k, const Ordinal& a, std::shared_ptr<NumStream> xs, std::uint64_t fuel) {
    for (unsigned i = 0; i < k; ++i) xs = std::make_shared<NumStream>(scatter(a, xs, fuel));
    return NumStream([xs]() -> std::optional<std::uint64_t> { return xs->next(); }, fuel);
}

}  // namespace ordlab
