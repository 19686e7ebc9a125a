#include "ordlab/coloring.hpp"

#include <stdexcept>

namespace ordlab {

bool ColoringHandle::in_domain(const FinSet& s) const {
    if (shape == Shape::Plain) return is_exact(alpha, s);
    return !s.empty() && is_exact(alpha, s.star());
}

unsigned ColoringHandle::operator()(const FinSet& s) const {
    if (!in_domain(s)) throw std::invalid_argument(format(s) + " is outside the coloring's domain");
    unsigned col = eval(s);
    if (col >= palette) throw std::logic_error("coloring returned a color outside its palette");
    return col;
}

std::string format(ColoringHandle::Shape shape) { return shape == ColoringHandle::Shape::Plain ? "plain" : "uplus"; }

namespace {

struct DomainWalker {
    const ColoringHandle& c;
    const FinSet& ground;
    std::optional<std::uint64_t> last;
    const std::function<bool(const FinSet&)>& visit;
    std::vector<std::uint64_t> cur;

    bool emit() { return visit(FinSet(cur)); }

    // The alpha-size block is complete; add the trailing element for Uplus.
    bool block_done(std::size_t next) {
        if (c.shape == ColoringHandle::Shape::Plain) {
            if (last && (cur.empty() || cur.back() != *last)) return true;
            return emit();
        }
        for (std::size_t j = next; j < ground.size(); ++j) {
            if (last && ground[j] != *last) continue;
            cur.push_back(ground[j]);
            bool go = emit();
            cur.pop_back();
            if (!go) return false;
        }
        return true;
    }

    bool dfs(const Ordinal& x, std::size_t from) {
        for (std::size_t i = from; i < ground.size(); ++i) {
            std::uint64_t v = ground[i];
            if (last && v > *last) break;
            if (last && c.shape == ColoringHandle::Shape::Plain && v != *last) {
                // v cannot be the maximum; skip branches that would end before last
                Ordinal y = fund(x, v);
                if (y.is_zero()) continue;
                cur.push_back(v);
                bool go = dfs(y, i + 1);
                cur.pop_back();
                if (!go) return false;
                continue;
            }
            Ordinal y = fund(x, v);
            cur.push_back(v);
            bool go = y.is_zero() ? block_done(i + 1) : dfs(y, i + 1);
            cur.pop_back();
            if (!go) return false;
        }
        return true;
    }

    bool run() {
        if (c.alpha.is_zero()) return block_done(0);
        return dfs(c.alpha, 0);
    }
};

}  // namespace

bool visit_domain(const ColoringHandle& c, const FinSet& ground, std::optional<std::uint64_t> last,
                  const std::function<bool(const FinSet&)>& visit) {
    DomainWalker w{c, ground, last, visit, {}};
    return w.run();
}

HomogeneityReport verify_homogeneous(const ColoringHandle& c, const FinSet& h, std::uint64_t cap) {
    HomogeneityReport rep;
    std::optional<FinSet> first;
    rep.complete = visit_domain(c, h, std::nullopt, [&](const FinSet& s) {
        if (rep.tested >= cap) return false;
        ++rep.tested;
        unsigned col = c(s);
        if (!rep.color) {
            rep.color = col;
            first = s;
        } else if (*rep.color != col) {
            rep.homogeneous = false;
            rep.witness_a = first;
            rep.witness_b = s;
            return false;
        }
        return true;
    });
    if (!rep.homogeneous) rep.complete = false;
    return rep;
}

}  // namespace ordlab
