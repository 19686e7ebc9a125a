#pragma once

#include "ordlab/largeness.hpp"

#include <functional>
#include <optional>
#include <string>

namespace ordlab {

// A coloring of the alpha-size sets (Plain) or of the (1 uplus alpha)-size
// sets (Uplus: an alpha-size block followed by one more element).
struct ColoringHandle {
    enum class Shape { Plain, Uplus };

    Ordinal alpha;
    Shape shape = Shape::Plain;
    unsigned palette = 2;
    std::function<unsigned(const FinSet&)> eval;

    bool in_domain(const FinSet& s) const;
    // Evaluates and checks domain membership and the palette bound.
    unsigned operator()(const FinSet& s) const;
};

std::string format(ColoringHandle::Shape shape);

// Visits the domain sets inside ground in lexicographic order, restricted to
// those with maximum `last` when given. Stops early when visit returns false;
// returns false in that case.
bool visit_domain(const ColoringHandle& c, const FinSet& ground, std::optional<std::uint64_t> last,
                  const std::function<bool(const FinSet&)>& visit);

struct HomogeneityReport {
    bool homogeneous = true;
    std::optional<unsigned> color;
    std::uint64_t tested = 0;
    // True when every domain set inside the ground set was tested.
    bool complete = true;
    std::optional<FinSet> witness_a;
    std::optional<FinSet> witness_b;
};

// Tests up to `cap` domain sets inside h for a shared color.
HomogeneityReport verify_homogeneous(const ColoringHandle& c, const FinSet& h, std::uint64_t cap);

}  // namespace ordlab
