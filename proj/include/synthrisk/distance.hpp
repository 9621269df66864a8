#pragma once

#include <span>
#include <vector>

#include "synthrisk/dataset.hpp"

namespace synthrisk {

// Per-numeric-attribute ranges used by the Gower distance. Indexed by
// attribute; categorical entries ignored.
struct GowerRanges {
    std::vector<double> min;
    std::vector<double> range;  // max - min; an attribute with range <= 0 contributes 0

    static GowerRanges fit(const Dataset& data);
    static GowerRanges fit(const Dataset& a, const Dataset& b);  // over the union
};

// Mean per-attribute dissimilarity over `attrs`: numeric |x-y|/range clamped
// to [0,1], categorical 0/1 mismatch. Result lies in [0,1].
double gower_distance(std::span<const Cell> a, std::span<const Cell> b,
                      const Schema& schema, const GowerRanges& ranges,
                      std::span<const std::size_t> attrs);

// All attributes.
double gower_distance(std::span<const Cell> a, std::span<const Cell> b,
                      const Schema& schema, const GowerRanges& ranges);

}  // namespace synthrisk
