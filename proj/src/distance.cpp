#include "synthrisk/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace synthrisk {

GowerRanges GowerRanges::fit(const Dataset& data) {
    const auto& schema = data.schema();
    GowerRanges g;
    g.min.assign(schema.size(), 0.0);
    g.range.assign(schema.size(), 0.0);
    for (std::size_t a = 0; a < schema.size(); ++a) {
        if (schema.at(a).kind != AttrKind::Numeric) continue;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t r = 0; r < data.n_rows(); ++r) {
            lo = std::min(lo, data.at(r, a));
            hi = std::max(hi, data.at(r, a));
        }
        if (data.n_rows() == 0) lo = hi = 0.0;
        g.min[a] = lo;
        g.range[a] = hi - lo;
    }
    return g;
}

GowerRanges GowerRanges::fit(const Dataset& a, const Dataset& b) {
    GowerRanges ga = fit(a);
    GowerRanges gb = fit(b);
    GowerRanges g;
    g.min.resize(ga.min.size());
    g.range.resize(ga.range.size());
    for (std::size_t i = 0; i < ga.min.size(); ++i) {
        const double lo = std::min(ga.min[i], gb.min[i]);
        const double hi = std::max(ga.min[i] + ga.range[i], gb.min[i] + gb.range[i]);
        g.min[i] = lo;
        g.range[i] = hi - lo;
    }
    return g;
}

double gower_distance(std::span<const Cell> a, std::span<const Cell> b,
                      const Schema& schema, const GowerRanges& ranges,
                      std::span<const std::size_t> attrs) {
    if (attrs.empty()) throw std::invalid_argument("gower: empty attribute set");
    double sum = 0.0;
    for (std::size_t i : attrs) {
        if (schema.at(i).kind == AttrKind::Numeric) {
            const double range = ranges.range.at(i);
            if (range > 0.0) sum += std::min(std::abs(a[i] - b[i]) / range, 1.0);
            // no variation: the attribute contributes 0
        } else {
            sum += (a[i] == b[i]) ? 0.0 : 1.0;
        }
    }
    return sum / static_cast<double>(attrs.size());
}

double gower_distance(std::span<const Cell> a, std::span<const Cell> b,
                      const Schema& schema, const GowerRanges& ranges) {
    std::vector<std::size_t> all(schema.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return gower_distance(a, b, schema, ranges, all);
}

}  // namespace synthrisk
