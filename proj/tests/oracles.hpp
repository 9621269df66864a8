// Independent brute-force reference implementations used to pin expected
// values. Everything here is written directly from the definitions, separate
// from the library code paths under test.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "synthrisk/dataset.hpp"
#include "synthrisk/embedding.hpp"

namespace oracles {

using synthrisk::AttrKind;
using synthrisk::Dataset;
using synthrisk::EmbeddedMatrix;
using synthrisk::Schema;

inline double euclidean(const double* a, const double* b, std::size_t dims) {
    double s = 0.0;
    for (std::size_t d = 0; d < dims; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
    return std::sqrt(s);
}

// Full sort of all (distance, index) pairs per query row.
struct BruteNn {
    std::vector<std::vector<std::pair<double, std::size_t>>> rows;
};

inline BruteNn brute_nn(const EmbeddedMatrix& query, const EmbeddedMatrix& ref, std::size_t k,
                        bool exclude_self) {
    BruteNn out;
    out.rows.resize(query.rows);
    for (std::size_t q = 0; q < query.rows; ++q) {
        std::vector<std::pair<double, std::size_t>> all;
        for (std::size_t j = 0; j < ref.rows; ++j) {
            if (exclude_self && j == q) continue;
            double s = 0.0;
            for (std::size_t d = 0; d < query.dims; ++d) {
                const double diff = query.row(q)[d] - ref.row(j)[d];
                s += diff * diff;
            }
            all.emplace_back(s, j);
        }
        std::sort(all.begin(), all.end());
        all.resize(k);
        for (auto& [d, idx] : all) d = std::sqrt(d);
        out.rows[q] = std::move(all);
    }
    return out;
}

// Direct per-definition Gower dissimilarity.
inline double brute_gower(std::span<const synthrisk::Cell> a, std::span<const synthrisk::Cell> b,
                          const Schema& schema, const std::vector<double>& mins,
                          const std::vector<double>& ranges,
                          const std::vector<std::size_t>& attrs) {
    double sum = 0.0;
    for (std::size_t i : attrs) {
        if (schema.at(i).kind == AttrKind::Numeric) {
            if (ranges[i] > 0.0) sum += std::min(std::abs(a[i] - b[i]) / ranges[i], 1.0);
        } else {
            sum += a[i] == b[i] ? 0.0 : 1.0;
        }
    }
    return sum / static_cast<double>(attrs.size());
}

// LOF from the definition, O(n^2), same fixed-size-neighborhood convention.
inline std::vector<double> brute_lof(const EmbeddedMatrix& pts, std::size_t k) {
    const std::size_t n = pts.rows;
    const auto nn = brute_nn(pts, pts, k, /*exclude_self=*/true);
    std::vector<double> k_dist(n);
    for (std::size_t i = 0; i < n; ++i) k_dist[i] = nn.rows[i][k - 1].first;

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> lrd(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const auto [d, o] = nn.rows[i][j];
            sum += std::max(k_dist[o], d);
        }
        lrd[i] = sum > 0.0 ? static_cast<double>(k) / sum : inf;
    }
    std::vector<double> score(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double lo = lrd[nn.rows[i][j].second];
            if (std::isinf(lrd[i]))
                sum += std::isinf(lo) ? 1.0 : 0.0;
            else
                sum += lo / lrd[i];
        }
        score[i] = sum / static_cast<double>(k);
    }
    return score;
}

// Correct-attribution probability straight from the Iverson-bracket form,
// evaluated over all (real, synthetic) pairs.
inline double brute_tcap(const Dataset& synth, const Dataset& truth,
                         const std::vector<std::size_t>& keys, std::size_t target, double radius,
                         const std::vector<double>& mins, const std::vector<double>& maxs) {
    auto scaled = [&](const Dataset& d, std::size_t r, std::size_t a) {
        const double range = maxs[a] - mins[a];
        return range > 0.0 ? (d.at(r, a) - mins[a]) / range : 0.0;
    };
    auto match = [&](std::size_t a, std::size_t rs, std::size_t rt) {
        if (synth.schema().at(a).kind == AttrKind::Categorical)
            return synth.at(rs, a) == truth.at(rt, a);
        return std::abs(scaled(synth, rs, a) - scaled(truth, rt, a)) <= radius;
    };
    double sum = 0.0;
    std::size_t contributing = 0;
    for (std::size_t rs = 0; rs < synth.n_rows(); ++rs) {
        std::size_t num = 0, den = 0;
        for (std::size_t rt = 0; rt < truth.n_rows(); ++rt) {
            bool all = true;
            for (std::size_t a : keys)
                if (!match(a, rs, rt)) {
                    all = false;
                    break;
                }
            if (!all) continue;
            ++den;
            num += match(target, rs, rt);
        }
        if (den > 0) {
            sum += static_cast<double>(num) / static_cast<double>(den);
            ++contributing;
        }
    }
    return contributing ? sum / static_cast<double>(contributing) : 0.0;
}

// Closed-form Wilson interval, coded independently with a frozen z.
inline std::pair<double, double> brute_wilson(double successes, double n, double z) {
    const double p = successes / n;
    const double denom = 1.0 + z * z / n;
    const double center = (p + z * z / (2.0 * n)) / denom;
    const double half = (z / denom) * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
    return {center, half};
}

}  // namespace oracles
