#pragma once

#include <cstddef>
#include <vector>

#include "synthrisk/dataset.hpp"
#include "synthrisk/distance.hpp"
#include "synthrisk/embedding.hpp"

namespace synthrisk {

// Exact k-nearest-neighbor result. distances[i*k+j] is non-decreasing in j;
// ties are broken by lower reference index.
struct NeighborResult {
    std::size_t n_query = 0;
    std::size_t k = 0;
    std::vector<std::size_t> indices;   // n_query x k
    std::vector<double> distances;      // n_query x k

    std::size_t index(std::size_t q, std::size_t j) const { return indices[q * k + j]; }
    double distance(std::size_t q, std::size_t j) const { return distances[q * k + j]; }
};

// Exact brute-force Euclidean k-NN in the embedded space, parallel over query
// rows. exclude_self skips the identical row index when query and reference
// are the same matrix. Throws if k is out of range.
NeighborResult nearest_neighbors(const EmbeddedMatrix& query, const EmbeddedMatrix& reference,
                                 std::size_t k, bool exclude_self = false);

// Serial reference implementation; result is bit-identical to the parallel
// kernel and kept for the test suite and the kernel benchmark.
NeighborResult nearest_neighbors_serial(const EmbeddedMatrix& query, const EmbeddedMatrix& reference,
                                        std::size_t k, bool exclude_self = false);

// Exact k-NN under the Gower distance restricted to `attrs`, parallel over
// query rows. Query and reference must share a schema.
NeighborResult gower_neighbors(const Dataset& query, const Dataset& reference,
                               const GowerRanges& ranges, std::span<const std::size_t> attrs,
                               std::size_t k);

NeighborResult gower_neighbors_serial(const Dataset& query, const Dataset& reference,
                                      const GowerRanges& ranges, std::span<const std::size_t> attrs,
                                      std::size_t k);

}  // namespace synthrisk
