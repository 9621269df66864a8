#include "synthrisk/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace synthrisk {
namespace {

using Cand = std::pair<double, std::size_t>;  // (distance, reference index)

// Keeps the k lexicographically smallest (distance, index) pairs seen so far.
struct TopK {
    std::size_t k;
    std::vector<Cand> heap;  // max-heap: worst candidate on top

    explicit TopK(std::size_t k_) : k(k_) { heap.reserve(k_); }

    void offer(double d, std::size_t idx) {
        if (heap.size() < k) {
            heap.emplace_back(d, idx);
            std::push_heap(heap.begin(), heap.end());
        } else if (Cand{d, idx} < heap.front()) {
            std::pop_heap(heap.begin(), heap.end());
            heap.back() = {d, idx};
            std::push_heap(heap.begin(), heap.end());
        }
    }

    std::vector<Cand> sorted() {
        std::sort(heap.begin(), heap.end());
        return heap;
    }
};

double sq_euclidean(const double* a, const double* b, std::size_t dims) {
    double s = 0.0;
    for (std::size_t d = 0; d < dims; ++d) {
        const double diff = a[d] - b[d];
        s += diff * diff;
    }
    return s;
}

template <typename DistFn>
NeighborResult knn_impl(std::size_t n_query, std::size_t n_ref, std::size_t k, bool exclude_self,
                        bool parallel, DistFn&& dist) {
    if (k < 1) throw std::invalid_argument("nearest_neighbors: k must be >= 1");
    const std::size_t avail = exclude_self ? (n_ref > 0 ? n_ref - 1 : 0) : n_ref;
    if (k > avail) throw std::invalid_argument("nearest_neighbors: k exceeds reference rows");

    NeighborResult res;
    res.n_query = n_query;
    res.k = k;
    res.indices.assign(n_query * k, 0);
    res.distances.assign(n_query * k, 0.0);

    auto run_query = [&](std::size_t q) {
        TopK top(k);
        for (std::size_t j = 0; j < n_ref; ++j) {
            if (exclude_self && j == q) continue;
            top.offer(dist(q, j), j);
        }
        auto best = top.sorted();
        for (std::size_t j = 0; j < k; ++j) {
            res.indices[q * k + j] = best[j].second;
            res.distances[q * k + j] = best[j].first;
        }
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (long q = 0; q < static_cast<long>(n_query); ++q) run_query(static_cast<std::size_t>(q));
    } else {
        for (std::size_t q = 0; q < n_query; ++q) run_query(q);
    }
    return res;
}

NeighborResult euclidean_knn(const EmbeddedMatrix& query, const EmbeddedMatrix& reference,
                             std::size_t k, bool exclude_self, bool parallel) {
    if (query.dims != reference.dims)
        throw std::invalid_argument("nearest_neighbors: dimension mismatch");
    const std::size_t dims = query.dims;
    auto res = knn_impl(query.rows, reference.rows, k, exclude_self, parallel,
                        [&](std::size_t q, std::size_t j) {
                            return sq_euclidean(query.row(q), reference.row(j), dims);
                        });
    for (double& d : res.distances) d = std::sqrt(d);
    return res;
}

NeighborResult gower_knn(const Dataset& query, const Dataset& reference, const GowerRanges& ranges,
                         std::span<const std::size_t> attrs, std::size_t k, bool parallel) {
    if (!(query.schema() == reference.schema()))
        throw std::invalid_argument("gower_neighbors: schema mismatch");
    const Schema& schema = query.schema();
    return knn_impl(query.n_rows(), reference.n_rows(), k, /*exclude_self=*/false, parallel,
                    [&](std::size_t q, std::size_t j) {
                        return gower_distance(query.row(q), reference.row(j), schema, ranges, attrs);
                    });
}

}  // namespace

NeighborResult nearest_neighbors(const EmbeddedMatrix& query, const EmbeddedMatrix& reference,
                                 std::size_t k, bool exclude_self) {
    return euclidean_knn(query, reference, k, exclude_self, /*parallel=*/true);
}

NeighborResult nearest_neighbors_serial(const EmbeddedMatrix& query, const EmbeddedMatrix& reference,
                                        std::size_t k, bool exclude_self) {
    return euclidean_knn(query, reference, k, exclude_self, /*parallel=*/false);
}

NeighborResult gower_neighbors(const Dataset& query, const Dataset& reference,
                               const GowerRanges& ranges, std::span<const std::size_t> attrs,
                               std::size_t k) {
    return gower_knn(query, reference, ranges, attrs, k, /*parallel=*/true);
}

NeighborResult gower_neighbors_serial(const Dataset& query, const Dataset& reference,
                                      const GowerRanges& ranges, std::span<const std::size_t> attrs,
                                      std::size_t k) {
    return gower_knn(query, reference, ranges, attrs, k, /*parallel=*/false);
}

}  // namespace synthrisk
