#include "synthrisk/lof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "synthrisk/neighbors.hpp"

namespace synthrisk {

// Classic LOF with fixed-size neighborhoods: N_k(p) is exactly the k nearest
// rows under the (distance, index) tie-break, k-distance is the distance to
// the k-th of them, reach-dist(p,o) = max(k-dist(o), d(p,o)) and
// lrd(p) = 1 / mean reach-dist. A zero mean reach-dist (duplicate cluster)
// gives lrd = inf; ratios inf/inf count as 1 and finite/inf as 0.
std::vector<double> lof_scores(const EmbeddedMatrix& points, std::size_t k_lof) {
    const std::size_t n = points.rows;
    if (k_lof < 1) throw std::invalid_argument("lof: k must be >= 1");
    if (k_lof >= n) throw std::invalid_argument("lof: k must be < number of rows");

    const auto nn = nearest_neighbors(points, points, k_lof, /*exclude_self=*/true);

    std::vector<double> k_dist(n);
    for (std::size_t i = 0; i < n; ++i) k_dist[i] = nn.distance(i, k_lof - 1);

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> lrd(n);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < k_lof; ++j) {
            const std::size_t o = nn.index(i, j);
            sum += std::max(k_dist[o], nn.distance(i, j));
        }
        lrd[i] = sum > 0.0 ? static_cast<double>(k_lof) / sum : inf;
    }

    std::vector<double> score(n);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < k_lof; ++j) {
            const double lrd_o = lrd[nn.index(i, j)];
            if (std::isinf(lrd[i]))
                sum += std::isinf(lrd_o) ? 1.0 : 0.0;
            else
                sum += lrd_o / lrd[i];
        }
        score[i] = sum / static_cast<double>(k_lof);
    }
    return score;
}

std::pair<Dataset, Dataset> remove_outliers_lof(const Dataset& data, double fraction,
                                                std::size_t k_lof) {
    if (fraction < 0.0 || fraction > 0.5)
        throw std::invalid_argument("remove_outliers_lof: fraction outside [0, 0.5]");
    const std::size_t n = data.n_rows();
    const auto n_remove = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
    if (n_remove == 0) return {data, data.select_rows({})};

    const auto scores = lof_scores(embed(data), k_lof);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });

    std::vector<std::size_t> removed(order.begin(), order.begin() + n_remove);
    std::sort(removed.begin(), removed.end());
    std::vector<std::size_t> kept;
    kept.reserve(n - n_remove);
    std::size_t r = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (r < removed.size() && removed[r] == i)
            ++r;
        else
            kept.push_back(i);
    }
    return {data.select_rows(kept), data.select_rows(removed)};
}

}  // namespace synthrisk
