#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "synthrisk/dataset.hpp"
#include "synthrisk/embedding.hpp"

namespace synthrisk {

// Local outlier factor (reachability-distance formulation) of every row of
// the embedded matrix, with k_lof neighbors. Throws if k_lof >= n.
std::vector<double> lof_scores(const EmbeddedMatrix& points, std::size_t k_lof);

// Removes the ceil(fraction * n) rows with the highest LOF score on the
// standard embedding; ties broken by lower row index. fraction in [0, 0.5].
std::pair<Dataset, Dataset> remove_outliers_lof(const Dataset& data, double fraction,
                                                std::size_t k_lof = 20);

}  // namespace synthrisk
