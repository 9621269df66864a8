#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "synthrisk/dataset.hpp"

namespace synthrisk {

// Min/max used to scale each numeric attribute (indexed by attribute; entries
// for categorical attributes are ignored). Serializable so synthetic and
// control data can reuse the training data's scaling across runs.
struct ScalingParams {
    std::vector<double> mins;
    std::vector<double> maxs;

    static ScalingParams fit(const Dataset& data);
    std::string to_json() const;
    static ScalingParams from_json(const std::string& text);
};

struct ColumnRef {
    std::size_t attr;
    int level;  // -1 for the scaled numeric column, else the one-hot level
};

// Numeric matrix form of a dataset: numeric attributes min-max scaled to
// [0,1]; each categorical level becomes a one-hot column scaled by 1/sqrt(2)
// so that a single category mismatch contributes squared distance 1.
struct EmbeddedMatrix {
    std::size_t rows = 0;
    std::size_t dims = 0;
    std::vector<double> data;  // row-major
    std::vector<ColumnRef> column_map;
    ScalingParams params;

    const double* row(std::size_t r) const { return data.data() + r * dims; }
};

// Out-of-range numeric values under supplied params are clamped to [0,1];
// a categorical index outside the vocabulary is an error.
EmbeddedMatrix embed(const Dataset& data, const ScalingParams& params);
EmbeddedMatrix embed(const Dataset& data);  // params fitted from `data`

}  // namespace synthrisk
