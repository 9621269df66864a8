#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "synthrisk/schema.hpp"

namespace synthrisk {

// One table cell. Numeric attributes store the value itself; categorical
// attributes store the vocabulary index (exactly representable in a double).
using Cell = double;

// Row-major table of records over a Schema. Immutable in spirit: all library
// operations take const references and return new datasets.
class Dataset {
public:
    Dataset() = default;
    Dataset(Schema schema, std::vector<Cell> values);

    const Schema& schema() const { return schema_; }
    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_attrs() const { return schema_.size(); }
    bool empty() const { return n_rows_ == 0; }

    std::span<const Cell> row(std::size_t r) const {
        return {values_.data() + r * schema_.size(), schema_.size()};
    }
    Cell at(std::size_t r, std::size_t a) const { return values_[r * schema_.size() + a]; }

    // New dataset holding the given rows (in the given order).
    Dataset select_rows(const std::vector<std::size_t>& rows) const;
    // New dataset restricted to the given attributes.
    Dataset select_attrs(const std::vector<std::size_t>& attrs) const;
    // Concatenation; schemas must match.
    static Dataset concat(const Dataset& a, const Dataset& b);

    void append_row(std::span<const Cell> row);

    // Checks the row invariants (lengths, categorical indices, finiteness).
    void validate() const;

    bool rows_equal(std::size_t r, const Dataset& other, std::size_t r_other) const;

private:
    Schema schema_;
    std::vector<Cell> values_;
    std::size_t n_rows_ = 0;
};

// Quasi-identifier description for attribute-inference attacks: the adversary
// knows `quasi_identifiers` for every record of `records`, and wants
// `target_attribute`.
struct AuxInfo {
    std::vector<std::size_t> quasi_identifiers;
    Dataset records;  // restricted to quasi_identifiers, in target row order
    std::size_t target_attribute = 0;
};

// Seeded three-way row split. Sizes are floor(f * n); leftover rows are
// dropped. Throws on non-positive fractions or sum > 1.
std::tuple<Dataset, Dataset, Dataset> split(const Dataset& data,
                                            double f_train, double f_control, double f_release,
                                            std::uint64_t seed);

}  // namespace synthrisk
