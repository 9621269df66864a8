#include "synthrisk/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "synthrisk/rng.hpp"

namespace synthrisk {

Dataset::Dataset(Schema schema, std::vector<Cell> values)
    : schema_(std::move(schema)), values_(std::move(values)) {
    if (schema_.size() == 0) {
        if (!values_.empty()) throw std::invalid_argument("dataset: values without attributes");
        n_rows_ = 0;
        return;
    }
    if (values_.size() % schema_.size() != 0)
        throw std::invalid_argument("dataset: cell count not a multiple of attribute count");
    n_rows_ = values_.size() / schema_.size();
    validate();
}

void Dataset::validate() const {
    const std::size_t m = schema_.size();
    for (std::size_t r = 0; r < n_rows_; ++r) {
        for (std::size_t a = 0; a < m; ++a) {
            const Cell v = values_[r * m + a];
            if (!std::isfinite(v)) throw std::invalid_argument("dataset: non-finite cell");
            if (schema_.at(a).kind == AttrKind::Categorical) {
                const auto n_levels = schema_.at(a).vocabulary.size();
                if (v < 0 || v != std::floor(v) || static_cast<std::size_t>(v) >= n_levels)
                    throw std::invalid_argument("dataset: categorical index out of vocabulary");
            }
        }
    }
}

Dataset Dataset::select_rows(const std::vector<std::size_t>& rows) const {
    const std::size_t m = schema_.size();
    std::vector<Cell> out;
    out.reserve(rows.size() * m);
    for (std::size_t r : rows) {
        if (r >= n_rows_) throw std::out_of_range("dataset: row index out of range");
        out.insert(out.end(), values_.begin() + r * m, values_.begin() + (r + 1) * m);
    }
    return Dataset(schema_, std::move(out));
}

Dataset Dataset::select_attrs(const std::vector<std::size_t>& attrs) const {
    std::vector<Attribute> sub;
    sub.reserve(attrs.size());
    for (std::size_t a : attrs) sub.push_back(schema_.at(a));
    std::vector<Cell> out;
    out.reserve(n_rows_ * attrs.size());
    for (std::size_t r = 0; r < n_rows_; ++r)
        for (std::size_t a : attrs) out.push_back(at(r, a));
    return Dataset(Schema(std::move(sub)), std::move(out));
}

Dataset Dataset::concat(const Dataset& a, const Dataset& b) {
    if (!(a.schema() == b.schema())) throw std::invalid_argument("concat: schema mismatch");
    std::vector<Cell> out = a.values_;
    out.insert(out.end(), b.values_.begin(), b.values_.end());
    return Dataset(a.schema_, std::move(out));
}

void Dataset::append_row(std::span<const Cell> row) {
    if (row.size() != schema_.size()) throw std::invalid_argument("append_row: wrong arity");
    values_.insert(values_.end(), row.begin(), row.end());
    ++n_rows_;
}

bool Dataset::rows_equal(std::size_t r, const Dataset& other, std::size_t r_other) const {
    const std::size_t m = schema_.size();
    for (std::size_t a = 0; a < m; ++a)
        if (at(r, a) != other.at(r_other, a)) return false;
    return true;
}

std::tuple<Dataset, Dataset, Dataset> split(const Dataset& data,
                                            double f_train, double f_control, double f_release,
                                            std::uint64_t seed) {
    if (f_train <= 0 || f_control <= 0 || f_release <= 0)
        throw std::invalid_argument("split: fractions must be positive");
    if (f_train + f_control + f_release > 1.0 + 1e-9)
        throw std::invalid_argument("split: fractions sum > 1");

    const std::size_t n = data.n_rows();
    const auto n1 = static_cast<std::size_t>(std::floor(f_train * n));
    const auto n2 = static_cast<std::size_t>(std::floor(f_control * n));
    const auto n3 = static_cast<std::size_t>(std::floor(f_release * n));

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto rng = make_rng(derive_seed(seed, "split"));
    std::shuffle(idx.begin(), idx.end(), rng);

    auto take = [&](std::size_t from, std::size_t count) {
        std::vector<std::size_t> part(idx.begin() + from, idx.begin() + from + count);
        std::sort(part.begin(), part.end());  // keep original row order within each part
        return data.select_rows(part);
    };
    return {take(0, n1), take(n1, n2), take(n1 + n2, n3)};
}

}  // namespace synthrisk
