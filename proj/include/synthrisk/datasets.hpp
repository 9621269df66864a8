#pragma once

#include <cstdint>

#include "synthrisk/dataset.hpp"

namespace synthrisk {

// Seeded synthetic census-style benchmark table: 5 categorical attributes
// (workclass, education, marital_status, sex, income) and 3 numeric ones
// (age, hours_per_week, capital_gain), with realistic cross-attribute
// correlations and a heavy-tailed capital_gain column that produces genuine
// outliers.
Dataset make_mini_adult(std::size_t n_rows, std::uint64_t seed);

}  // namespace synthrisk
