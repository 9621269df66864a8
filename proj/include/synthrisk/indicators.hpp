#pragma once

#include <cstdint>
#include <vector>

#include "synthrisk/dataset.hpp"
#include "synthrisk/embedding.hpp"

namespace synthrisk {

struct IndicatorConfig {
    double alpha_percent = 2.0;  // percentile used for the real-to-real threshold
    std::size_t k = 1;           // neighborhood size; k=1 is the plain closest-record case
    std::uint64_t seed = 0;      // seeds the holdout split of the real data
};

struct IndicatorScore {
    double value = 0.0;          // normalized score; 0 ~ matched distributions, 1 ~ full leak
    std::size_t raw_numerator = 0;
    double raw_denominator = 0.0;
    double threshold = 0.0;      // the alpha-th percentile of the real-to-real distances
};

// Share of synthetic rows exactly matching some real row, |D ∩ D̂| / |D̂|.
// Equality is exact on stored cell values. Throws on empty synth.
IndicatorScore ims(const Dataset& real, const Dataset& synth);

// Distance of each synthetic row to its nearest real row, in the embedded
// space (synthetic rows embedded with the real data's scaling params).
std::vector<double> srd_distribution(const Dataset& synth, const Dataset& real);

// Holdout distances within the real data: seeded split into equal halves,
// each first-half row's distance to its nearest second-half row.
struct RrdResult {
    std::vector<double> values;
    // alpha-th percentile, linear interpolation between order statistics
    double percentile(double alpha_percent) const;
};
RrdResult rrd_distribution(const Dataset& real, std::uint64_t seed);

// Percentile-thresholded closest-record indicator: the share of synthetic
// rows closer to the real data than the alpha-th percentile of the holdout
// distances, rescaled so matched distributions score ~0 and a full leak 1.
IndicatorScore dcr(const Dataset& synth, const Dataset& real, const IndicatorConfig& cfg);

// Same pipeline with each nearest-record distance replaced by the mean
// distance over the k nearest neighbors. k=1 reproduces dcr exactly.
IndicatorScore knn_indicator(const Dataset& synth, const Dataset& real, const IndicatorConfig& cfg);

// Linear-interpolation percentile of an unsorted sample (alpha in [0,100]).
double percentile_linear(std::vector<double> values, double alpha_percent);

}  // namespace synthrisk
