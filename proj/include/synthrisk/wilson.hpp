#pragma once

#include <cstddef>

namespace synthrisk {

// Attack success rate with its Wilson score interval half-width.
struct RiskEstimate {
    double rate = 0.0;        // interval center
    double half_width = 0.0;  // half the interval length
    double confidence = 0.95;
    std::size_t n = 0;        // trials
    std::size_t successes = 0;

    double lower() const { return rate - half_width < 0.0 ? 0.0 : rate - half_width; }
    double upper() const { return rate + half_width > 1.0 ? 1.0 : rate + half_width; }
};

// Wilson score interval for a Bernoulli success probability.
RiskEstimate wilson_interval(std::size_t successes, std::size_t n, double confidence = 0.95);

// Inverse standard normal CDF (Acklam's rational approximation plus one
// Halley refinement; |error| < 1e-12 over (0,1)).
double normal_quantile(double p);

}  // namespace synthrisk
