#pragma once

#include <cstddef>
#include <vector>

#include "synthrisk/embedding.hpp"

namespace synthrisk {

enum class BandwidthRule {
    Silverman,  // per-dimension sigma * (4/(d+2))^(1/(d+4)) * n^(-1/(d+4))
    Fixed,      // caller-supplied uniform bandwidth
};

// Product-Gaussian kernel density estimate over an embedded sample.
// Zero-variance dimensions are dropped (with a warning under Silverman).
class DensityModel {
public:
    // Silverman bandwidths fitted from the sample.
    static DensityModel fit(const EmbeddedMatrix& sample);
    // Uniform fixed bandwidth across all dimensions (none dropped).
    static DensityModel fit_fixed(const EmbeddedMatrix& sample, double bandwidth);

    double log_density(const double* point) const;

    // Batch evaluation, parallel over points; serial variant is bit-identical
    // and kept for tests and the kernel benchmark.
    std::vector<double> log_density_batch(const EmbeddedMatrix& points) const;
    std::vector<double> log_density_batch_serial(const EmbeddedMatrix& points) const;

    const std::vector<double>& bandwidths() const { return bandwidth_; }
    std::size_t sample_size() const { return n_; }

private:
    std::size_t n_ = 0;
    std::size_t dims_ = 0;                 // dimensions kept
    std::vector<std::size_t> kept_dims_;   // indices into the source embedding
    std::vector<double> sample_;           // n_ x dims_, kept dimensions only
    std::vector<double> bandwidth_;        // per kept dimension
    double log_norm_ = 0.0;                // -log n - sum_j log(h_j sqrt(2 pi))
};

}  // namespace synthrisk
