#include "synthrisk/kde.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace synthrisk {

DensityModel DensityModel::fit(const EmbeddedMatrix& sample) {
    if (sample.rows == 0) throw std::invalid_argument("kde: empty sample");
    DensityModel m;
    m.n_ = sample.rows;

    const double n = static_cast<double>(sample.rows);
    std::vector<double> sigma(sample.dims, 0.0);
    for (std::size_t d = 0; d < sample.dims; ++d) {
        double mean = 0.0;
        for (std::size_t i = 0; i < sample.rows; ++i) mean += sample.row(i)[d];
        mean /= n;
        double var = 0.0;
        for (std::size_t i = 0; i < sample.rows; ++i) {
            const double c = sample.row(i)[d] - mean;
            var += c * c;
        }
        sigma[d] = sample.rows > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    }

    for (std::size_t d = 0; d < sample.dims; ++d)
        if (sigma[d] > 0.0) m.kept_dims_.push_back(d);
    if (m.kept_dims_.size() < sample.dims)
        std::cerr << "warning: kde dropped " << (sample.dims - m.kept_dims_.size())
                  << " zero-variance dimension(s)\n";
    if (m.kept_dims_.empty()) throw std::invalid_argument("kde: all dimensions degenerate");

    m.dims_ = m.kept_dims_.size();
    const double d_eff = static_cast<double>(m.dims_);
    const double factor =
        std::pow(4.0 / (d_eff + 2.0), 1.0 / (d_eff + 4.0)) * std::pow(n, -1.0 / (d_eff + 4.0));

    m.bandwidth_.resize(m.dims_);
    for (std::size_t j = 0; j < m.dims_; ++j) m.bandwidth_[j] = sigma[m.kept_dims_[j]] * factor;

    m.sample_.resize(m.n_ * m.dims_);
    for (std::size_t i = 0; i < m.n_; ++i)
        for (std::size_t j = 0; j < m.dims_; ++j)
            m.sample_[i * m.dims_ + j] = sample.row(i)[m.kept_dims_[j]];

    m.log_norm_ = -std::log(n);
    for (double h : m.bandwidth_) m.log_norm_ -= std::log(h * std::sqrt(2.0 * M_PI));
    return m;
}

DensityModel DensityModel::fit_fixed(const EmbeddedMatrix& sample, double bandwidth) {
    if (sample.rows == 0) throw std::invalid_argument("kde: empty sample");
    if (bandwidth <= 0.0) throw std::invalid_argument("kde: bandwidth must be > 0");
    DensityModel m;
    m.n_ = sample.rows;
    m.dims_ = sample.dims;
    m.kept_dims_.resize(m.dims_);
    for (std::size_t j = 0; j < m.dims_; ++j) m.kept_dims_[j] = j;
    m.bandwidth_.assign(m.dims_, bandwidth);
    m.sample_ = sample.data;
    m.log_norm_ = -std::log(static_cast<double>(m.n_)) -
                  static_cast<double>(m.dims_) * std::log(bandwidth * std::sqrt(2.0 * M_PI));
    return m;
}

double DensityModel::log_density(const double* point) const {
    // logsumexp over kernels of -||x - s_i||^2_h / 2
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> expo(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        const double* s = sample_.data() + i * dims_;
        double q = 0.0;
        for (std::size_t j = 0; j < dims_; ++j) {
            const double z = (point[kept_dims_[j]] - s[j]) / bandwidth_[j];
            q += z * z;
        }
        expo[i] = -0.5 * q;
        best = std::max(best, expo[i]);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n_; ++i) acc += std::exp(expo[i] - best);
    return best + std::log(acc) + log_norm_;
}

std::vector<double> DensityModel::log_density_batch(const EmbeddedMatrix& points) const {
    std::vector<double> out(points.rows);
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < static_cast<long>(points.rows); ++i)
        out[i] = log_density(points.row(i));
    return out;
}

std::vector<double> DensityModel::log_density_batch_serial(const EmbeddedMatrix& points) const {
    std::vector<double> out(points.rows);
    for (std::size_t i = 0; i < points.rows; ++i) out[i] = log_density(points.row(i));
    return out;
}

}  // namespace synthrisk
