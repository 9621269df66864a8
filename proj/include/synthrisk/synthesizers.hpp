#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "synthrisk/dataset.hpp"

namespace synthrisk {

enum class SynthKind { KernelSmoother, DPMarginal, ExternalCSV };

struct SynthesizerSpec {
    SynthKind kind = SynthKind::KernelSmoother;
    double bandwidth = 0.05;   // KernelSmoother
    double epsilon = 1.0;      // DPMarginal; 0 selects the pure-noise limit
    std::size_t dp_bins = 16;  // numeric discretization for DPMarginal
    std::string path;          // ExternalCSV
    std::uint64_t seed = 0;

    std::string to_json() const;
    static SynthesizerSpec from_json(const std::string& text);
};

// Fitted generator. Models are immutable after fitting and safe to sample
// from concurrently with caller-supplied seeds.
class Synthesizer {
public:
    virtual ~Synthesizer() = default;
    virtual Dataset sample(std::size_t n, std::uint64_t seed) const = 0;
    // Shifted mean negative log-likelihood of the validation rows; the shift
    // is a per-family constant chosen so the loss is non-negative.
    virtual double validation_loss(const Dataset& val) const = 0;
    virtual std::string describe() const = 0;
};

// Smoothed bootstrap over the training rows: numeric attributes perturbed by
// Gaussian noise of scale h * range, categorical attributes resampled from
// their empirical marginal with probability min(1, h). h -> 0 approaches a
// verbatim copier, large h independent marginals.
std::unique_ptr<Synthesizer> fit_kernel_synth(const Dataset& train, double bandwidth);

// Laplace-noised independent marginals (numeric attributes discretized to
// equal-width bins over the declared/observed range). Noise scale 2*m/eps per
// cell with m attributes; the end-to-end release is eps-DP by sequential
// composition under remove-one adjacency. eps == 0 releases pure-noise
// marginals (the eps -> 0 limit; data-independent).
std::unique_ptr<Synthesizer> fit_dp_marginal(const Dataset& train, double epsilon,
                                             std::uint64_t seed, std::size_t bins = 16);

// The released per-attribute probability tables of a DPMarginal model (used
// by the privacy property test).
const std::vector<std::vector<double>>& dp_marginals(const Synthesizer& model);

struct OverfitFit {
    std::unique_ptr<Synthesizer> model;
    double loss = 0.0;        // achieved validation loss L
    double loss_star = 0.0;   // optimal validation loss L*
    double bandwidth = 0.0;   // solved bandwidth
    double bandwidth_star = 0.0;
};

// Finds the validation-loss-optimal bandwidth h* (golden-section search over
// log h), then solves validation_loss(h) = f_o * L* for h < h* by bisection
// (relative tolerance 1e-3). Throws if the target is unreachable within
// h in [1e-6, h*].
OverfitFit fit_to_overfit_ratio(const Dataset& train, const Dataset& val, double overfit_ratio);

double validation_loss(const Synthesizer& model, const Dataset& val);

// The leaky release: |train| rows of which round(f_l * |train|) are training
// rows sampled without replacement, the rest release rows (with replacement
// only if the release set is too small).
Dataset leaky_release(const Dataset& train, const Dataset& release, double leak_fraction,
                      std::uint64_t seed);

}  // namespace synthrisk
