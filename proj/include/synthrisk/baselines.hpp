#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "synthrisk/dataset.hpp"

namespace synthrisk {

struct BaselineResult {
    double e_train = 0.0;
    double e_control = 0.0;
    double e_star = 1.0;
    double E = 0.0;
};

// (e_train - e_control) / (e_star - e_control); the share of attack success
// attributable to memorization rather than population-level patterns. May be
// negative. Throws when e_star <= e_control.
double control_adjusted(double e_train, double e_control, double e_star);

// Copy of `row` with the target attribute replaced by a uniform draw:
// categorical targets over the vocabulary, numeric targets over the observed
// range of the attribute in `train`.
std::vector<Cell> make_canary(std::span<const Cell> row, std::size_t target_attr,
                              const Dataset& train, std::uint64_t seed);

struct CanaryPlan {
    std::size_t n_canaries = 100;
    std::size_t target_attribute = 0;
    std::uint64_t seed = 0;
};

// Retrains a generator on the canary-substituted dataset and attacks the
// canary record; returns whether the inference succeeded.
using CanaryPipeline = std::function<bool(const Dataset& train_prime, std::span<const Cell> target,
                                          std::size_t target_attr, std::uint64_t seed)>;

struct CanaryOutcome {
    double canary_rate = 0.0;  // mean success against randomized targets
    double train_rate = 0.0;   // mean success against the same, unmodified targets
    std::size_t n_completed = 0;
};

// For each sampled target record d: substitute the canary d' into the
// training set, refit through the pipeline, attack d'; also attack d on the
// unmodified training set. Pipeline failures are skipped and reflected in
// n_completed.
CanaryOutcome canary_baseline(const Dataset& train, const CanaryPipeline& fit_and_attack,
                              const CanaryPlan& plan);

}  // namespace synthrisk
