#include "synthrisk/baselines.hpp"

#include <algorithm>
#include <exception>
#include <iostream>
#include <limits>
#include <random>
#include <stdexcept>

#include "synthrisk/rng.hpp"

namespace synthrisk {

double control_adjusted(double e_train, double e_control, double e_star) {
    if (e_star <= e_control) throw std::invalid_argument("control_adjusted: degenerate baseline");
    return (e_train - e_control) / (e_star - e_control);
}

std::vector<Cell> make_canary(std::span<const Cell> row, std::size_t target_attr,
                              const Dataset& train, std::uint64_t seed) {
    const auto& schema = train.schema();
    if (target_attr >= schema.size()) throw std::invalid_argument("make_canary: bad target");
    std::vector<Cell> out(row.begin(), row.end());
    auto rng = make_rng(derive_seed(seed, "canary"));
    if (schema.at(target_attr).kind == AttrKind::Categorical) {
        const std::size_t levels = schema.at(target_attr).vocabulary.size();
        std::uniform_int_distribution<std::size_t> pick(0, levels - 1);
        out[target_attr] = static_cast<Cell>(pick(rng));
    } else {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t r = 0; r < train.n_rows(); ++r) {
            lo = std::min(lo, train.at(r, target_attr));
            hi = std::max(hi, train.at(r, target_attr));
        }
        std::uniform_real_distribution<double> pick(lo, hi);
        out[target_attr] = pick(rng);
    }
    return out;
}

CanaryOutcome canary_baseline(const Dataset& train, const CanaryPipeline& fit_and_attack,
                              const CanaryPlan& plan) {
    if (plan.n_canaries < 1) throw std::invalid_argument("canary_baseline: need >= 1 canary");
    if (train.empty()) throw std::invalid_argument("canary_baseline: empty training set");

    auto rng = make_rng(derive_seed(plan.seed, "canary-targets"));
    const auto targets = sample_indices(train.n_rows(), plan.n_canaries, rng);

    std::size_t canary_hits = 0, train_hits = 0, completed = 0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const std::size_t r = targets[i];
        const auto canary =
            make_canary(train.row(r), plan.target_attribute, train, derive_seed(plan.seed, i));

        // Training set with row r replaced by the canary.
        Dataset train_prime = train.select_rows({});
        for (std::size_t j = 0; j < train.n_rows(); ++j) {
            if (j == r)
                train_prime.append_row(canary);
            else
                train_prime.append_row(train.row(j));
        }

        try {
            const auto run_seed = derive_seed(plan.seed, 1000 + i);
            const bool canary_ok =
                fit_and_attack(train_prime, canary, plan.target_attribute, run_seed);
            const bool train_ok =
                fit_and_attack(train, train.row(r), plan.target_attribute, run_seed);
            canary_hits += canary_ok;
            train_hits += train_ok;
            ++completed;
        } catch (const std::exception& e) {
            std::cerr << "warning: canary iteration " << i << " skipped: " << e.what() << "\n";
        }
    }

    CanaryOutcome out;
    out.n_completed = completed;
    if (completed > 0) {
        out.canary_rate = static_cast<double>(canary_hits) / static_cast<double>(completed);
        out.train_rate = static_cast<double>(train_hits) / static_cast<double>(completed);
    }
    return out;
}

}  // namespace synthrisk
