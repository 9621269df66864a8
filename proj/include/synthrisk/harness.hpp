#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synthrisk/attacks.hpp"
#include "synthrisk/dataset.hpp"
#include "synthrisk/indicators.hpp"
#include "synthrisk/tree.hpp"

namespace synthrisk {

struct ExperimentConfig {
    // Data source: a CSV path or the built-in benchmark generator.
    std::string dataset_path;
    std::string dataset_builtin;  // "mini-adult"
    std::size_t builtin_rows = 2000;
    std::uint64_t builtin_seed = 1;

    double f_train = 0.4, f_control = 0.3, f_release = 0.3;
    std::uint64_t split_seed = 7;

    // Risk grids; an empty list disables the model.
    std::vector<double> leaky_levels;
    std::vector<double> overfit_levels;
    std::vector<double> dp_levels;
    double overfit_val_fraction = 0.2;
    std::size_t dp_bins = 16;
    std::map<std::string, std::string> external_files;  // label -> csv path

    std::vector<std::string> metrics;

    IndicatorConfig indicator;
    AttackConfig attack;
    std::string aia_target;                    // default: last categorical attribute
    std::vector<std::string> aia_quasi;        // default: all other attributes
    std::vector<std::string> gtcap_keys;       // default: all other attributes
    std::vector<std::string> link_first_half;  // default: first half of the attributes

    bool bootstrap_enabled = true;
    std::size_t bootstrap_resamples = 1000;
    std::size_t bootstrap_resamples_heavy = 10;  // singling-out and gtcap
    double bootstrap_confidence = 0.95;
    std::vector<std::string> bootstrap_metrics = {"ims", "dcr"};

    std::vector<double> outlier_fractions = {0.0, 0.01, 0.02, 0.05, 0.10};
    std::size_t lof_k = 20;

    std::vector<std::size_t> sweep_k_values = {1, 2, 5, 10};
    std::vector<double> sweep_radii = {0.05, 0.1, 0.2, 0.4};
    // Radius-sweep attribution attributes: a numeric target over categorical
    // keys (defaults: first numeric attribute, first three categoricals).
    std::string sweep_gtcap_target;
    std::vector<std::string> sweep_gtcap_keys;

    bool utility = false;
    LearnerSpec learner;          // attack-side learner
    LearnerSpec utility_learner{6, 25, 0.01};  // noise-pruned tree for the utility test
    int workers = 0;  // >0 pins the OpenMP thread count
    std::uint64_t master_seed = 42;

    static ExperimentConfig from_json_file(const std::string& path);
    static ExperimentConfig from_json_text(const std::string& text);
    std::string to_json() const;
};

struct ReportCell {
    std::string risk_model;
    double risk_value = 0.0;
    std::string metric;
    double value = 0.0;
    double ci_low = 0.0, ci_high = 0.0, stdev = 0.0;
    bool has_ci = false;
    double runtime_seconds = 0.0;
    bool control_adjusted = false;
    std::string error;
};

struct CorrelationMatrix {
    std::vector<std::string> metrics;
    std::vector<double> values;  // metrics.size() x metrics.size(), row-major

    double at(std::size_t i, std::size_t j) const { return values[i * metrics.size() + j]; }
};

struct ExperimentReport {
    std::vector<ReportCell> cells;
    std::map<std::string, CorrelationMatrix> correlations;  // per risk model
    std::string config_echo;                                // resolved config as JSON

    // All non-adjusted cells of one metric across a model's grid, by level.
    std::vector<double> series(const std::string& risk_model, const std::string& metric) const;
    const ReportCell* find(const std::string& risk_model, double risk_value,
                           const std::string& metric, bool adjusted = false) const;
};

// Full assessment over every configured risk model and metric. Deterministic
// given the config seeds, runtime fields excepted.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

struct BootstrapCi {
    double mean = 0.0;
    double ci_low = 0.0, ci_high = 0.0;
    double stdev = 0.0;
    std::size_t n_completed = 0;
};

// Percentile bootstrap over row-resamples of base_data. The metric closure
// is invoked once per resample; failures are skipped and counted.
BootstrapCi bootstrap_ci(const std::function<double(const Dataset&)>& metric,
                         const Dataset& base_data, std::size_t n_resamples, double confidence,
                         std::uint64_t seed);

// Pearson correlations between the metric series (same length >= 3). A
// constant series correlates 0 with everything and 1 with itself.
CorrelationMatrix correlation_matrix(const std::map<std::string, std::vector<double>>& series);

// Accuracy of a real-vs-synthetic classifier on a held-out stratified 30%
// test split (equal class counts). 0.5 means indistinguishable.
double mle_utility(const Dataset& real, const Dataset& synth, const LearnerSpec& learner,
                   std::uint64_t seed);

// Re-runs the configured metrics after LOF outlier removal from the training
// set, for each removal fraction and overfit ratio.
ExperimentReport outlier_robustness_protocol(const ExperimentConfig& cfg,
                                             const std::vector<double>& fractions,
                                             const std::vector<double>& f_o_levels = {1.0, 1.6});

// k sweep for the nearest-neighbor indicator and radius sweep for the
// attribution attack, across the active risk grid.
ExperimentReport parameter_sweeps(const ExperimentConfig& cfg);

// Writes results.csv, correlations.json, config_echo.json and plotdata/*.csv;
// returns the emitted paths.
std::vector<std::string> write_report(const ExperimentReport& report, const std::string& out_dir);

// Loads the configured dataset (CSV or built-in).
Dataset load_experiment_dataset(const ExperimentConfig& cfg);

// Seeded generator-fit/validation split of a training set (fit part first).
std::pair<Dataset, Dataset> split_train_val(const Dataset& train, double val_fraction,
                                            std::uint64_t seed);

}  // namespace synthrisk
