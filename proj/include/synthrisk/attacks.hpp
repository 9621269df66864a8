#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "synthrisk/dataset.hpp"
#include "synthrisk/distance.hpp"
#include "synthrisk/kde.hpp"
#include "synthrisk/tree.hpp"
#include "synthrisk/wilson.hpp"

namespace synthrisk {

struct AttackConfig {
    std::size_t n_attacks = 2000;
    std::size_t attr_count_min = 3;   // multivariate singling-out subset sizes
    std::size_t attr_count_max = 12;
    std::size_t k_link = 1;
    double gtcap_radius = 0.1;
    std::uint64_t seed = 0;
};

// Singling-out guesses are conjunctions of per-attribute conditions mined
// from the synthetic data; categorical conditions are equalities, numeric
// ones inequalities pointing at the nearer extreme.
enum class PredOp { Eq, Le, Ge };
struct Condition {
    std::size_t attr;
    PredOp op;
    Cell value;
};
using Predicate = std::vector<Condition>;

bool predicate_matches(const Predicate& p, std::span<const Cell> row);
std::size_t count_matches(const Predicate& p, const Dataset& data);

struct GuessBatch {
    std::vector<Predicate> guesses;
    std::vector<std::uint8_t> outcomes;  // 1 where the guess singled out exactly one record
    std::size_t n_attacks = 0;           // configured budget
};

// Train/control estimate pair shared by the guess-based attacks.
struct AttackResult {
    RiskEstimate train;
    RiskEstimate control;
};

struct SinglingOutResult {
    RiskEstimate train;
    RiskEstimate control;
    std::string best_pass;    // "univariate" or "attrs=<s>" of the winning pass
    GuessBatch train_batch;   // winning pass, evaluated against the training set
};

// Brute-force singling out: per pass (univariate, then each subset size in
// range), collect predicates that isolate exactly one synthetic record and
// test whether they isolate exactly one training (resp. control) record.
// Reports the pass with the highest train rate.
SinglingOutResult singling_out_mia(const Dataset& synth, const Dataset& train,
                                   const Dataset& control, const AttackConfig& cfg);

// Density-ratio membership inference: KDE fitted on synth and on reference;
// members/nonmembers scored by the log-density ratio; returns 2*AUC - 1.
double domias_mia(const Dataset& synth, const Dataset& reference, const Dataset& members,
                  const Dataset& nonmembers, BandwidthRule rule = BandwidthRule::Silverman);

// Links the two attribute halves of a target record through shared synthetic
// k-neighborhoods under the Gower distance.
AttackResult linkability_attack(const Dataset& synth, const Dataset& train, const Dataset& control,
                                const std::pair<std::vector<std::size_t>, std::vector<std::size_t>>& attr_partition,
                                std::size_t k, std::size_t n_attacks, std::uint64_t seed);

// Quasi-identifiers plus a target attribute, the adversary's side of an AIA.
struct AuxSpec {
    std::vector<std::size_t> quasi;
    std::size_t target = 0;
};

AuxInfo make_aux_info(const Dataset& source, const AuxSpec& aux, std::size_t n_records,
                      std::uint64_t seed);

enum class NumericAiaMode { Tolerance, Nrmse };

struct AiaScore {
    bool is_rate = true;     // false for NRMSE-scored numeric targets
    RiskEstimate estimate;   // valid when is_rate
    double score = 0.0;      // rate, or the NRMSE value
    std::size_t n = 0;
};

struct AiaResult {
    AiaScore train;
    AiaScore control;
};

// Nearest-synthetic-record value assignment on the quasi-identifiers (k=1,
// Gower distance). Categorical targets score by exact match; numeric targets
// by a scaled tolerance window or by NRMSE.
AiaResult aia_distance(const Dataset& synth, const Dataset& train, const Dataset& control,
                       const AuxSpec& aux, std::size_t n_attacks, std::uint64_t seed,
                       NumericAiaMode mode = NumericAiaMode::Tolerance, double tolerance = 0.05);

// Single-set evaluation against explicitly supplied target rows.
AiaScore aia_distance_eval(const Dataset& synth, const Dataset& targets, const AuxSpec& aux,
                           NumericAiaMode mode = NumericAiaMode::Tolerance,
                           double tolerance = 0.05);

// Model-based inference: a learner fitted on the synthetic data predicts the
// target attribute of real records from the quasi-identifiers.
AiaResult aia_ml(const Dataset& synth, const Dataset& train, const Dataset& control,
                 const AuxSpec& aux, const LearnerSpec& learner, std::size_t n_attacks,
                 std::uint64_t seed, NumericAiaMode mode = NumericAiaMode::Nrmse);

// 1 - RMSE / range(y); throws on zero range.
double nrmse(const std::vector<double>& y, const std::vector<double>& yhat);

// Correct-attribution probability over radius-generalized key equivalence
// classes: mean over synthetic rows with a non-empty class of the share of
// class members agreeing on the target. Numeric attributes compare on
// min-max-scaled values within `radius`.
double gtcap(const Dataset& synth, const Dataset& truth, const std::vector<std::size_t>& keys,
             std::size_t target, double radius);

}  // namespace synthrisk
