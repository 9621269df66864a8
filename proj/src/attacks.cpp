#include "synthrisk/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "synthrisk/embedding.hpp"
#include "synthrisk/neighbors.hpp"
#include "synthrisk/rng.hpp"

namespace synthrisk {
namespace {

std::vector<std::size_t> sample_targets(std::size_t n_rows, std::size_t n_attacks,
                                        std::uint64_t seed) {
    auto rng = make_rng(seed);
    if (n_attacks >= n_rows) {
        std::vector<std::size_t> all(n_rows);
        std::iota(all.begin(), all.end(), std::size_t{0});
        return all;
    }
    return sample_indices(n_rows, n_attacks, rng);
}

std::string predicate_key(const Predicate& p) {
    std::ostringstream os;
    for (const auto& c : p) {
        os << c.attr << (c.op == PredOp::Eq ? "=" : c.op == PredOp::Le ? "<" : ">");
        os.precision(17);
        os << c.value << ';';
    }
    return os.str();
}

// Per-attribute medians of the synthetic data; used to orient numeric
// inequalities toward the nearer extreme.
std::vector<double> column_medians(const Dataset& data) {
    std::vector<double> med(data.n_attrs(), 0.0);
    std::vector<double> col(data.n_rows());
    for (std::size_t a = 0; a < data.n_attrs(); ++a) {
        for (std::size_t r = 0; r < data.n_rows(); ++r) col[r] = data.at(r, a);
        std::nth_element(col.begin(), col.begin() + col.size() / 2, col.end());
        med[a] = col[col.size() / 2];
    }
    return med;
}

struct Pass {
    std::string name;
    GuessBatch batch_train;
    RiskEstimate train;
    RiskEstimate control;
    std::size_t attempted = 0;
};

Pass evaluate_pass(std::string name, std::vector<Predicate> guesses, std::size_t attempted,
                   const Dataset& train, const Dataset& control, std::size_t n_attacks,
                   double confidence = 0.95) {
    Pass pass;
    pass.name = std::move(name);
    pass.attempted = attempted;
    pass.batch_train.n_attacks = n_attacks;
    pass.batch_train.guesses = std::move(guesses);

    std::size_t hits_train = 0, hits_control = 0;
    for (const auto& g : pass.batch_train.guesses) {
        const bool ok_train = count_matches(g, train) == 1;
        const bool ok_control = count_matches(g, control) == 1;
        pass.batch_train.outcomes.push_back(ok_train ? 1 : 0);
        hits_train += ok_train;
        hits_control += ok_control;
    }
    // n counts the guesses actually made; only an empty pass falls back to
    // the number of attempted candidates.
    const std::size_t n = pass.batch_train.guesses.empty()
                              ? std::max<std::size_t>(attempted, 1)
                              : pass.batch_train.guesses.size();
    pass.train = wilson_interval(hits_train, n, confidence);
    pass.control = wilson_interval(hits_control, n, confidence);
    return pass;
}

}  // namespace

bool predicate_matches(const Predicate& p, std::span<const Cell> row) {
    for (const auto& c : p) {
        const Cell v = row[c.attr];
        switch (c.op) {
            case PredOp::Eq:
                if (v != c.value) return false;
                break;
            case PredOp::Le:
                if (!(v <= c.value)) return false;
                break;
            case PredOp::Ge:
                if (!(v >= c.value)) return false;
                break;
        }
    }
    return true;
}

std::size_t count_matches(const Predicate& p, const Dataset& data) {
    std::size_t n = 0;
    for (std::size_t r = 0; r < data.n_rows(); ++r)
        if (predicate_matches(p, data.row(r))) ++n;
    return n;
}

SinglingOutResult singling_out_mia(const Dataset& synth, const Dataset& train,
                                   const Dataset& control, const AttackConfig& cfg) {
    if (synth.empty() || train.empty() || control.empty())
        throw std::invalid_argument("singling_out: empty dataset");
    const auto& schema = synth.schema();
    const std::size_t m = schema.size();
    const auto medians = column_medians(synth);

    std::vector<Pass> passes;

    // Univariate pass: extreme-value predicates for numeric attributes and
    // once-occurring levels for categorical ones.
    {
        std::vector<Predicate> guesses;
        std::size_t attempted = 0;
        std::unordered_set<std::string> seen;
        for (std::size_t a = 0; a < m && guesses.size() < cfg.n_attacks; ++a) {
            std::vector<Predicate> candidates;
            if (schema.at(a).kind == AttrKind::Numeric) {
                double lo = synth.at(0, a), hi = synth.at(0, a);
                for (std::size_t r = 1; r < synth.n_rows(); ++r) {
                    lo = std::min(lo, synth.at(r, a));
                    hi = std::max(hi, synth.at(r, a));
                }
                candidates.push_back({{a, PredOp::Le, lo}});
                candidates.push_back({{a, PredOp::Ge, hi}});
            } else {
                std::vector<std::size_t> counts(schema.at(a).vocabulary.size(), 0);
                for (std::size_t r = 0; r < synth.n_rows(); ++r)
                    ++counts[static_cast<std::size_t>(synth.at(r, a))];
                for (std::size_t l = 0; l < counts.size(); ++l)
                    if (counts[l] == 1)
                        candidates.push_back({{a, PredOp::Eq, static_cast<Cell>(l)}});
            }
            for (auto& p : candidates) {
                if (guesses.size() >= cfg.n_attacks) break;
                ++attempted;
                if (count_matches(p, synth) != 1) continue;  // must single out in synth
                if (seen.insert(predicate_key(p)).second) guesses.push_back(std::move(p));
            }
        }
        passes.push_back(evaluate_pass("univariate", std::move(guesses), attempted, train, control,
                                       cfg.n_attacks));
    }

    // Multivariate passes: one per subset size; predicates are built from
    // randomly visited synthetic rows over random attribute subsets and kept
    // when they isolate exactly one synthetic record.
    const std::size_t s_max = std::min(cfg.attr_count_max, m);
    for (std::size_t s = std::min(cfg.attr_count_min, m); s <= s_max; ++s) {
        auto rng = make_rng(derive_seed(cfg.seed, "singling-out-pass-" + std::to_string(s)));
        std::vector<Predicate> guesses;
        std::unordered_set<std::string> seen;
        std::size_t attempted = 0;
        const std::size_t max_attempts = cfg.n_attacks * 4;
        std::uniform_int_distribution<std::size_t> pick_row(0, synth.n_rows() - 1);
        while (guesses.size() < cfg.n_attacks && attempted < max_attempts) {
            ++attempted;
            const std::size_t r = pick_row(rng);
            auto attrs = sample_indices(m, s, rng);
            std::sort(attrs.begin(), attrs.end());
            Predicate p;
            p.reserve(s);
            for (std::size_t a : attrs) {
                const Cell v = synth.at(r, a);
                if (schema.at(a).kind == AttrKind::Categorical)
                    p.push_back({a, PredOp::Eq, v});
                else
                    p.push_back({a, v <= medians[a] ? PredOp::Le : PredOp::Ge, v});
            }
            if (count_matches(p, synth) != 1) continue;
            if (seen.insert(predicate_key(p)).second) guesses.push_back(std::move(p));
        }
        passes.push_back(evaluate_pass("attrs=" + std::to_string(s), std::move(guesses), attempted,
                                       train, control, cfg.n_attacks));
    }

    // The reported risk is the pass with the highest train rate.
    std::size_t best = 0;
    for (std::size_t i = 1; i < passes.size(); ++i)
        if (passes[i].train.rate > passes[best].train.rate) best = i;

    SinglingOutResult res;
    res.train = passes[best].train;
    res.control = passes[best].control;
    res.best_pass = passes[best].name;
    res.train_batch = std::move(passes[best].batch_train);
    return res;
}

double domias_mia(const Dataset& synth, const Dataset& reference, const Dataset& members,
                  const Dataset& nonmembers, BandwidthRule rule) {
    if (synth.empty() || reference.empty() || members.empty() || nonmembers.empty())
        throw std::invalid_argument("domias: empty dataset");
    if (rule != BandwidthRule::Silverman)
        throw std::invalid_argument("domias: unsupported bandwidth rule");

    // Scaling must cover every dataset involved; out-of-range values would
    // otherwise clamp into zero-variance columns.
    const auto params = ScalingParams::fit(
        Dataset::concat(Dataset::concat(synth, reference), Dataset::concat(members, nonmembers)));
    const auto kde_synth = DensityModel::fit(embed(synth, params));
    const auto kde_ref = DensityModel::fit(embed(reference, params));

    const auto emb_members = embed(members, params);
    const auto emb_nonmembers = embed(nonmembers, params);

    auto score_of = [&](const EmbeddedMatrix& pts) {
        auto ls = kde_synth.log_density_batch(pts);
        auto lr = kde_ref.log_density_batch(pts);
        for (std::size_t i = 0; i < ls.size(); ++i) ls[i] -= lr[i];
        return ls;
    };
    const auto pos = score_of(emb_members);
    const auto neg = score_of(emb_nonmembers);

    // AUC via average ranks (Mann-Whitney U with tie correction).
    struct Entry {
        double score;
        bool positive;
    };
    std::vector<Entry> all;
    all.reserve(pos.size() + neg.size());
    for (double s : pos) all.push_back({s, true});
    for (double s : neg) all.push_back({s, false});
    std::stable_sort(all.begin(), all.end(),
                     [](const Entry& a, const Entry& b) { return a.score < b.score; });

    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j].score == all[i].score) ++j;
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t)
            if (all[t].positive) rank_sum_pos += avg_rank;
        i = j;
    }
    const double n1 = static_cast<double>(pos.size());
    const double n2 = static_cast<double>(neg.size());
    const double auc = (rank_sum_pos - n1 * (n1 + 1.0) / 2.0) / (n1 * n2);
    return 2.0 * auc - 1.0;
}

AttackResult linkability_attack(const Dataset& synth, const Dataset& train, const Dataset& control,
                                const std::pair<std::vector<std::size_t>, std::vector<std::size_t>>& attr_partition,
                                std::size_t k, std::size_t n_attacks, std::uint64_t seed) {
    const auto& [a1, a2] = attr_partition;
    if (a1.empty() || a2.empty()) throw std::invalid_argument("linkability: empty attribute half");
    {
        std::set<std::size_t> s1(a1.begin(), a1.end()), s2(a2.begin(), a2.end());
        std::vector<std::size_t> inter;
        std::set_intersection(s1.begin(), s1.end(), s2.begin(), s2.end(),
                              std::back_inserter(inter));
        if (!inter.empty()) throw std::invalid_argument("linkability: halves overlap");
        if (s1.size() + s2.size() != synth.n_attrs())
            throw std::invalid_argument("linkability: halves must cover all attributes");
    }
    if (k < 1 || k > synth.n_rows()) throw std::invalid_argument("linkability: k out of range");

    const auto ranges = GowerRanges::fit(synth);

    auto rate_for = [&](const Dataset& targets, std::uint64_t s) {
        const auto idx = sample_targets(targets.n_rows(), n_attacks, s);
        const auto sampled = targets.select_rows(idx);
        const auto nn1 = gower_neighbors(sampled, synth, ranges, a1, k);
        const auto nn2 = gower_neighbors(sampled, synth, ranges, a2, k);
        std::size_t hits = 0;
        for (std::size_t q = 0; q < sampled.n_rows(); ++q) {
            std::unordered_set<std::size_t> half1;
            for (std::size_t j = 0; j < k; ++j) half1.insert(nn1.index(q, j));
            bool linked = false;
            for (std::size_t j = 0; j < k && !linked; ++j) linked = half1.count(nn2.index(q, j)) > 0;
            hits += linked;
        }
        return wilson_interval(hits, sampled.n_rows());
    };

    AttackResult res;
    res.train = rate_for(train, derive_seed(seed, "link-train"));
    res.control = rate_for(control, derive_seed(seed, "link-control"));
    return res;
}

AuxInfo make_aux_info(const Dataset& source, const AuxSpec& aux, std::size_t n_records,
                      std::uint64_t seed) {
    if (aux.quasi.empty()) throw std::invalid_argument("aux: empty quasi-identifier set");
    for (std::size_t a : aux.quasi)
        if (a == aux.target) throw std::invalid_argument("aux: target among quasi-identifiers");
    const auto idx = sample_targets(source.n_rows(), n_records, seed);
    AuxInfo info;
    info.quasi_identifiers = aux.quasi;
    info.target_attribute = aux.target;
    info.records = source.select_rows(idx).select_attrs(aux.quasi);
    return info;
}

AiaScore aia_distance_eval(const Dataset& synth, const Dataset& targets, const AuxSpec& aux,
                           NumericAiaMode mode, double tolerance) {
    if (synth.empty()) throw std::invalid_argument("aia: empty synth");
    const auto& schema = synth.schema();
    const bool categorical = schema.at(aux.target).kind == AttrKind::Categorical;
    const auto ranges = GowerRanges::fit(synth);

    const auto nn = gower_neighbors(targets, synth, ranges, aux.quasi, 1);

    AiaScore out;
    out.n = targets.n_rows();
    if (categorical || mode == NumericAiaMode::Tolerance) {
        const double t_range = ranges.range[aux.target];
        std::size_t hits = 0;
        for (std::size_t q = 0; q < targets.n_rows(); ++q) {
            const Cell pred = synth.at(nn.index(q, 0), aux.target);
            const Cell truth = targets.at(q, aux.target);
            if (categorical)
                hits += pred == truth;
            else
                hits += std::abs(pred - truth) <= tolerance * (t_range > 0 ? t_range : 1.0);
        }
        out.is_rate = true;
        out.estimate = wilson_interval(hits, targets.n_rows());
        out.score = out.estimate.rate;
    } else {
        std::vector<double> y(targets.n_rows()), yhat(targets.n_rows());
        for (std::size_t q = 0; q < targets.n_rows(); ++q) {
            y[q] = targets.at(q, aux.target);
            yhat[q] = synth.at(nn.index(q, 0), aux.target);
        }
        out.is_rate = false;
        out.score = nrmse(y, yhat);
    }
    return out;
}

AiaResult aia_distance(const Dataset& synth, const Dataset& train, const Dataset& control,
                       const AuxSpec& aux, std::size_t n_attacks, std::uint64_t seed,
                       NumericAiaMode mode, double tolerance) {
    auto pick = [&](const Dataset& src, const char* tag) {
        return src.select_rows(sample_targets(src.n_rows(), n_attacks, derive_seed(seed, tag)));
    };
    AiaResult res;
    res.train = aia_distance_eval(synth, pick(train, "aia-train"), aux, mode, tolerance);
    res.control = aia_distance_eval(synth, pick(control, "aia-control"), aux, mode, tolerance);
    return res;
}

namespace {

// Embedded feature rows of the quasi-identifier sub-dataset.
FeatureMatrix aux_features(const Dataset& data, const std::vector<std::size_t>& quasi,
                           const ScalingParams& params) {
    const auto sub = data.select_attrs(quasi);
    ScalingParams sub_params;
    for (std::size_t a : quasi) {
        sub_params.mins.push_back(params.mins[a]);
        sub_params.maxs.push_back(params.maxs[a]);
    }
    const auto emb = embed(sub, sub_params);
    FeatureMatrix f;
    f.rows = emb.rows;
    f.dims = emb.dims;
    f.data = emb.data;
    return f;
}

}  // namespace

AiaResult aia_ml(const Dataset& synth, const Dataset& train, const Dataset& control,
                 const AuxSpec& aux, const LearnerSpec& learner, std::size_t n_attacks,
                 std::uint64_t seed, NumericAiaMode mode) {
    if (synth.empty()) throw std::invalid_argument("aia_ml: empty synth");
    const auto& schema = synth.schema();
    const bool categorical = schema.at(aux.target).kind == AttrKind::Categorical;
    const auto params = ScalingParams::fit(synth);

    const auto x_synth = aux_features(synth, aux.quasi, params);
    LearnerSpec::Predictor model;
    if (categorical) {
        std::vector<std::size_t> y(synth.n_rows());
        for (std::size_t r = 0; r < synth.n_rows(); ++r)
            y[r] = static_cast<std::size_t>(synth.at(r, aux.target));
        model = make_tree_classifier(x_synth, y, schema.at(aux.target).vocabulary.size(), learner);
    } else {
        std::vector<double> y(synth.n_rows());
        for (std::size_t r = 0; r < synth.n_rows(); ++r) y[r] = synth.at(r, aux.target);
        model = make_tree_regressor(x_synth, y, learner);
    }

    auto eval = [&](const Dataset& src, const char* tag) {
        const auto targets =
            src.select_rows(sample_targets(src.n_rows(), n_attacks, derive_seed(seed, tag)));
        const auto x = aux_features(targets, aux.quasi, params);
        AiaScore out;
        out.n = targets.n_rows();
        if (categorical) {
            std::size_t hits = 0;
            for (std::size_t q = 0; q < targets.n_rows(); ++q)
                hits += model(x.row(q)) == targets.at(q, aux.target);
            out.is_rate = true;
            out.estimate = wilson_interval(hits, targets.n_rows());
            out.score = out.estimate.rate;
        } else if (mode == NumericAiaMode::Tolerance) {
            const auto ranges = GowerRanges::fit(synth);
            const double t_range = ranges.range[aux.target] > 0 ? ranges.range[aux.target] : 1.0;
            std::size_t hits = 0;
            for (std::size_t q = 0; q < targets.n_rows(); ++q)
                hits += std::abs(model(x.row(q)) - targets.at(q, aux.target)) <= 0.05 * t_range;
            out.is_rate = true;
            out.estimate = wilson_interval(hits, targets.n_rows());
            out.score = out.estimate.rate;
        } else {
            std::vector<double> y(targets.n_rows()), yhat(targets.n_rows());
            for (std::size_t q = 0; q < targets.n_rows(); ++q) {
                y[q] = targets.at(q, aux.target);
                yhat[q] = model(x.row(q));
            }
            out.is_rate = false;
            out.score = nrmse(y, yhat);
        }
        return out;
    };

    AiaResult res;
    res.train = eval(train, "aia-ml-train");
    res.control = eval(control, "aia-ml-control");
    return res;
}

double nrmse(const std::vector<double>& y, const std::vector<double>& yhat) {
    if (y.empty() || y.size() != yhat.size()) throw std::invalid_argument("nrmse: bad input");
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    const double range = *hi - *lo;
    if (range <= 0.0) throw std::invalid_argument("nrmse: degenerate target");
    double sse = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = y[i] - yhat[i];
        sse += e * e;
    }
    return 1.0 - std::sqrt(sse / static_cast<double>(y.size())) / range;
}

double gtcap(const Dataset& synth, const Dataset& truth, const std::vector<std::size_t>& keys,
             std::size_t target, double radius) {
    if (radius <= 0.0 || radius >= 1.0) throw std::invalid_argument("gtcap: radius outside (0,1)");
    if (keys.empty()) throw std::invalid_argument("gtcap: empty key set");
    for (std::size_t a : keys)
        if (a == target) throw std::invalid_argument("gtcap: target among keys");
    if (!(synth.schema() == truth.schema())) throw std::invalid_argument("gtcap: schema mismatch");

    const auto& schema = synth.schema();
    const auto params = ScalingParams::fit(synth);
    auto scaled = [&](const Dataset& d, std::size_t r, std::size_t a) {
        const double range = params.maxs[a] - params.mins[a];
        if (range <= 0.0) return 0.0;
        return (d.at(r, a) - params.mins[a]) / range;
    };
    auto attr_match = [&](std::size_t a, std::size_t rs, std::size_t rt) {
        if (schema.at(a).kind == AttrKind::Categorical) return synth.at(rs, a) == truth.at(rt, a);
        return std::abs(scaled(synth, rs, a) - scaled(truth, rt, a)) <= radius;
    };

    std::vector<double> ratio(synth.n_rows(), -1.0);  // -1: no class members
#pragma omp parallel for schedule(dynamic, 16)
    for (long rs = 0; rs < static_cast<long>(synth.n_rows()); ++rs) {
        std::size_t den = 0, num = 0;
        for (std::size_t rt = 0; rt < truth.n_rows(); ++rt) {
            bool key_match = true;
            for (std::size_t a : keys) {
                if (!attr_match(a, rs, rt)) {
                    key_match = false;
                    break;
                }
            }
            if (!key_match) continue;
            ++den;
            num += attr_match(target, rs, rt);
        }
        if (den > 0) ratio[rs] = static_cast<double>(num) / static_cast<double>(den);
    }

    double sum = 0.0;
    std::size_t contributing = 0;
    for (double v : ratio) {
        if (v >= 0.0) {
            sum += v;
            ++contributing;
        }
    }
    return contributing > 0 ? sum / static_cast<double>(contributing) : 0.0;
}

}  // namespace synthrisk
