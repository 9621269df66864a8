// Acceptance suite: end-to-end checks of the full assessment pipeline on the
// built-in benchmark table. Each criterion prints one pass/fail line; the
// binary exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "synthrisk/attacks.hpp"
#include "synthrisk/baselines.hpp"
#include "synthrisk/datasets.hpp"
#include "synthrisk/harness.hpp"
#include "synthrisk/indicators.hpp"
#include "synthrisk/lof.hpp"
#include "synthrisk/neighbors.hpp"
#include "synthrisk/rng.hpp"
#include "synthrisk/synthesizers.hpp"

using namespace synthrisk;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

struct Criterion {
    std::string name;
    std::function<void()> body;
};

void expect(bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error(what);
}

void note(const std::string& s) { g_notes.push_back(s); }

void run_criterion(int number, const std::string& name, const std::function<void()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    g_notes.clear();
    try {
        body();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[PASS] criterion %2d: %s (%.1fs)\n", number, name.c_str(), secs);
    } catch (const std::exception& e) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[FAIL] criterion %2d: %s (%.1fs)\n        %s\n", number, name.c_str(), secs,
                    e.what());
        ++g_failures;
    }
    for (const auto& n : g_notes) std::printf("        note: %s\n", n.c_str());
    std::fflush(stdout);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

ExperimentConfig base_config() {
    ExperimentConfig cfg;
    cfg.dataset_builtin = "mini-adult";
    cfg.builtin_rows = 2000;
    cfg.builtin_seed = 1;
    cfg.split_seed = 7;
    cfg.master_seed = 42;
    cfg.indicator.seed = 11;
    cfg.attack.n_attacks = 2000;
    cfg.attack.seed = 13;
    cfg.bootstrap_enabled = false;
    return cfg;
}

// Shared leaky-grid report, computed once and reused by criteria 1, 3 and 8.
const ExperimentReport& leaky_report() {
    static const ExperimentReport report = [] {
        auto cfg = base_config();
        cfg.leaky_levels = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
        cfg.metrics = {"ims", "dcr", "gtcap", "singling_out", "linkability", "aia_distance"};
        return run_experiment(cfg);
    }();
    return report;
}

void check_monotone(const std::vector<double>& series, double slack, const std::string& name) {
    for (std::size_t i = 1; i < series.size(); ++i)
        expect(series[i] >= series[i - 1] - slack,
               name + " not monotone at step " + std::to_string(i) + ": " + fmt(series[i - 1]) +
                   " -> " + fmt(series[i]));
}

// ----- criteria -------------------------------------------------------------

void criterion_leaky_linearity() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& report = leaky_report();
    const std::vector<double> grid = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};

    const auto ims_series = report.series("leaky", "ims");
    expect(ims_series.size() == 6, "missing ims cells");
    for (std::size_t i = 0; i < 6; ++i)
        expect(std::abs(ims_series[i] - grid[i]) <= 1.0 / 800.0 + 1e-12,
               "ims(" + fmt(grid[i]) + ") = " + fmt(ims_series[i]));

    check_monotone(report.series("leaky", "dcr"), 1e-12, "dcr");
    check_monotone(report.series("leaky", "gtcap"), 0.02, "gtcap");
    check_monotone(report.series("leaky", "singling_out"), 0.02, "singling_out");
    check_monotone(report.series("leaky", "linkability"), 0.02, "linkability");
    check_monotone(report.series("leaky", "aia_distance"), 0.02, "aia_distance");

    const double ims_max = report.series("leaky", "ims").back();
    const double dcr_max = report.series("leaky", "dcr").back();
    const double gtcap_max = report.series("leaky", "gtcap").back();
    expect(ims_max == 1.0, "ims endpoint " + fmt(ims_max));
    expect(std::abs(dcr_max - 1.0) <= 0.02, "dcr endpoint " + fmt(dcr_max));
    expect(gtcap_max >= 0.95, "gtcap endpoint " + fmt(gtcap_max));
    note("endpoints: ims=" + fmt(ims_max) + " dcr=" + fmt(dcr_max) + " gtcap=" + fmt(gtcap_max));

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    expect(secs < 120.0, "runtime " + fmt(secs) + "s exceeds 2 minutes");
}

void criterion_dcr_pins() {
    const auto real = make_mini_adult(2000, 1);
    IndicatorConfig cfg;
    cfg.seed = 11;

    // zero numerator: synthetic rows far outside the real support
    Dataset far = real.select_rows({});
    for (std::size_t r = 0; r < 500; ++r) {
        std::vector<Cell> row(real.row(r).begin(), real.row(r).end());
        row[0] += 1000.0;
        row[5] += 1000.0;
        row[6] += 1e6;
        far.append_row(row);
    }
    const auto zero = dcr(far, real, cfg);
    expect(zero.raw_numerator == 0, "expected empty numerator");
    expect(zero.value == -1.0 / 49.0, "zero-numerator value " + fmt(zero.value));
    note("zero-numerator dcr = " + fmt(zero.value) + " (-1/49 = " + fmt(-1.0 / 49.0) + ")");

    // matched distribution: a fresh draw from the same generator
    const auto matched = make_mini_adult(2000, 2);
    const auto score = dcr(matched, real, cfg);
    expect(std::abs(score.value) <= 0.05, "matched-distribution dcr " + fmt(score.value));
    note("matched-distribution dcr = " + fmt(score.value));
}

void criterion_k_dominance() {
    auto cfg = base_config();
    cfg.leaky_levels = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    cfg.metrics = {"dcr"};
    cfg.sweep_k_values = {1, 2, 5, 10};
    cfg.sweep_radii = {};
    const auto sweep = parameter_sweeps(cfg);

    const auto k1 = sweep.series("leaky", "knn_k=1");
    expect(k1.size() == 6, "missing k=1 cells");
    for (std::size_t k : {2, 5, 10}) {
        const auto series = sweep.series("leaky", "knn_k=" + std::to_string(k));
        for (std::size_t i = 1; i < 6; ++i)  // every f_l > 0
            expect(k1[i] >= series[i] - 1e-12,
                   "k=1 (" + fmt(k1[i]) + ") below k=" + std::to_string(k) + " (" +
                       fmt(series[i]) + ") at level " + std::to_string(i));
    }

    const auto dcr_series = leaky_report().series("leaky", "dcr");
    for (std::size_t i = 0; i < 6; ++i)
        expect(k1[i] == dcr_series[i], "k=1 differs from dcr at level " + std::to_string(i) +
                                           ": " + fmt(k1[i]) + " vs " + fmt(dcr_series[i]));
    note("k=1 column bit-equals the dcr column");
}

void criterion_gtcap_radius() {
    auto cfg = base_config();
    cfg.leaky_levels = {0.0, 0.4, 0.8, 1.0};
    cfg.sweep_k_values = {};
    cfg.sweep_radii = {0.05, 0.1, 0.2, 0.4};
    cfg.sweep_gtcap_target = "hours_per_week";
    cfg.sweep_gtcap_keys = {"workclass", "education", "marital_status"};
    const auto sweep = parameter_sweeps(cfg);

    for (double level : cfg.leaky_levels) {
        double prev = -1.0;
        for (double radius : cfg.sweep_radii) {
            const auto* cell = sweep.find("leaky", level, "gtcap_r=" + fmt(radius));
            expect(cell != nullptr && cell->error.empty(), "missing gtcap sweep cell");
            expect(cell->value >= prev, "gtcap not monotone in radius at f_l=" + fmt(level) +
                                            ": " + fmt(prev) + " -> " + fmt(cell->value));
            prev = cell->value;
        }
    }
}

void criterion_overfit_targeting() {
    const auto data = make_mini_adult(2000, 1);
    auto [train, control, release] = split(data, 0.4, 0.3, 0.3, 7);
    auto [fit_part, val_part] = split_train_val(train, 0.2, derive_seed(42, "overfit-val"));

    double worst_rel = 0.0;
    for (double f_o : {1.0, 1.2, 1.4, 1.6, 1.8, 2.0}) {
        const auto fit = fit_to_overfit_ratio(fit_part, val_part, f_o);
        const double rel = std::abs(fit.loss - f_o * fit.loss_star) / fit.loss_star;
        worst_rel = std::max(worst_rel, rel);
        expect(rel <= 1e-3, "ratio " + fmt(f_o) + " off by " + fmt(rel));
    }
    note("worst |L - f_o L*|/L* = " + fmt(worst_rel));

    // risk response: DCR and the singling-out MIA strictly higher at f_o = 2
    auto cfg = base_config();
    cfg.overfit_levels = {1.0, 2.0};
    cfg.metrics = {"dcr", "singling_out"};
    const auto report = run_experiment(cfg);
    const auto dcr_series = report.series("overfit", "dcr");
    const auto mia_series = report.series("overfit", "singling_out");
    expect(dcr_series.size() == 2 && mia_series.size() == 2, "missing overfit cells");
    expect(dcr_series[1] > dcr_series[0],
           "dcr not increased: " + fmt(dcr_series[0]) + " -> " + fmt(dcr_series[1]));
    expect(mia_series[1] > mia_series[0],
           "mia not increased: " + fmt(mia_series[0]) + " -> " + fmt(mia_series[1]));
    note("dcr " + fmt(dcr_series[0]) + " -> " + fmt(dcr_series[1]) + ", mia " +
         fmt(mia_series[0]) + " -> " + fmt(mia_series[1]) + " at f_o=2");

    // outlier-removal robustness: overfit detection survives removal
    auto ocfg = base_config();
    ocfg.metrics = {"dcr"};
    const auto protocol =
        outlier_robustness_protocol(ocfg, {0.0, 0.01, 0.02, 0.05, 0.10}, {1.0, 1.6});
    for (double fraction : {0.0, 0.01, 0.02, 0.05, 0.10}) {
        const auto* base = protocol.find("outlier_fo=1", fraction, "dcr");
        const auto* overfit = protocol.find("outlier_fo=1.6", fraction, "dcr");
        expect(base != nullptr && overfit != nullptr && base->error.empty() &&
                   overfit->error.empty(),
               "missing outlier protocol cell at fraction " + fmt(fraction));
        expect(overfit->value > base->value,
               "dcr(f_o=1.6) <= dcr(f_o=1.0) at fraction " + fmt(fraction) + ": " +
                   fmt(overfit->value) + " vs " + fmt(base->value));
    }
}

void criterion_dp_property() {
    const auto t0 = std::chrono::steady_clock::now();

    // Two-value domain; neighboring datasets differ by one removed record.
    Schema schema({{"flag", AttrKind::Categorical, {}, {}, {"no", "yes"}}});
    std::vector<Cell> cells_d;
    for (int i = 0; i < 100; ++i) cells_d.push_back(i < 60 ? 0.0 : 1.0);
    const Dataset d(schema, std::move(cells_d));
    std::vector<std::size_t> keep;
    for (std::size_t i = 1; i < d.n_rows(); ++i) keep.push_back(i);  // remove one 'no'
    const Dataset d_prime = d.select_rows(keep);

    const std::size_t trials = 100000;
    const std::size_t bins = 40;
    for (double eps : {1.0, 5.0}) {
        std::vector<std::size_t> hist_d(bins, 0), hist_dp(bins, 0);
        for (std::size_t t = 0; t < trials; ++t) {
            const auto m1 = fit_dp_marginal(d, eps, derive_seed(900 + eps, t));
            const auto m2 = fit_dp_marginal(d_prime, eps, derive_seed(990 + eps, t));
            const double p1 = dp_marginals(*m1)[0][0];
            const double p2 = dp_marginals(*m2)[0][0];
            ++hist_d[std::min(bins - 1, static_cast<std::size_t>(p1 * bins))];
            ++hist_dp[std::min(bins - 1, static_cast<std::size_t>(p2 * bins))];
        }
        const double bound = std::exp(eps);
        for (std::size_t b = 0; b < bins; ++b) {
            const double c1 = static_cast<double>(hist_d[b]);
            const double c2 = static_cast<double>(hist_dp[b]);
            if (c1 < 25.0 && c2 < 25.0) continue;  // too rare to resolve
            // 3-sigma slack in both directions of Definition 1
            expect(c1 - 3.0 * std::sqrt(c1) <= bound * (c2 + 3.0 * std::sqrt(c2)),
                   "bin " + std::to_string(b) + " violates e^eps bound (eps=" + fmt(eps) + ")");
            expect(c2 - 3.0 * std::sqrt(c2) <= bound * (c1 + 3.0 * std::sqrt(c1)),
                   "bin " + std::to_string(b) + " violates reverse bound (eps=" + fmt(eps) + ")");
        }
        note("eps=" + fmt(eps) + ": released histogram within e^eps envelope (100k trials)");
    }

    // independence of the sampled attributes: correlations vanish
    const auto data = make_mini_adult(2000, 1);
    auto [train, control, release] = split(data, 0.4, 0.3, 0.3, 7);
    const auto synth = fit_dp_marginal(train, 100.0, 77)->sample(4000, 78);
    auto corr = [&](std::size_t a, std::size_t b) {
        double ma = 0, mb = 0;
        const double n = static_cast<double>(synth.n_rows());
        for (std::size_t r = 0; r < synth.n_rows(); ++r) {
            ma += synth.at(r, a);
            mb += synth.at(r, b);
        }
        ma /= n;
        mb /= n;
        double cov = 0, va = 0, vb = 0;
        for (std::size_t r = 0; r < synth.n_rows(); ++r) {
            cov += (synth.at(r, a) - ma) * (synth.at(r, b) - mb);
            va += (synth.at(r, a) - ma) * (synth.at(r, a) - ma);
            vb += (synth.at(r, b) - mb) * (synth.at(r, b) - mb);
        }
        return cov / std::sqrt(va * vb);
    };
    const double c_edu_income = corr(2, 7);
    const double c_age_marital = corr(0, 3);
    expect(std::abs(c_edu_income) < 0.05, "education-income correlation " + fmt(c_edu_income));
    expect(std::abs(c_age_marital) < 0.05, "age-marital correlation " + fmt(c_age_marital));
    note("cross-attribute correlations: " + fmt(c_edu_income) + ", " + fmt(c_age_marital));

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    expect(secs < 180.0, "runtime " + fmt(secs) + "s exceeds 3 minutes");
}

void criterion_baselines() {
    expect(control_adjusted(0.5, 0.2, 1.0) == 0.375,
           "control_adjusted pin " + fmt(control_adjusted(0.5, 0.2, 1.0)));

    const auto data = make_mini_adult(2000, 1);
    auto [train, control, release] = split(data, 0.4, 0.3, 0.3, 7);

    auto attack_once = [](const Dataset& synth, std::span<const Cell> target,
                          std::size_t target_attr) {
        AuxSpec aux;
        for (std::size_t a = 0; a < synth.n_attrs(); ++a)
            if (a != target_attr) aux.quasi.push_back(a);
        aux.target = target_attr;
        Dataset targets = synth.select_rows({});
        targets.append_row(target);
        return aia_distance_eval(synth, targets, aux).estimate.successes == 1;
    };

    CanaryPlan plan;
    plan.n_canaries = 100;
    plan.target_attribute = 3;  // marital_status: 4 levels
    plan.seed = 5;

    CanaryPipeline copier = [&](const Dataset& train_prime, std::span<const Cell> target,
                                std::size_t target_attr, std::uint64_t) {
        return attack_once(train_prime, target, target_attr);
    };
    const auto copied = canary_baseline(train, copier, plan);
    expect(copied.canary_rate >= 0.99,
           "copier canary rate " + fmt(copied.canary_rate));
    note("copier canary rate = " + fmt(copied.canary_rate));

    CanaryPipeline shuffler = [&](const Dataset& train_prime, std::span<const Cell> target,
                                  std::size_t target_attr, std::uint64_t seed) {
        Dataset synth = train_prime.select_rows({});
        auto rng = make_rng(derive_seed(seed, "shuffle"));
        std::vector<std::size_t> perm(train_prime.n_rows());
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        for (std::size_t r = 0; r < train_prime.n_rows(); ++r) {
            std::vector<Cell> row(train_prime.row(r).begin(), train_prime.row(r).end());
            row[target_attr] = train_prime.at(perm[r], target_attr);
            synth.append_row(row);
        }
        return attack_once(synth, target, target_attr);
    };
    const auto shuffled = canary_baseline(train, shuffler, plan);
    const double base_rate = 0.25;  // uniform canary over 4 levels
    const double sigma = std::sqrt(base_rate * (1.0 - base_rate) / 100.0);
    expect(std::abs(shuffled.canary_rate - base_rate) <= 3.0 * sigma,
           "shuffler canary rate " + fmt(shuffled.canary_rate) + " outside 3 sigma of " +
               fmt(base_rate));
    expect(shuffled.train_rate > shuffled.canary_rate,
           "expected the unmodified-target rate to exceed the canary rate");
    note("shuffler canary rate = " + fmt(shuffled.canary_rate) + ", raw train rate = " +
         fmt(shuffled.train_rate) + " (base-rate inflation)");
}

void criterion_correlation() {
    const auto& report = leaky_report();
    const auto it = report.correlations.find("leaky");
    expect(it != report.correlations.end(), "missing leaky correlation matrix");
    const auto& cm = it->second;
    const std::vector<std::string> wanted = {"ims", "dcr", "gtcap", "linkability",
                                             "singling_out"};
    auto index_of = [&](const std::string& m) {
        for (std::size_t i = 0; i < cm.metrics.size(); ++i)
            if (cm.metrics[i] == m) return i;
        throw std::runtime_error("metric " + m + " missing from correlation matrix");
    };
    double weakest = 1.0;
    for (std::size_t i = 0; i < wanted.size(); ++i) {
        for (std::size_t j = i + 1; j < wanted.size(); ++j) {
            const double r = cm.at(index_of(wanted[i]), index_of(wanted[j]));
            weakest = std::min(weakest, r);
            expect(r > 0.9, wanted[i] + " vs " + wanted[j] + " correlation " + fmt(r));
        }
    }
    note("weakest pairwise correlation = " + fmt(weakest));
}

void criterion_bootstrap() {
    const auto data = make_mini_adult(2000, 1);
    auto [train, control, release] = split(data, 0.4, 0.3, 0.3, 7);
    const auto synth = leaky_release(train, release, 0.5, 99);

    IndicatorConfig icfg;
    icfg.seed = 11;
    const auto ims_ci = bootstrap_ci(
        [&](const Dataset& s) { return ims(train, s).value; }, synth, 1000, 0.95, 3);
    const auto dcr_ci = bootstrap_ci(
        [&](const Dataset& s) { return dcr(s, train, icfg).value; }, synth, 1000, 0.95, 4);
    expect(ims_ci.stdev < 0.02, "ims bootstrap stdev " + fmt(ims_ci.stdev));
    expect(dcr_ci.stdev < 0.02, "dcr bootstrap stdev " + fmt(dcr_ci.stdev));
    note("bootstrap stdevs at f_l=0.5: ims " + fmt(ims_ci.stdev) + ", dcr " + fmt(dcr_ci.stdev));

    // CI coverage of a mean-like metric over 200 independent draws
    std::size_t covered = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        Schema schema({{"x", AttrKind::Numeric, {}, {}, {}}});
        std::mt19937_64 rng(derive_seed(1000, t));
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<Cell> cells(100);
        for (auto& c : cells) c = gauss(rng);
        const Dataset sample(schema, std::move(cells));
        auto mean_metric = [](const Dataset& d) {
            double s = 0.0;
            for (std::size_t r = 0; r < d.n_rows(); ++r) s += d.at(r, 0);
            return s / static_cast<double>(d.n_rows());
        };
        const auto ci = bootstrap_ci(mean_metric, sample, 300, 0.95, derive_seed(2000, t));
        if (ci.ci_low <= 0.0 && 0.0 <= ci.ci_high) ++covered;
    }
    const double coverage = static_cast<double>(covered) / trials;
    expect(std::abs(coverage - 0.95) <= 0.04, "coverage " + fmt(coverage));
    note("95% CI coverage over 200 trials = " + fmt(coverage));
}

void criterion_oracles() {
    // nearest neighbors
    const auto a = embed(make_mini_adult(50, 301));
    const auto b = embed(make_mini_adult(40, 302), a.params);
    const auto nn = nearest_neighbors(b, a, 7);
    const auto nn_oracle = oracles::brute_nn(b, a, 7, false);
    for (std::size_t q = 0; q < b.rows; ++q)
        for (std::size_t j = 0; j < 7; ++j) {
            expect(nn.index(q, j) == nn_oracle.rows[q][j].second, "nn index mismatch");
            expect(nn.distance(q, j) == nn_oracle.rows[q][j].first, "nn distance mismatch");
        }

    // gower distance
    const auto table = make_mini_adult(50, 303);
    const auto ranges = GowerRanges::fit(table);
    std::vector<std::size_t> attrs(table.n_attrs());
    std::iota(attrs.begin(), attrs.end(), std::size_t{0});
    for (std::size_t i = 0; i < 50; ++i)
        for (std::size_t j = 0; j < 50; ++j) {
            const double fast =
                gower_distance(table.row(i), table.row(j), table.schema(), ranges);
            const double slow = oracles::brute_gower(table.row(i), table.row(j), table.schema(),
                                                     ranges.min, ranges.range, attrs);
            expect(fast == slow, "gower mismatch");
        }

    // lof
    const auto pts = embed(make_mini_adult(50, 304));
    const auto lof_fast = lof_scores(pts, 6);
    const auto lof_slow = oracles::brute_lof(pts, 6);
    for (std::size_t i = 0; i < lof_fast.size(); ++i)
        expect(lof_fast[i] == lof_slow[i], "lof mismatch at row " + std::to_string(i));

    // gtcap vs the Iverson-bracket evaluation
    const auto synth = make_mini_adult(45, 305);
    const auto truth = make_mini_adult(50, 306);
    std::vector<std::size_t> keys = {0, 1, 2, 3, 4, 5, 6};
    const auto params = ScalingParams::fit(synth);
    expect(gtcap(synth, truth, keys, 7, 0.1) ==
               oracles::brute_tcap(synth, truth, keys, 7, 0.1, params.mins, params.maxs),
           "gtcap mismatch");

    // singling-out outcomes re-evaluated directly
    AttackConfig cfg;
    cfg.n_attacks = 200;
    cfg.seed = 17;
    const auto train = make_mini_adult(50, 307);
    const auto control = make_mini_adult(50, 308);
    const auto res = singling_out_mia(synth, train, control, cfg);
    expect(!res.train_batch.guesses.empty(), "no singling-out guesses generated");
    for (std::size_t g = 0; g < res.train_batch.guesses.size(); ++g) {
        const auto& pred = res.train_batch.guesses[g];
        std::size_t hits = 0;
        for (std::size_t r = 0; r < train.n_rows(); ++r) {
            bool ok = true;
            for (const auto& c : pred) {
                const Cell v = train.at(r, c.attr);
                if (c.op == PredOp::Eq && v != c.value) ok = false;
                if (c.op == PredOp::Le && v > c.value) ok = false;
                if (c.op == PredOp::Ge && v < c.value) ok = false;
            }
            hits += ok;
        }
        expect((hits == 1) == (res.train_batch.outcomes[g] == 1), "singling-out outcome mismatch");
    }
    note("nn, gower, lof, gtcap and singling-out all match their oracles bit-exactly");
}

void criterion_utility() {
    const auto data = make_mini_adult(2000, 1);
    auto [train, control, release] = split(data, 0.4, 0.3, 0.3, 7);
    const LearnerSpec utility_learner{6, 25, 0.01};

    // verbatim copier: training rows resampled with replacement
    auto rng = make_rng(55);
    std::uniform_int_distribution<std::size_t> pick(0, train.n_rows() - 1);
    std::vector<std::size_t> rows(train.n_rows());
    for (auto& r : rows) r = pick(rng);
    const auto copier = train.select_rows(rows);
    const double acc_copy = mle_utility(train, copier, utility_learner, 3);
    expect(std::abs(acc_copy - 0.5) <= 0.05, "copier utility accuracy " + fmt(acc_copy));

    // constant junk far outside the support
    Dataset junk = train.select_rows({});
    std::vector<Cell> row(train.row(0).begin(), train.row(0).end());
    row[0] = 500.0;
    for (std::size_t i = 0; i < train.n_rows(); ++i) junk.append_row(row);
    const double acc_junk = mle_utility(train, junk, utility_learner, 3);
    expect(acc_junk >= 0.9, "junk accuracy " + fmt(acc_junk));

    // independent-marginals synthesizer on correlated data
    const auto dp_synth = fit_dp_marginal(train, 100.0, 7)->sample(train.n_rows(), 8);
    const double acc_dp = mle_utility(train, dp_synth, utility_learner, 3);
    expect(acc_dp >= 0.6, "dp accuracy " + fmt(acc_dp) + " not materially above 0.5");

    note("accuracies: copier " + fmt(acc_copy) + ", junk " + fmt(acc_junk) + ", dp " +
         fmt(acc_dp));
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();

    run_criterion(1, "leaky linearity and endpoints", criterion_leaky_linearity);
    run_criterion(2, "closest-record normalization pins", criterion_dcr_pins);
    run_criterion(3, "k=1 dominance and dcr identity", criterion_k_dominance);
    run_criterion(4, "attribution radius monotonicity", criterion_gtcap_radius);
    run_criterion(5, "overfit loss targeting and risk response", criterion_overfit_targeting);
    run_criterion(6, "differential privacy property and independence", criterion_dp_property);
    run_criterion(7, "control and canary baselines", criterion_baselines);
    run_criterion(8, "cross-metric correlation on the leaky grid", criterion_correlation);
    run_criterion(9, "bootstrap variance and coverage", criterion_bootstrap);
    run_criterion(10, "brute-force oracle equivalence", criterion_oracles);
    run_criterion(11, "distinguishability-based utility", criterion_utility);

    const double total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d of 11 criteria passed in %.1fs\n", 11 - g_failures, total);
    if (total >= 900.0) {
        std::printf("[FAIL] total runtime budget (15 minutes) exceeded\n");
        return 1;
    }
    return g_failures == 0 ? 0 : 1;
}
