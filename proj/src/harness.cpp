#include "synthrisk/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "synthrisk/baselines.hpp"
#include "synthrisk/csv.hpp"
#include "synthrisk/datasets.hpp"
#include "synthrisk/lof.hpp"
#include "synthrisk/rng.hpp"
#include "synthrisk/synthesizers.hpp"

namespace synthrisk {
namespace {

using nlohmann::json;

std::vector<std::size_t> resolve_names(const Schema& schema, const std::vector<std::string>& names) {
    std::vector<std::size_t> out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(schema.index_of(n));
    return out;
}

std::string format_level(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// One fitted risk level: the released synthetic data plus the set the
// generator actually saw (the attack target set) and the untouched control.
struct RiskContext {
    Dataset synth;
    Dataset members;
    Dataset control;
    double loss = std::numeric_limits<double>::quiet_NaN();       // overfit model only
    double loss_star = std::numeric_limits<double>::quiet_NaN();  // overfit model only
};

struct ResolvedAttrs {
    AuxSpec aia;
    std::vector<std::size_t> gtcap_keys;
    std::size_t gtcap_target = 0;
    std::pair<std::vector<std::size_t>, std::vector<std::size_t>> link_partition;
};

ResolvedAttrs resolve_attrs(const ExperimentConfig& cfg, const Schema& schema) {
    ResolvedAttrs r;

    std::size_t target;
    if (!cfg.aia_target.empty()) {
        target = schema.index_of(cfg.aia_target);
    } else {
        // Default: the last categorical attribute.
        std::optional<std::size_t> last;
        for (std::size_t a = 0; a < schema.size(); ++a)
            if (schema.at(a).kind == AttrKind::Categorical) last = a;
        if (!last) throw std::invalid_argument("config: no categorical attribute for aia target");
        target = *last;
    }
    r.aia.target = target;
    r.gtcap_target = target;

    if (!cfg.aia_quasi.empty()) {
        r.aia.quasi = resolve_names(schema, cfg.aia_quasi);
    } else {
        for (std::size_t a = 0; a < schema.size(); ++a)
            if (a != target) r.aia.quasi.push_back(a);
    }
    if (!cfg.gtcap_keys.empty()) {
        r.gtcap_keys = resolve_names(schema, cfg.gtcap_keys);
    } else {
        r.gtcap_keys = r.aia.quasi;
    }

    if (!cfg.link_first_half.empty()) {
        r.link_partition.first = resolve_names(schema, cfg.link_first_half);
        std::vector<bool> in_first(schema.size(), false);
        for (std::size_t a : r.link_partition.first) in_first[a] = true;
        for (std::size_t a = 0; a < schema.size(); ++a)
            if (!in_first[a]) r.link_partition.second.push_back(a);
    } else {
        const std::size_t half = (schema.size() + 1) / 2;
        for (std::size_t a = 0; a < schema.size(); ++a)
            (a < half ? r.link_partition.first : r.link_partition.second).push_back(a);
    }
    return r;
}

std::pair<Dataset, Dataset> split_halves(const Dataset& data, std::uint64_t seed) {
    const std::size_t half = data.n_rows() / 2;
    std::vector<std::size_t> idx(data.n_rows());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto rng = make_rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<std::size_t> h1(idx.begin(), idx.begin() + half);
    std::vector<std::size_t> h2(idx.begin() + half, idx.end());
    std::sort(h1.begin(), h1.end());
    std::sort(h2.begin(), h2.end());
    return {data.select_rows(h1), data.select_rows(h2)};
}

struct MetricOutcome {
    double train_value = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> control_value;  // counterpart for the baseline adjustment
};

MetricOutcome evaluate_metric(const std::string& name, const RiskContext& ctx,
                              const ExperimentConfig& cfg, const ResolvedAttrs& attrs,
                              std::uint64_t seed) {
    MetricOutcome out;
    if (name == "ims") {
        out.train_value = ims(ctx.members, ctx.synth).value;
        out.control_value = ims(ctx.control, ctx.synth).value;
    } else if (name == "dcr") {
        IndicatorConfig ic = cfg.indicator;
        out.train_value = dcr(ctx.synth, ctx.members, ic).value;
        out.control_value = dcr(ctx.synth, ctx.control, ic).value;
    } else if (name == "knn") {
        IndicatorConfig ic = cfg.indicator;
        out.train_value = knn_indicator(ctx.synth, ctx.members, ic).value;
        out.control_value = knn_indicator(ctx.synth, ctx.control, ic).value;
    } else if (name == "singling_out") {
        AttackConfig ac = cfg.attack;
        ac.seed = seed;
        const auto res = singling_out_mia(ctx.synth, ctx.members, ctx.control, ac);
        out.train_value = res.train.rate;
        out.control_value = res.control.rate;
    } else if (name == "domias") {
        auto [ref, nonmembers] = split_halves(ctx.control, derive_seed(seed, "domias-split"));
        auto rng = make_rng(derive_seed(seed, "domias-members"));
        const auto member_rows =
            sample_indices(ctx.members.n_rows(),
                           std::min(nonmembers.n_rows(), ctx.members.n_rows()), rng);
        out.train_value =
            domias_mia(ctx.synth, ref, ctx.members.select_rows(member_rows), nonmembers);
    } else if (name == "linkability") {
        const auto res = linkability_attack(ctx.synth, ctx.members, ctx.control,
                                            attrs.link_partition, cfg.attack.k_link,
                                            cfg.attack.n_attacks, seed);
        out.train_value = res.train.rate;
        out.control_value = res.control.rate;
    } else if (name == "aia_distance") {
        const auto res = aia_distance(ctx.synth, ctx.members, ctx.control, attrs.aia,
                                      cfg.attack.n_attacks, seed);
        out.train_value = res.train.score;
        out.control_value = res.control.score;
    } else if (name == "aia_ml") {
        const auto res = aia_ml(ctx.synth, ctx.members, ctx.control, attrs.aia, cfg.learner,
                                cfg.attack.n_attacks, seed);
        out.train_value = res.train.score;
        out.control_value = res.control.score;
    } else if (name == "gtcap") {
        out.train_value = gtcap(ctx.synth, ctx.members, attrs.gtcap_keys, attrs.gtcap_target,
                                cfg.attack.gtcap_radius);
        out.control_value = gtcap(ctx.synth, ctx.control, attrs.gtcap_keys, attrs.gtcap_target,
                                  cfg.attack.gtcap_radius);
    } else if (name == "mle_utility") {
        out.train_value = mle_utility(ctx.members, ctx.synth, cfg.utility_learner, seed);
    } else {
        throw std::invalid_argument("unknown metric '" + name + "'");
    }
    return out;
}

}  // namespace

std::pair<Dataset, Dataset> split_train_val(const Dataset& train, double val_fraction,
                                            std::uint64_t seed) {
    if (val_fraction <= 0.0 || val_fraction >= 1.0)
        throw std::invalid_argument("split_train_val: fraction outside (0,1)");
    const auto n_val = static_cast<std::size_t>(
        std::floor(val_fraction * static_cast<double>(train.n_rows())));
    if (n_val == 0 || n_val >= train.n_rows())
        throw std::invalid_argument("split_train_val: degenerate split");
    std::vector<std::size_t> idx(train.n_rows());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto rng = make_rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<std::size_t> val_rows(idx.begin(), idx.begin() + n_val);
    std::vector<std::size_t> fit_rows(idx.begin() + n_val, idx.end());
    std::sort(val_rows.begin(), val_rows.end());
    std::sort(fit_rows.begin(), fit_rows.end());
    return {train.select_rows(fit_rows), train.select_rows(val_rows)};
}

namespace {

struct ExperimentState {
    Dataset train, control, release;
    ResolvedAttrs attrs;
};

ExperimentState prepare_state(const ExperimentConfig& cfg, const Dataset& data) {
    ExperimentState st;
    auto [tr, co, re] = split(data, cfg.f_train, cfg.f_control, cfg.f_release, cfg.split_seed);
    st.train = std::move(tr);
    st.control = std::move(co);
    st.release = std::move(re);
    st.attrs = resolve_attrs(cfg, data.schema());
    return st;
}

RiskContext build_context(const ExperimentConfig& cfg, const ExperimentState& st,
                          const std::string& model, double level, const Dataset& train_override,
                          bool use_override) {
    const Dataset& train = use_override ? train_override : st.train;
    RiskContext ctx;
    ctx.control = st.control;
    const std::uint64_t seed =
        derive_seed(cfg.master_seed, model + ":" + format_level(level));

    if (model == "leaky") {
        ctx.synth = leaky_release(train, st.release, level, seed);
        ctx.members = train;
    } else if (model == "overfit") {
        auto [fit_part, val_part] =
            split_train_val(train, cfg.overfit_val_fraction,
                            derive_seed(cfg.master_seed, "overfit-val"));
        auto fitted = fit_to_overfit_ratio(fit_part, val_part, level);
        ctx.synth = fitted.model->sample(train.n_rows(), derive_seed(seed, "sample"));
        ctx.members = std::move(fit_part);
        ctx.loss = fitted.loss;
        ctx.loss_star = fitted.loss_star;
    } else if (model == "dp") {
        auto model_ptr = fit_dp_marginal(train, level, seed, cfg.dp_bins);
        ctx.synth = model_ptr->sample(train.n_rows(), derive_seed(seed, "sample"));
        ctx.members = train;
    } else {
        throw std::invalid_argument("unknown risk model '" + model + "'");
    }
    return ctx;
}

}  // namespace

Dataset load_experiment_dataset(const ExperimentConfig& cfg) {
    if (!cfg.dataset_path.empty()) return load_csv(cfg.dataset_path);
    if (cfg.dataset_builtin == "mini-adult")
        return make_mini_adult(cfg.builtin_rows, cfg.builtin_seed);
    if (!cfg.dataset_builtin.empty())
        throw std::invalid_argument("unknown builtin dataset '" + cfg.dataset_builtin + "'");
    throw std::invalid_argument("config: no dataset configured");
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    if (cfg.metrics.empty()) throw std::invalid_argument("no metrics configured");
    if (cfg.workers > 0) omp_set_num_threads(cfg.workers);

    const Dataset data = load_experiment_dataset(cfg);
    ExperimentState st = prepare_state(cfg, data);

    ExperimentReport report;
    report.config_echo = cfg.to_json();

    struct ModelGrid {
        std::string name;
        std::vector<double> levels;
    };
    std::vector<ModelGrid> grids;
    if (!cfg.leaky_levels.empty()) grids.push_back({"leaky", cfg.leaky_levels});
    if (!cfg.overfit_levels.empty()) grids.push_back({"overfit", cfg.overfit_levels});
    if (!cfg.dp_levels.empty()) grids.push_back({"dp", cfg.dp_levels});

    std::vector<std::string> metrics = cfg.metrics;
    if (cfg.utility &&
        std::find(metrics.begin(), metrics.end(), "mle_utility") == metrics.end())
        metrics.push_back("mle_utility");

    auto run_grid = [&](const std::string& model, const std::vector<double>& levels,
                        const std::function<RiskContext(double)>& make_ctx) {
        std::map<std::string, std::vector<double>> series;
        for (double level : levels) {
            RiskContext ctx;
            try {
                ctx = make_ctx(level);
            } catch (const std::exception& e) {
                for (const auto& m : metrics)
                    report.cells.push_back(
                        {model, level, m, 0, 0, 0, 0, false, 0, false, e.what()});
                continue;
            }
            if (!std::isnan(ctx.loss)) {
                report.cells.push_back({model, level, "validation_loss", ctx.loss, 0, 0, 0, false,
                                        0, false, ""});
                report.cells.push_back({model, level, "validation_loss_star", ctx.loss_star, 0, 0,
                                        0, false, 0, false, ""});
            }
            for (const auto& m : metrics) {
                const std::uint64_t seed =
                    derive_seed(cfg.master_seed, model + ":" + format_level(level) + ":" + m);
                ReportCell cell;
                cell.risk_model = model;
                cell.risk_value = level;
                cell.metric = m;
                const auto t0 = std::chrono::steady_clock::now();
                MetricOutcome outcome;
                try {
                    outcome = evaluate_metric(m, ctx, cfg, st.attrs, seed);
                } catch (const std::exception& e) {
                    cell.error = e.what();
                    report.cells.push_back(cell);
                    continue;
                }
                cell.runtime_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                cell.value = outcome.train_value;

                if (cfg.bootstrap_enabled &&
                    std::find(cfg.bootstrap_metrics.begin(), cfg.bootstrap_metrics.end(), m) !=
                        cfg.bootstrap_metrics.end()) {
                    const bool heavy = (m == "singling_out" || m == "gtcap");
                    const std::size_t resamples =
                        heavy ? cfg.bootstrap_resamples_heavy : cfg.bootstrap_resamples;
                    // Resample the synthetic release, keep the real sides fixed.
                    auto closure = [&](const Dataset& synth_resampled) {
                        RiskContext rctx{synth_resampled, ctx.members, ctx.control, ctx.loss,
                                         ctx.loss_star};
                        return evaluate_metric(m, rctx, cfg, st.attrs, seed).train_value;
                    };
                    const auto ci = bootstrap_ci(closure, ctx.synth, resamples,
                                                 cfg.bootstrap_confidence,
                                                 derive_seed(seed, "bootstrap"));
                    cell.ci_low = ci.ci_low;
                    cell.ci_high = ci.ci_high;
                    cell.stdev = ci.stdev;
                    cell.has_ci = true;
                }
                report.cells.push_back(cell);
                series[m].push_back(outcome.train_value);

                if (outcome.control_value) {
                    ReportCell adj = cell;
                    adj.control_adjusted = true;
                    adj.has_ci = false;
                    adj.ci_low = adj.ci_high = adj.stdev = 0.0;
                    try {
                        adj.value = control_adjusted(outcome.train_value, *outcome.control_value,
                                                     1.0);
                    } catch (const std::exception& e) {
                        adj.error = e.what();
                        adj.value = 0.0;
                    }
                    report.cells.push_back(adj);
                }
            }
        }
        std::map<std::string, std::vector<double>> complete;
        for (auto& [m, vals] : series)
            if (vals.size() == levels.size() && vals.size() >= 3) complete[m] = vals;
        if (complete.size() >= 2) report.correlations[model] = correlation_matrix(complete);
    };

    for (const auto& grid : grids)
        run_grid(grid.name, grid.levels, [&](double level) {
            return build_context(cfg, st, grid.name, level, st.train, false);
        });

    for (const auto& [label, path] : cfg.external_files) {
        auto make_ctx = [&](double) {
            RiskContext ctx;
            ctx.synth = load_external_synth(path, data.schema());
            ctx.members = st.train;
            ctx.control = st.control;
            return ctx;
        };
        run_grid("external:" + label, {0.0}, make_ctx);
    }

    return report;
}

BootstrapCi bootstrap_ci(const std::function<double(const Dataset&)>& metric,
                         const Dataset& base_data, std::size_t n_resamples, double confidence,
                         std::uint64_t seed) {
    if (n_resamples < 2) throw std::invalid_argument("bootstrap_ci: need >= 2 resamples");
    if (confidence <= 0.0 || confidence >= 1.0)
        throw std::invalid_argument("bootstrap_ci: confidence outside (0,1)");
    const std::size_t n = base_data.n_rows();
    if (n == 0) throw std::invalid_argument("bootstrap_ci: empty data");

    std::vector<double> values(n_resamples, std::numeric_limits<double>::quiet_NaN());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(n_resamples); ++i) {
        auto rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<std::size_t> rows(n);
        for (auto& r : rows) r = pick(rng);
        try {
            values[i] = metric(base_data.select_rows(rows));
        } catch (const std::exception&) {
            // left as NaN; counted below
        }
    }

    std::vector<double> ok;
    ok.reserve(n_resamples);
    for (double v : values)
        if (!std::isnan(v)) ok.push_back(v);
    if (ok.size() < 2) throw std::runtime_error("bootstrap_ci: too many resample failures");

    BootstrapCi out;
    out.n_completed = ok.size();
    out.mean = std::accumulate(ok.begin(), ok.end(), 0.0) / static_cast<double>(ok.size());
    double ss = 0.0;
    for (double v : ok) ss += (v - out.mean) * (v - out.mean);
    out.stdev = std::sqrt(ss / static_cast<double>(ok.size() - 1));
    const double tail = (1.0 - confidence) / 2.0 * 100.0;
    out.ci_low = percentile_linear(ok, tail);
    out.ci_high = percentile_linear(ok, 100.0 - tail);
    return out;
}

CorrelationMatrix correlation_matrix(const std::map<std::string, std::vector<double>>& series) {
    if (series.empty()) throw std::invalid_argument("correlation_matrix: no series");
    const std::size_t len = series.begin()->second.size();
    if (len < 3) throw std::invalid_argument("correlation_matrix: series shorter than 3");
    for (const auto& [name, vals] : series)
        if (vals.size() != len)
            throw std::invalid_argument("correlation_matrix: length mismatch for '" + name + "'");

    CorrelationMatrix cm;
    for (const auto& [name, vals] : series) cm.metrics.push_back(name);
    const std::size_t k = cm.metrics.size();
    cm.values.assign(k * k, 0.0);

    auto stats = [&](const std::vector<double>& v) {
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(len);
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        return std::pair<double, double>{mean, std::sqrt(ss)};
    };

    std::vector<const std::vector<double>*> cols;
    for (const auto& [name, vals] : series) cols.push_back(&vals);

    for (std::size_t i = 0; i < k; ++i) {
        const auto [mi, si] = stats(*cols[i]);
        for (std::size_t j = i; j < k; ++j) {
            double r;
            if (i == j) {
                r = 1.0;
            } else {
                const auto [mj, sj] = stats(*cols[j]);
                if (si < 1e-15 || sj < 1e-15) {
                    std::cerr << "warning: constant series in correlation matrix ("
                              << cm.metrics[i] << " vs " << cm.metrics[j] << ")\n";
                    r = 0.0;
                } else {
                    double cov = 0.0;
                    for (std::size_t t = 0; t < len; ++t)
                        cov += ((*cols[i])[t] - mi) * ((*cols[j])[t] - mj);
                    r = cov / (si * sj);
                }
            }
            cm.values[i * k + j] = r;
            cm.values[j * k + i] = r;
        }
    }
    return cm;
}

double mle_utility(const Dataset& real, const Dataset& synth, const LearnerSpec& learner,
                   std::uint64_t seed) {
    if (real.empty() || synth.empty()) throw std::invalid_argument("mle_utility: empty dataset");
    const std::size_t n = std::min(real.n_rows(), synth.n_rows());

    auto rng = make_rng(derive_seed(seed, "mle"));
    const auto rows_real = sample_indices(real.n_rows(), n, rng);
    const auto rows_synth = sample_indices(synth.n_rows(), n, rng);
    const Dataset sub_real = real.select_rows(rows_real);
    const Dataset sub_synth = synth.select_rows(rows_synth);

    const Dataset all = Dataset::concat(sub_real, sub_synth);
    const auto emb = embed(all, ScalingParams::fit(all));

    // Stratified 70/30: the first 70% of each class block trains, the rest tests.
    const auto n_train = static_cast<std::size_t>(std::floor(0.7 * static_cast<double>(n)));
    FeatureMatrix x_train, x_test;
    x_train.dims = x_test.dims = emb.dims;
    std::vector<std::size_t> y_train;
    std::vector<std::size_t> y_test;
    auto push = [&](FeatureMatrix& m, std::size_t row) {
        m.data.insert(m.data.end(), emb.row(row), emb.row(row) + emb.dims);
        ++m.rows;
    };
    for (std::size_t cls = 0; cls < 2; ++cls) {
        const std::size_t base = cls * n;
        for (std::size_t i = 0; i < n; ++i) {
            if (i < n_train) {
                push(x_train, base + i);
                y_train.push_back(cls);
            } else {
                push(x_test, base + i);
                y_test.push_back(cls);
            }
        }
    }

    const auto model = make_tree_classifier(x_train, y_train, 2, learner);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < x_test.rows; ++i)
        hits += static_cast<std::size_t>(model(x_test.row(i))) == y_test[i];
    return static_cast<double>(hits) / static_cast<double>(x_test.rows);
}

ExperimentReport outlier_robustness_protocol(const ExperimentConfig& cfg,
                                             const std::vector<double>& fractions,
                                             const std::vector<double>& f_o_levels) {
    if (cfg.metrics.empty()) throw std::invalid_argument("no metrics configured");
    if (cfg.workers > 0) omp_set_num_threads(cfg.workers);

    const Dataset data = load_experiment_dataset(cfg);
    ExperimentState st = prepare_state(cfg, data);

    ExperimentReport report;
    report.config_echo = cfg.to_json();

    for (double f_o : f_o_levels) {
        const std::string model = "outlier_fo=" + format_level(f_o);
        for (double fraction : fractions) {
            auto [kept, removed] = remove_outliers_lof(st.train, fraction, cfg.lof_k);
            RiskContext ctx;
            try {
                ctx = build_context(cfg, st, "overfit", f_o, kept, true);
            } catch (const std::exception& e) {
                for (const auto& m : cfg.metrics)
                    report.cells.push_back(
                        {model, fraction, m, 0, 0, 0, 0, false, 0, false, e.what()});
                continue;
            }
            for (const auto& m : cfg.metrics) {
                const std::uint64_t seed = derive_seed(
                    cfg.master_seed, "overfit:" + format_level(f_o) + ":" + m);
                ReportCell cell;
                cell.risk_model = model;
                cell.risk_value = fraction;
                cell.metric = m;
                const auto t0 = std::chrono::steady_clock::now();
                try {
                    cell.value = evaluate_metric(m, ctx, cfg, st.attrs, seed).train_value;
                } catch (const std::exception& e) {
                    cell.error = e.what();
                }
                cell.runtime_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                report.cells.push_back(cell);
            }
        }
    }
    return report;
}

ExperimentReport parameter_sweeps(const ExperimentConfig& cfg) {
    if (cfg.workers > 0) omp_set_num_threads(cfg.workers);
    const Dataset data = load_experiment_dataset(cfg);
    ExperimentState st = prepare_state(cfg, data);

    ExperimentReport report;
    report.config_echo = cfg.to_json();

    const std::string model = cfg.leaky_levels.empty() ? "overfit" : "leaky";
    const auto& levels = cfg.leaky_levels.empty() ? cfg.overfit_levels : cfg.leaky_levels;
    if (levels.empty()) throw std::invalid_argument("parameter_sweeps: no active risk grid");

    // Radius sweep attribution: numeric target over categorical keys so the
    // generalized matching is the only thing the radius changes.
    const Schema& schema = data.schema();
    std::size_t sweep_target;
    if (!cfg.sweep_gtcap_target.empty()) {
        sweep_target = schema.index_of(cfg.sweep_gtcap_target);
    } else {
        std::optional<std::size_t> first_numeric;
        for (std::size_t a = 0; a < schema.size() && !first_numeric; ++a)
            if (schema.at(a).kind == AttrKind::Numeric) first_numeric = a;
        sweep_target = first_numeric.value_or(st.attrs.gtcap_target);
    }
    std::vector<std::size_t> sweep_keys;
    if (!cfg.sweep_gtcap_keys.empty()) {
        sweep_keys = resolve_names(schema, cfg.sweep_gtcap_keys);
    } else {
        for (std::size_t a = 0; a < schema.size() && sweep_keys.size() < 3; ++a)
            if (schema.at(a).kind == AttrKind::Categorical && a != sweep_target)
                sweep_keys.push_back(a);
        if (sweep_keys.empty()) sweep_keys = st.attrs.gtcap_keys;
    }

    for (double level : levels) {
        const RiskContext ctx = build_context(cfg, st, model, level, st.train, false);
        for (std::size_t k : cfg.sweep_k_values) {
            ReportCell cell;
            cell.risk_model = model;
            cell.risk_value = level;
            cell.metric = "knn_k=" + std::to_string(k);
            IndicatorConfig ic = cfg.indicator;
            ic.k = k;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                cell.value = knn_indicator(ctx.synth, ctx.members, ic).value;
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
            cell.runtime_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            report.cells.push_back(cell);
        }
        for (double radius : cfg.sweep_radii) {
            ReportCell cell;
            cell.risk_model = model;
            cell.risk_value = level;
            cell.metric = "gtcap_r=" + format_level(radius);
            const auto t0 = std::chrono::steady_clock::now();
            try {
                cell.value = gtcap(ctx.synth, ctx.members, sweep_keys, sweep_target, radius);
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
            cell.runtime_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            report.cells.push_back(cell);
        }
    }
    return report;
}

std::vector<double> ExperimentReport::series(const std::string& risk_model,
                                             const std::string& metric) const {
    std::vector<std::pair<double, double>> pts;
    for (const auto& c : cells)
        if (c.risk_model == risk_model && c.metric == metric && !c.control_adjusted &&
            c.error.empty())
            pts.emplace_back(c.risk_value, c.value);
    std::stable_sort(pts.begin(), pts.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> out;
    for (const auto& [lvl, v] : pts) out.push_back(v);
    return out;
}

const ReportCell* ExperimentReport::find(const std::string& risk_model, double risk_value,
                                         const std::string& metric, bool adjusted) const {
    for (const auto& c : cells)
        if (c.risk_model == risk_model && c.metric == metric &&
            c.control_adjusted == adjusted && std::abs(c.risk_value - risk_value) < 1e-12)
            return &c;
    return nullptr;
}

std::vector<std::string> write_report(const ExperimentReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    fs::create_directories(fs::path(out_dir) / "plotdata");
    std::vector<std::string> paths;

    auto sanitize = [](std::string s) {
        for (char& c : s)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-') c = '_';
        return s;
    };

    {
        const auto path = (fs::path(out_dir) / "results.csv").string();
        std::ofstream out(path);
        out << "risk_model,risk_value,metric,value,ci_low,ci_high,stdev,runtime_seconds,"
               "control_adjusted,error\n";
        out.precision(12);
        for (const auto& c : report.cells) {
            out << c.risk_model << ',' << c.risk_value << ',' << c.metric << ',' << c.value << ','
                << (c.has_ci ? std::to_string(c.ci_low) : "") << ','
                << (c.has_ci ? std::to_string(c.ci_high) : "") << ','
                << (c.has_ci ? std::to_string(c.stdev) : "") << ',' << c.runtime_seconds << ','
                << (c.control_adjusted ? 1 : 0) << ',' << c.error << '\n';
        }
        if (!out) throw std::runtime_error("write_report: cannot write " + path);
        paths.push_back(path);
    }

    {
        const auto path = (fs::path(out_dir) / "correlations.json").string();
        json j;
        for (const auto& [model, cm] : report.correlations) {
            json m;
            m["metrics"] = cm.metrics;
            const std::size_t k = cm.metrics.size();
            std::vector<std::vector<double>> rows(k, std::vector<double>(k));
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t c = 0; c < k; ++c) rows[i][c] = cm.at(i, c);
            m["matrix"] = rows;
            j[model] = m;
        }
        std::ofstream out(path);
        out << j.dump(2) << '\n';
        paths.push_back(path);
    }

    {
        const auto path = (fs::path(out_dir) / "config_echo.json").string();
        std::ofstream out(path);
        out << report.config_echo << '\n';
        paths.push_back(path);
    }

    // One series file per (model, metric) of raw cells for external plotting.
    std::map<std::pair<std::string, std::string>, std::vector<const ReportCell*>> groups;
    for (const auto& c : report.cells)
        if (!c.control_adjusted && c.error.empty()) groups[{c.risk_model, c.metric}].push_back(&c);
    for (const auto& [key, cells] : groups) {
        const auto path = (fs::path(out_dir) / "plotdata" /
                           (sanitize(key.first) + "__" + sanitize(key.second) + ".csv"))
                              .string();
        std::ofstream out(path);
        out << "risk_value,value,ci_low,ci_high\n";
        out.precision(12);
        auto sorted = cells;
        std::stable_sort(sorted.begin(), sorted.end(),
                         [](const ReportCell* a, const ReportCell* b) {
                             return a->risk_value < b->risk_value;
                         });
        for (const auto* c : sorted) {
            out << c->risk_value << ',' << c->value << ',';
            if (c->has_ci)
                out << c->ci_low << ',' << c->ci_high;
            else
                out << ',';
            out << '\n';
        }
        paths.push_back(path);
    }
    return paths;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    const json j = json::parse(text);
    ExperimentConfig cfg;

    if (j.contains("dataset")) {
        const auto& d = j.at("dataset");
        cfg.dataset_path = d.value("path", std::string{});
        cfg.dataset_builtin = d.value("builtin", std::string{});
        cfg.builtin_rows = d.value("rows", std::size_t{2000});
        cfg.builtin_seed = d.value("seed", std::uint64_t{1});
    }
    if (j.contains("split")) {
        const auto& s = j.at("split");
        cfg.f_train = s.value("train", 0.4);
        cfg.f_control = s.value("control", 0.3);
        cfg.f_release = s.value("release", 0.3);
        cfg.split_seed = s.value("seed", std::uint64_t{7});
    }
    if (j.contains("risk_models")) {
        const auto& r = j.at("risk_models");
        if (r.contains("leaky")) cfg.leaky_levels = r.at("leaky").value("levels", cfg.leaky_levels);
        if (r.contains("overfit")) {
            cfg.overfit_levels = r.at("overfit").value("levels", cfg.overfit_levels);
            cfg.overfit_val_fraction = r.at("overfit").value("val_fraction", 0.2);
        }
        if (r.contains("dp")) {
            cfg.dp_levels = r.at("dp").value("levels", cfg.dp_levels);
            cfg.dp_bins = r.at("dp").value("bins", std::size_t{16});
        }
        if (r.contains("external"))
            for (const auto& [label, path] : r.at("external").items())
                cfg.external_files[label] = path.get<std::string>();
    }
    cfg.metrics = j.value("metrics", std::vector<std::string>{"ims", "dcr", "singling_out",
                                                              "domias", "linkability",
                                                              "aia_distance", "aia_ml", "gtcap"});
    if (j.contains("indicator")) {
        const auto& i = j.at("indicator");
        cfg.indicator.alpha_percent = i.value("alpha_percent", 2.0);
        cfg.indicator.k = i.value("k", std::size_t{1});
        cfg.indicator.seed = i.value("seed", std::uint64_t{0});
    }
    if (j.contains("attack")) {
        const auto& a = j.at("attack");
        cfg.attack.n_attacks = a.value("n_attacks", std::size_t{2000});
        cfg.attack.attr_count_min = a.value("attr_count_min", std::size_t{3});
        cfg.attack.attr_count_max = a.value("attr_count_max", std::size_t{12});
        cfg.attack.k_link = a.value("k_link", std::size_t{1});
        cfg.attack.gtcap_radius = a.value("gtcap_radius", 0.1);
        cfg.aia_target = a.value("aia_target", std::string{});
        cfg.aia_quasi = a.value("aia_quasi", std::vector<std::string>{});
        cfg.gtcap_keys = a.value("gtcap_keys", std::vector<std::string>{});
        cfg.link_first_half = a.value("link_first_half", std::vector<std::string>{});
    }
    if (j.contains("bootstrap")) {
        const auto& b = j.at("bootstrap");
        cfg.bootstrap_enabled = b.value("enabled", true);
        cfg.bootstrap_resamples = b.value("n_resamples", std::size_t{1000});
        cfg.bootstrap_resamples_heavy = b.value("n_resamples_heavy", std::size_t{10});
        cfg.bootstrap_confidence = b.value("confidence", 0.95);
        cfg.bootstrap_metrics = b.value("metrics", std::vector<std::string>{"ims", "dcr"});
    }
    cfg.outlier_fractions = j.value("outlier_fractions", cfg.outlier_fractions);
    cfg.lof_k = j.value("lof_k", std::size_t{20});
    if (j.contains("sweeps")) {
        cfg.sweep_k_values = j.at("sweeps").value("k_values", cfg.sweep_k_values);
        cfg.sweep_radii = j.at("sweeps").value("radii", cfg.sweep_radii);
        cfg.sweep_gtcap_target = j.at("sweeps").value("gtcap_target", std::string{});
        cfg.sweep_gtcap_keys = j.at("sweeps").value("gtcap_keys", std::vector<std::string>{});
    }
    cfg.utility = j.value("utility", false);
    if (j.contains("learner")) {
        cfg.learner.max_depth = j.at("learner").value("max_depth", std::size_t{8});
        cfg.learner.min_leaf = j.at("learner").value("min_leaf", std::size_t{5});
    }
    if (j.contains("utility_learner")) {
        cfg.utility_learner.max_depth = j.at("utility_learner").value("max_depth", std::size_t{6});
        cfg.utility_learner.min_leaf = j.at("utility_learner").value("min_leaf", std::size_t{25});
        cfg.utility_learner.min_gain = j.at("utility_learner").value("min_gain", 0.01);
    }
    cfg.workers = j.value("workers", 0);
    cfg.master_seed = j.value("seed", std::uint64_t{42});
    return cfg;
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["dataset"] = {{"path", dataset_path},
                    {"builtin", dataset_builtin},
                    {"rows", builtin_rows},
                    {"seed", builtin_seed}};
    j["split"] = {{"train", f_train},
                  {"control", f_control},
                  {"release", f_release},
                  {"seed", split_seed}};
    json risk;
    if (!leaky_levels.empty()) risk["leaky"] = {{"levels", leaky_levels}};
    if (!overfit_levels.empty())
        risk["overfit"] = {{"levels", overfit_levels}, {"val_fraction", overfit_val_fraction}};
    if (!dp_levels.empty()) risk["dp"] = {{"levels", dp_levels}, {"bins", dp_bins}};
    if (!external_files.empty()) risk["external"] = external_files;
    j["risk_models"] = risk;
    j["metrics"] = metrics;
    j["indicator"] = {{"alpha_percent", indicator.alpha_percent},
                      {"k", indicator.k},
                      {"seed", indicator.seed}};
    j["attack"] = {{"n_attacks", attack.n_attacks},
                   {"attr_count_min", attack.attr_count_min},
                   {"attr_count_max", attack.attr_count_max},
                   {"k_link", attack.k_link},
                   {"gtcap_radius", attack.gtcap_radius},
                   {"aia_target", aia_target},
                   {"aia_quasi", aia_quasi},
                   {"gtcap_keys", gtcap_keys},
                   {"link_first_half", link_first_half}};
    j["bootstrap"] = {{"enabled", bootstrap_enabled},
                      {"n_resamples", bootstrap_resamples},
                      {"n_resamples_heavy", bootstrap_resamples_heavy},
                      {"confidence", bootstrap_confidence},
                      {"metrics", bootstrap_metrics}};
    j["outlier_fractions"] = outlier_fractions;
    j["lof_k"] = lof_k;
    j["sweeps"] = {{"k_values", sweep_k_values},
                   {"radii", sweep_radii},
                   {"gtcap_target", sweep_gtcap_target},
                   {"gtcap_keys", sweep_gtcap_keys}};
    j["utility"] = utility;
    j["learner"] = {{"max_depth", learner.max_depth}, {"min_leaf", learner.min_leaf}};
    j["utility_learner"] = {{"max_depth", utility_learner.max_depth},
                            {"min_leaf", utility_learner.min_leaf},
                            {"min_gain", utility_learner.min_gain}};
    j["workers"] = workers;
    j["seed"] = master_seed;
    return j.dump(2);
}

}  // namespace synthrisk
