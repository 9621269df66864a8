#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "synthrisk/attacks.hpp"
#include "synthrisk/csv.hpp"
#include "synthrisk/datasets.hpp"
#include "synthrisk/harness.hpp"
#include "synthrisk/indicators.hpp"
#include "synthrisk/synthesizers.hpp"

using namespace synthrisk;
using nlohmann::json;

namespace {

Dataset load_input(const std::string& path) {
    if (path == "mini-adult") return make_mini_adult(2000, 1);
    return load_csv(path);
}

std::vector<std::size_t> parse_attr_list(const Schema& schema, const std::string& csv_names) {
    std::vector<std::size_t> out;
    std::stringstream ss(csv_names);
    std::string name;
    while (std::getline(ss, name, ',')) out.push_back(schema.index_of(name));
    return out;
}

json risk_json(const std::string& attack, const json& params, const RiskEstimate& train,
               const RiskEstimate& control) {
    return json{{"attack", attack},        {"params", params},
                {"r", train.rate},         {"delta_r", train.half_width},
                {"n", train.n},            {"control_r", control.rate},
                {"control_delta_r", control.half_width}};
}

int run_inspect(const std::string& input) {
    const auto data = load_input(input);
    json cols = json::array();
    for (const auto& a : data.schema().attributes()) {
        json c{{"name", a.name},
               {"kind", a.kind == AttrKind::Numeric ? "numeric" : "categorical"}};
        if (a.kind == AttrKind::Categorical) c["levels"] = a.vocabulary.size();
        cols.push_back(c);
    }
    std::cout << json{{"rows", data.n_rows()}, {"attributes", cols}}.dump() << "\n";
    std::cerr << input << ": " << data.n_rows() << " rows, " << data.n_attrs() << " attributes\n";
    return 0;
}

int run_split(const std::string& input, const std::string& out_dir, double f_train,
              double f_control, double f_release, std::uint64_t seed) {
    const auto data = load_input(input);
    auto [train, control, release] = split(data, f_train, f_control, f_release, seed);
    std::filesystem::create_directories(out_dir);
    save_csv(train, out_dir + "/train.csv");
    save_csv(control, out_dir + "/control.csv");
    save_csv(release, out_dir + "/release.csv");
    std::cout << json{{"train", train.n_rows()},
                      {"control", control.n_rows()},
                      {"release", release.n_rows()},
                      {"out_dir", out_dir}}
                     .dump()
              << "\n";
    return 0;
}

int run_synth(const std::string& kind, double param, const std::string& train_path,
              const std::string& release_path, std::size_t n, std::uint64_t seed,
              const std::string& out) {
    const auto train = load_input(train_path);
    Dataset synth;
    if (kind == "leaky") {
        if (release_path.empty()) throw std::runtime_error("leaky synth needs --release");
        const auto release = load_external_synth(release_path, train.schema());
        synth = leaky_release(train, release, param, seed);
    } else if (kind == "kernel") {
        synth = fit_kernel_synth(train, param)->sample(n ? n : train.n_rows(), seed);
    } else if (kind == "dp") {
        synth = fit_dp_marginal(train, param, seed)->sample(n ? n : train.n_rows(), seed + 1);
    } else {
        throw CLI::ValidationError("--kind must be kernel, dp or leaky");
    }
    save_csv(synth, out);
    std::cout << json{{"kind", kind}, {"param", param}, {"rows", synth.n_rows()}, {"out", out}}
                     .dump()
              << "\n";
    return 0;
}

int run_metric(const std::string& name, const std::string& real_path,
               const std::string& synth_path, double alpha, std::size_t k, std::uint64_t seed) {
    const auto real = load_input(real_path);
    const auto synth = load_external_synth(synth_path, real.schema());
    IndicatorConfig cfg;
    cfg.alpha_percent = alpha;
    cfg.k = k;
    cfg.seed = seed;

    IndicatorScore score;
    if (name == "ims")
        score = ims(real, synth);
    else if (name == "dcr")
        score = dcr(synth, real, cfg);
    else if (name == "knn")
        score = knn_indicator(synth, real, cfg);
    else
        throw CLI::ValidationError("--name must be ims, dcr or knn");

    std::cout << json{{"metric", name},
                      {"value", score.value},
                      {"raw_numerator", score.raw_numerator},
                      {"raw_denominator", score.raw_denominator},
                      {"threshold", score.threshold}}
                     .dump()
              << "\n";
    return 0;
}

int run_attack(const std::string& name, const std::string& synth_path,
               const std::string& train_path, const std::string& control_path,
               std::size_t n_attacks, std::uint64_t seed, std::size_t k, double radius,
               const std::string& target_name, const std::string& quasi_names,
               const std::string& a1_names) {
    const auto train = load_input(train_path);
    const auto control = load_external_synth(control_path, train.schema());
    const auto synth = load_external_synth(synth_path, train.schema());
    const auto& schema = train.schema();

    auto resolve_target = [&]() -> std::size_t {
        if (!target_name.empty()) return schema.index_of(target_name);
        std::size_t last = schema.size();
        for (std::size_t a = 0; a < schema.size(); ++a)
            if (schema.at(a).kind == AttrKind::Categorical) last = a;
        if (last == schema.size()) throw std::runtime_error("no categorical target available");
        return last;
    };
    auto resolve_quasi = [&](std::size_t target) {
        if (!quasi_names.empty()) return parse_attr_list(schema, quasi_names);
        std::vector<std::size_t> q;
        for (std::size_t a = 0; a < schema.size(); ++a)
            if (a != target) q.push_back(a);
        return q;
    };

    json out;
    if (name == "singling-out") {
        AttackConfig cfg;
        cfg.n_attacks = n_attacks;
        cfg.seed = seed;
        const auto res = singling_out_mia(synth, train, control, cfg);
        out = risk_json(name, {{"n_attacks", n_attacks}, {"best_pass", res.best_pass}}, res.train,
                        res.control);
    } else if (name == "domias") {
        const std::size_t half = control.n_rows() / 2;
        std::vector<std::size_t> ref_rows, non_rows;
        for (std::size_t r = 0; r < half; ++r) ref_rows.push_back(r);
        for (std::size_t r = half; r < control.n_rows(); ++r) non_rows.push_back(r);
        std::vector<std::size_t> member_rows;
        for (std::size_t r = 0; r < std::min(non_rows.size(), train.n_rows()); ++r)
            member_rows.push_back(r);
        const double score =
            domias_mia(synth, control.select_rows(ref_rows), train.select_rows(member_rows),
                       control.select_rows(non_rows));
        out = json{{"attack", name}, {"score", score}, {"n", member_rows.size() + non_rows.size()}};
    } else if (name == "linkability") {
        std::pair<std::vector<std::size_t>, std::vector<std::size_t>> partition;
        if (!a1_names.empty()) {
            partition.first = parse_attr_list(schema, a1_names);
            std::vector<bool> used(schema.size(), false);
            for (std::size_t a : partition.first) used[a] = true;
            for (std::size_t a = 0; a < schema.size(); ++a)
                if (!used[a]) partition.second.push_back(a);
        } else {
            const std::size_t half = (schema.size() + 1) / 2;
            for (std::size_t a = 0; a < schema.size(); ++a)
                (a < half ? partition.first : partition.second).push_back(a);
        }
        const auto res = linkability_attack(synth, train, control, partition, k, n_attacks, seed);
        out = risk_json(name, {{"k", k}, {"n_attacks", n_attacks}}, res.train, res.control);
    } else if (name == "aia-distance") {
        AuxSpec aux;
        aux.target = resolve_target();
        aux.quasi = resolve_quasi(aux.target);
        const auto res = aia_distance(synth, train, control, aux, n_attacks, seed);
        out = risk_json(name, {{"target", schema.at(aux.target).name}}, res.train.estimate,
                        res.control.estimate);
        out["score"] = res.train.score;
        out["control_score"] = res.control.score;
    } else if (name == "aia-ml") {
        AuxSpec aux;
        aux.target = resolve_target();
        aux.quasi = resolve_quasi(aux.target);
        const auto res = aia_ml(synth, train, control, aux, {}, n_attacks, seed);
        out = json{{"attack", name},
                   {"params", {{"target", schema.at(aux.target).name}}},
                   {"r", res.train.score},
                   {"delta_r", res.train.is_rate ? res.train.estimate.half_width : 0.0},
                   {"n", res.train.n},
                   {"control_r", res.control.score},
                   {"control_delta_r",
                    res.control.is_rate ? res.control.estimate.half_width : 0.0}};
    } else if (name == "gtcap") {
        const std::size_t target = resolve_target();
        const auto keys = resolve_quasi(target);
        const double train_score = gtcap(synth, train, keys, target, radius);
        const double control_score = gtcap(synth, control, keys, target, radius);
        out = json{{"attack", name},
                   {"params", {{"radius", radius}, {"target", schema.at(target).name}}},
                   {"r", train_score},
                   {"delta_r", 0.0},
                   {"n", synth.n_rows()},
                   {"control_r", control_score},
                   {"control_delta_r", 0.0}};
    } else {
        throw CLI::ValidationError(
            "--name must be one of singling-out, domias, linkability, aia-distance, aia-ml, gtcap");
    }
    std::cout << out.dump() << "\n";
    return 0;
}

int run_experiment_cmd(const std::string& config_path, const std::string& out_dir, int workers) {
    auto cfg = ExperimentConfig::from_json_file(config_path);
    if (workers > 0) cfg.workers = workers;
    const auto report = run_experiment(cfg);
    write_report(report, out_dir);
    std::size_t failed = 0;
    for (const auto& c : report.cells)
        if (!c.error.empty()) ++failed;
    std::cout << json{{"cells", report.cells.size()},
                      {"failed_cells", failed},
                      {"out_dir", out_dir}}
                     .dump()
              << "\n";
    for (const auto& c : report.cells)
        if (!c.error.empty())
            std::cerr << "cell error: " << c.risk_model << "/" << c.metric << ": " << c.error
                      << "\n";
    return 0;
}

int run_sweep(const std::string& config_path, const std::string& out_dir, bool outliers,
              int workers) {
    auto cfg = ExperimentConfig::from_json_file(config_path);
    if (workers > 0) cfg.workers = workers;
    auto report = parameter_sweeps(cfg);
    if (outliers) {
        const auto extra = outlier_robustness_protocol(cfg, cfg.outlier_fractions);
        report.cells.insert(report.cells.end(), extra.cells.begin(), extra.cells.end());
    }
    write_report(report, out_dir);
    std::cout << json{{"cells", report.cells.size()}, {"out_dir", out_dir}}.dump() << "\n";
    return 0;
}

int run_report(const std::string& results_path, const std::string& out_dir) {
    std::ifstream in(results_path);
    if (!in) throw std::runtime_error("cannot open '" + results_path + "'");
    std::string line;
    std::getline(in, line);  // header
    ExperimentReport report;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() < 9) throw std::runtime_error("malformed results row: " + line);
        ReportCell cell;
        cell.risk_model = fields[0];
        cell.risk_value = std::stod(fields[1]);
        cell.metric = fields[2];
        cell.value = std::stod(fields[3]);
        cell.has_ci = !fields[4].empty();
        if (cell.has_ci) {
            cell.ci_low = std::stod(fields[4]);
            cell.ci_high = std::stod(fields[5]);
            cell.stdev = std::stod(fields[6]);
        }
        cell.runtime_seconds = std::stod(fields[7]);
        cell.control_adjusted = fields[8] == "1";
        if (fields.size() > 9) cell.error = fields[9];
        report.cells.push_back(cell);
    }
    report.config_echo = json{{"rerendered_from", results_path}}.dump();
    write_report(report, out_dir);
    std::cout << json{{"cells", report.cells.size()}, {"out_dir", out_dir}}.dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthrisk: privacy risk quantification for tabular synthetic data"};
    app.require_subcommand(1);

    if (const char* env = std::getenv("SYNTHRISK_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) omp_set_num_threads(w);
    }

    std::string input, out_dir = "out", out_file, config_path, results_path;
    std::string name, kind, train_path, release_path, control_path, synth_path;
    std::string target_name, quasi_names, a1_names;
    double param = 0.0, alpha = 2.0, radius = 0.1;
    double f_train = 0.4, f_control = 0.3, f_release = 0.3;
    std::size_t n = 0, n_attacks = 2000, k = 1;
    std::uint64_t seed = 0;
    int workers = 0;
    bool outliers = false;

    auto* inspect = app.add_subcommand("inspect", "print a schema summary of a csv");
    inspect->add_option("input", input, "csv path (or 'mini-adult')")->required();

    auto* split_cmd = app.add_subcommand("split", "write train/control/release csv files");
    split_cmd->add_option("--input", input)->required();
    split_cmd->add_option("--out-dir", out_dir);
    split_cmd->add_option("--train", f_train);
    split_cmd->add_option("--control", f_control);
    split_cmd->add_option("--release", f_release);
    split_cmd->add_option("--seed", seed);

    auto* synth_cmd = app.add_subcommand("synth", "fit a generator and write synthetic csv");
    synth_cmd->add_option("--kind", kind, "kernel | dp | leaky")->required();
    synth_cmd->add_option("--param", param, "bandwidth h, epsilon, or leak fraction f_l")
        ->required();
    synth_cmd->add_option("--train", train_path)->required();
    synth_cmd->add_option("--release", release_path, "release csv (leaky only)");
    synth_cmd->add_option("--n", n, "rows to sample (default |train|)");
    synth_cmd->add_option("--seed", seed);
    synth_cmd->add_option("--out", out_file)->required();

    auto* metric_cmd = app.add_subcommand("metric", "evaluate a statistical indicator");
    metric_cmd->add_option("--name", name, "ims | dcr | knn")->required();
    metric_cmd->add_option("--real", train_path)->required();
    metric_cmd->add_option("--synth", synth_path)->required();
    metric_cmd->add_option("--alpha", alpha);
    metric_cmd->add_option("--k", k);
    metric_cmd->add_option("--seed", seed);

    auto* attack_cmd = app.add_subcommand("attack", "run an attack simulation");
    attack_cmd
        ->add_option("--name", name,
                     "singling-out | domias | linkability | aia-distance | aia-ml | gtcap")
        ->required();
    attack_cmd->add_option("--synth", synth_path)->required();
    attack_cmd->add_option("--train", train_path)->required();
    attack_cmd->add_option("--control", control_path)->required();
    attack_cmd->add_option("--n-attacks", n_attacks);
    attack_cmd->add_option("--seed", seed);
    attack_cmd->add_option("--k", k, "neighbors (linkability)");
    attack_cmd->add_option("--radius", radius, "gtcap radius");
    attack_cmd->add_option("--target", target_name, "target attribute name");
    attack_cmd->add_option("--quasi", quasi_names, "comma-separated quasi-identifiers");
    attack_cmd->add_option("--a1", a1_names, "comma-separated first attribute half (linkability)");

    auto* exp_cmd = app.add_subcommand("experiment", "run the full assessment from a json config");
    exp_cmd->add_option("--config", config_path)->required();
    exp_cmd->add_option("--out", out_dir);
    exp_cmd->add_option("--workers", workers);

    auto* sweep_cmd = app.add_subcommand("sweep", "k and radius parameter sweeps");
    sweep_cmd->add_option("--config", config_path)->required();
    sweep_cmd->add_option("--out", out_dir);
    sweep_cmd->add_flag("--outliers", outliers, "also run the outlier-removal protocol");
    sweep_cmd->add_option("--workers", workers);

    auto* report_cmd = app.add_subcommand("report", "re-render plotdata from a results.csv");
    report_cmd->add_option("--results", results_path)->required();
    report_cmd->add_option("--out", out_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // usage error
    }

    try {
        if (inspect->parsed()) return run_inspect(input);
        if (split_cmd->parsed())
            return run_split(input, out_dir, f_train, f_control, f_release, seed);
        if (synth_cmd->parsed())
            return run_synth(kind, param, train_path, release_path, n, seed, out_file);
        if (metric_cmd->parsed()) return run_metric(name, train_path, synth_path, alpha, k, seed);
        if (attack_cmd->parsed())
            return run_attack(name, synth_path, train_path, control_path, n_attacks, seed, k,
                              radius, target_name, quasi_names, a1_names);
        if (exp_cmd->parsed()) return run_experiment_cmd(config_path, out_dir, workers);
        if (sweep_cmd->parsed()) return run_sweep(config_path, out_dir, outliers, workers);
        if (report_cmd->parsed()) return run_report(results_path, out_dir);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
