#include "synthrisk/synthesizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "json.hpp"
#include "synthrisk/embedding.hpp"
#include "synthrisk/rng.hpp"

namespace synthrisk {
namespace {

// Lower bandwidth bound shared by the loss shift and the overfit search; the
// shift -(d/2)*log(2*pi*h_lo^2) makes the reported loss non-negative for any
// bandwidth above it.
constexpr double kBandwidthFloor = 1e-6;

double laplace_draw(double scale, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const double v = u(rng);
    return -scale * (v < 0 ? -1.0 : 1.0) * std::log(1.0 - 2.0 * std::abs(v));
}

std::size_t draw_from(const std::vector<double>& probs, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double r = u(rng);
    for (std::size_t i = 0; i < probs.size(); ++i) {
        r -= probs[i];
        if (r <= 0.0) return i;
    }
    return probs.size() - 1;
}

// Shifted mean NLL of a uniform-bandwidth Gaussian KDE given the squared
// distances from each validation row to every kernel center:
//   mean_i[-logsumexp_j(-D_ij / (2 h^2))] + log(n) + d * log(h / h_lo)
double kde_loss_from_distances(const std::vector<double>& sq_dist, std::size_t n_val,
                               std::size_t n_train, std::size_t dims, double h) {
    const double inv = 1.0 / (2.0 * h * h);
    double total = 0.0;
    for (std::size_t i = 0; i < n_val; ++i) {
        const double* row = sq_dist.data() + i * n_train;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n_train; ++j) best = std::max(best, -row[j] * inv);
        double acc = 0.0;
        for (std::size_t j = 0; j < n_train; ++j) acc += std::exp(-row[j] * inv - best);
        total += -(best + std::log(acc));
    }
    return total / static_cast<double>(n_val) + std::log(static_cast<double>(n_train)) +
           static_cast<double>(dims) * std::log(h / kBandwidthFloor);
}

std::vector<double> pairwise_sq_distances(const EmbeddedMatrix& a, const EmbeddedMatrix& b) {
    std::vector<double> d(a.rows * b.rows);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(a.rows); ++i) {
        const double* pa = a.row(i);
        for (std::size_t j = 0; j < b.rows; ++j) {
            const double* pb = b.row(j);
            double s = 0.0;
            for (std::size_t k = 0; k < a.dims; ++k) {
                const double diff = pa[k] - pb[k];
                s += diff * diff;
            }
            d[i * b.rows + j] = s;
        }
    }
    return d;
}

class KernelSynthesizer final : public Synthesizer {
public:
    KernelSynthesizer(const Dataset& train, double h) : train_(train), h_(h) {
        if (h <= 0.0) throw std::invalid_argument("kernel synth: bandwidth must be > 0");
        if (train.empty()) throw std::invalid_argument("kernel synth: empty training set");
        params_ = ScalingParams::fit(train);
        emb_train_ = embed(train, params_);

        const auto& schema = train.schema();
        marginals_.resize(schema.size());
        for (std::size_t a = 0; a < schema.size(); ++a) {
            if (schema.at(a).kind != AttrKind::Categorical) continue;
            auto& m = marginals_[a];
            m.assign(schema.at(a).vocabulary.size(), 0.0);
            for (std::size_t r = 0; r < train.n_rows(); ++r)
                m[static_cast<std::size_t>(train.at(r, a))] += 1.0;
            for (double& v : m) v /= static_cast<double>(train.n_rows());
        }
    }

    Dataset sample(std::size_t n, std::uint64_t seed) const override {
        const auto& schema = train_.schema();
        auto rng = make_rng(derive_seed(seed, "kernel-sample"));
        std::uniform_int_distribution<std::size_t> pick_row(0, train_.n_rows() - 1);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double flip = std::min(1.0, h_);

        Dataset out = train_.select_rows({});
        std::vector<Cell> row(schema.size());
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t src = pick_row(rng);
            for (std::size_t a = 0; a < schema.size(); ++a) {
                if (schema.at(a).kind == AttrKind::Numeric) {
                    const double range = params_.maxs[a] - params_.mins[a];
                    row[a] = train_.at(src, a) + gauss(rng) * h_ * range;
                } else {
                    Cell v = train_.at(src, a);
                    if (u(rng) < flip) v = static_cast<Cell>(draw_from(marginals_[a], rng));
                    row[a] = v;
                }
            }
            out.append_row(row);
        }
        return out;
    }

    double validation_loss(const Dataset& val) const override {
        if (val.empty()) throw std::invalid_argument("validation_loss: empty validation set");
        const auto emb_val = embed(val, params_);
        const auto d = pairwise_sq_distances(emb_val, emb_train_);
        return kde_loss_from_distances(d, emb_val.rows, emb_train_.rows, emb_train_.dims, h_);
    }

    std::string describe() const override { return "kernel(h=" + std::to_string(h_) + ")"; }

    double bandwidth() const { return h_; }

private:
    Dataset train_;
    double h_;
    ScalingParams params_;
    EmbeddedMatrix emb_train_;
    std::vector<std::vector<double>> marginals_;
};

class DPMarginalSynthesizer final : public Synthesizer {
public:
    DPMarginalSynthesizer(const Dataset& train, double epsilon, std::uint64_t seed,
                          std::size_t bins)
        : schema_(train.schema()), epsilon_(epsilon), bins_(bins) {
        if (epsilon < 0.0) throw std::invalid_argument("dp synth: epsilon must be >= 0");
        if (train.empty()) throw std::invalid_argument("dp synth: empty training set");
        if (bins_ < 1) throw std::invalid_argument("dp synth: bins must be >= 1");

        const std::size_t m = schema_.size();
        auto rng = make_rng(derive_seed(seed, "dp-fit"));

        bin_lo_.assign(m, 0.0);
        bin_width_.assign(m, 0.0);
        marginals_.resize(m);
        for (std::size_t a = 0; a < m; ++a) {
            std::size_t cells;
            std::vector<double> counts;
            if (schema_.at(a).kind == AttrKind::Categorical) {
                cells = schema_.at(a).vocabulary.size();
                counts.assign(cells, 0.0);
                for (std::size_t r = 0; r < train.n_rows(); ++r)
                    counts[static_cast<std::size_t>(train.at(r, a))] += 1.0;
            } else {
                cells = bins_;
                double lo = schema_.at(a).min.value_or(std::numeric_limits<double>::infinity());
                double hi = schema_.at(a).max.value_or(-std::numeric_limits<double>::infinity());
                for (std::size_t r = 0; r < train.n_rows(); ++r) {
                    lo = std::min(lo, train.at(r, a));
                    hi = std::max(hi, train.at(r, a));
                }
                if (!(hi > lo)) hi = lo + 1.0;
                bin_lo_[a] = lo;
                bin_width_[a] = (hi - lo) / static_cast<double>(bins_);
                counts.assign(cells, 0.0);
                for (std::size_t r = 0; r < train.n_rows(); ++r)
                    counts[bin_of(a, train.at(r, a))] += 1.0;
            }

            auto& probs = marginals_[a];
            probs.assign(cells, 0.0);
            if (epsilon_ == 0.0) {
                // Pure-noise limit: the data counts are drowned out entirely.
                for (std::size_t c = 0; c < cells; ++c)
                    probs[c] = std::max(0.0, laplace_draw(1.0, rng));
            } else {
                const double scale = 2.0 * static_cast<double>(m) / epsilon_;
                for (std::size_t c = 0; c < cells; ++c)
                    probs[c] = std::max(0.0, counts[c] + laplace_draw(scale, rng));
            }
            double total = std::accumulate(probs.begin(), probs.end(), 0.0);
            if (total <= 0.0) {
                probs.assign(cells, 1.0 / static_cast<double>(cells));
            } else {
                for (double& p : probs) p /= total;
            }
        }
    }

    Dataset sample(std::size_t n, std::uint64_t seed) const override {
        auto rng = make_rng(derive_seed(seed, "dp-sample"));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Dataset out(schema_, {});
        std::vector<Cell> row(schema_.size());
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t a = 0; a < schema_.size(); ++a) {
                const std::size_t c = draw_from(marginals_[a], rng);
                if (schema_.at(a).kind == AttrKind::Categorical)
                    row[a] = static_cast<Cell>(c);
                else
                    row[a] = bin_lo_[a] + (static_cast<double>(c) + u(rng)) * bin_width_[a];
            }
            out.append_row(row);
        }
        return out;
    }

    double validation_loss(const Dataset& val) const override {
        if (val.empty()) throw std::invalid_argument("validation_loss: empty validation set");
        double total = 0.0;
        for (std::size_t r = 0; r < val.n_rows(); ++r) {
            for (std::size_t a = 0; a < schema_.size(); ++a) {
                double p;
                if (schema_.at(a).kind == AttrKind::Categorical)
                    p = marginals_[a][static_cast<std::size_t>(val.at(r, a))];
                else
                    p = marginals_[a][bin_of(a, val.at(r, a))];
                total += -std::log(std::max(p, 1e-12));
            }
        }
        return total / static_cast<double>(val.n_rows());
    }

    std::string describe() const override { return "dp(eps=" + std::to_string(epsilon_) + ")"; }

    const std::vector<std::vector<double>>& marginals() const { return marginals_; }

private:
    std::size_t bin_of(std::size_t a, double v) const {
        if (bin_width_[a] <= 0.0) return 0;
        const double idx = std::floor((v - bin_lo_[a]) / bin_width_[a]);
        return static_cast<std::size_t>(std::clamp(idx, 0.0, static_cast<double>(bins_ - 1)));
    }

    Schema schema_;
    double epsilon_;
    std::size_t bins_;
    std::vector<double> bin_lo_, bin_width_;
    std::vector<std::vector<double>> marginals_;
};

}  // namespace

std::string SynthesizerSpec::to_json() const {
    nlohmann::json j;
    j["kind"] = kind == SynthKind::KernelSmoother ? "kernel"
                : kind == SynthKind::DPMarginal   ? "dp"
                                                  : "external";
    j["bandwidth"] = bandwidth;
    j["epsilon"] = epsilon;
    j["dp_bins"] = dp_bins;
    j["path"] = path;
    j["seed"] = seed;
    return j.dump();
}

SynthesizerSpec SynthesizerSpec::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    SynthesizerSpec s;
    const std::string kind = j.value("kind", "kernel");
    if (kind == "kernel")
        s.kind = SynthKind::KernelSmoother;
    else if (kind == "dp")
        s.kind = SynthKind::DPMarginal;
    else if (kind == "external")
        s.kind = SynthKind::ExternalCSV;
    else
        throw std::invalid_argument("synthesizer spec: unknown kind '" + kind + "'");
    s.bandwidth = j.value("bandwidth", 0.05);
    s.epsilon = j.value("epsilon", 1.0);
    s.dp_bins = j.value("dp_bins", std::size_t{16});
    s.path = j.value("path", std::string{});
    s.seed = j.value("seed", std::uint64_t{0});
    return s;
}

std::unique_ptr<Synthesizer> fit_kernel_synth(const Dataset& train, double bandwidth) {
    return std::make_unique<KernelSynthesizer>(train, bandwidth);
}

std::unique_ptr<Synthesizer> fit_dp_marginal(const Dataset& train, double epsilon,
                                             std::uint64_t seed, std::size_t bins) {
    return std::make_unique<DPMarginalSynthesizer>(train, epsilon, seed, bins);
}

const std::vector<std::vector<double>>& dp_marginals(const Synthesizer& model) {
    const auto* dp = dynamic_cast<const DPMarginalSynthesizer*>(&model);
    if (!dp) throw std::invalid_argument("dp_marginals: not a DP marginal model");
    return dp->marginals();
}

double validation_loss(const Synthesizer& model, const Dataset& val) {
    return model.validation_loss(val);
}

OverfitFit fit_to_overfit_ratio(const Dataset& train, const Dataset& val, double overfit_ratio) {
    if (overfit_ratio < 1.0)
        throw std::invalid_argument("fit_to_overfit_ratio: ratio must be >= 1");
    if (train.empty() || val.empty())
        throw std::invalid_argument("fit_to_overfit_ratio: empty dataset");

    const auto params = ScalingParams::fit(train);
    const auto emb_train = embed(train, params);
    const auto emb_val = embed(val, params);
    const auto sq = pairwise_sq_distances(emb_val, emb_train);

    auto loss_at = [&](double h) {
        return kde_loss_from_distances(sq, emb_val.rows, emb_train.rows, emb_train.dims, h);
    };

    // Golden-section search for h* over log h.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = std::log(1e-3), hi = std::log(4.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = loss_at(std::exp(x1)), f2 = loss_at(std::exp(x2));
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = loss_at(std::exp(x1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = loss_at(std::exp(x2));
        }
    }
    const double h_star = std::exp((lo + hi) / 2.0);
    const double loss_star = loss_at(h_star);
    if (!(loss_star > 0.0))
        throw std::runtime_error("fit_to_overfit_ratio: degenerate optimal loss");

    OverfitFit fit;
    fit.loss_star = loss_star;
    fit.bandwidth_star = h_star;

    if (std::abs(overfit_ratio - 1.0) < 1e-12) {
        fit.loss = loss_star;
        fit.bandwidth = h_star;
        fit.model = fit_kernel_synth(train, h_star);
        return fit;
    }

    const double target = overfit_ratio * loss_star;
    double a = std::log(kBandwidthFloor), b = std::log(h_star);
    const double loss_floor = loss_at(std::exp(a));
    if (loss_floor < target)
        throw std::runtime_error("fit_to_overfit_ratio: target unreachable, max ratio " +
                                 std::to_string(loss_floor / loss_star));

    double h = h_star, achieved = loss_star;
    for (int it = 0; it < 200; ++it) {
        const double mid = (a + b) / 2.0;
        h = std::exp(mid);
        achieved = loss_at(h);
        if (std::abs(achieved - target) <= 1e-4 * loss_star) break;
        if (achieved > target)
            a = mid;
        else
            b = mid;
    }
    if (std::abs(achieved - target) > 1e-3 * loss_star)
        throw std::runtime_error("fit_to_overfit_ratio: bisection failed to reach target");

    fit.loss = achieved;
    fit.bandwidth = h;
    fit.model = fit_kernel_synth(train, h);
    return fit;
}

Dataset leaky_release(const Dataset& train, const Dataset& release, double leak_fraction,
                      std::uint64_t seed) {
    if (leak_fraction < 0.0 || leak_fraction > 1.0)
        throw std::invalid_argument("leaky_release: leak fraction outside [0,1]");
    if (train.empty() || release.empty())
        throw std::invalid_argument("leaky_release: empty dataset");

    const std::size_t n = train.n_rows();
    const auto n_leak = static_cast<std::size_t>(std::llround(leak_fraction * static_cast<double>(n)));
    const std::size_t n_fill = n - n_leak;

    auto rng = make_rng(derive_seed(seed, "leaky"));
    std::vector<std::size_t> leak_rows = sample_indices(n, n_leak, rng);

    std::vector<std::size_t> fill_rows;
    fill_rows.reserve(n_fill);
    if (n_fill <= release.n_rows()) {
        fill_rows = sample_indices(release.n_rows(), n_fill, rng);
    } else {
        std::uniform_int_distribution<std::size_t> pick(0, release.n_rows() - 1);
        for (std::size_t i = 0; i < n_fill; ++i) fill_rows.push_back(pick(rng));
    }

    Dataset out = Dataset::concat(train.select_rows(leak_rows), release.select_rows(fill_rows));
    std::vector<std::size_t> order(out.n_rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    return out.select_rows(order);
}

}  // namespace synthrisk
