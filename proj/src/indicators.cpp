#include "synthrisk/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "synthrisk/neighbors.hpp"
#include "synthrisk/rng.hpp"

namespace synthrisk {
namespace {

std::uint64_t hash_row(std::span<const Cell> row) {
    std::uint64_t h = 1469598103934665603ULL;
    for (Cell v : row) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        h ^= bits;
        h *= 1099511628211ULL;
    }
    return h;
}

// Mean distance to the k nearest reference rows, per query row.
std::vector<double> knn_mean_distances(const EmbeddedMatrix& query, const EmbeddedMatrix& reference,
                                       std::size_t k) {
    const auto nn = nearest_neighbors(query, reference, k);
    std::vector<double> out(query.rows);
    for (std::size_t q = 0; q < query.rows; ++q) {
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) s += nn.distance(q, j);
        out[q] = s / static_cast<double>(k);
    }
    return out;
}

// Split the real data into seeded equal halves (floor sizes).
std::pair<Dataset, Dataset> holdout_halves(const Dataset& real, std::uint64_t seed) {
    const std::size_t n = real.n_rows();
    const std::size_t half = n / 2;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto rng = make_rng(derive_seed(seed, "rrd-halves"));
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<std::size_t> h1(idx.begin(), idx.begin() + half);
    std::vector<std::size_t> h2(idx.begin() + half, idx.begin() + 2 * half);
    std::sort(h1.begin(), h1.end());
    std::sort(h2.begin(), h2.end());
    return {real.select_rows(h1), real.select_rows(h2)};
}

IndicatorScore indicator_impl(const Dataset& synth, const Dataset& real,
                              const IndicatorConfig& cfg) {
    if (cfg.alpha_percent <= 0.0 || cfg.alpha_percent >= 100.0)
        throw std::invalid_argument("indicator: alpha_percent outside (0, 100)");
    if (cfg.k < 1) throw std::invalid_argument("indicator: k must be >= 1");
    if (!(synth.schema() == real.schema()))
        throw std::invalid_argument("indicator: schema mismatch");
    if (real.n_rows() < 4) throw std::invalid_argument("indicator: too few real rows");
    if (synth.empty()) throw std::invalid_argument("indicator: empty synth");

    auto [d1, d2] = holdout_halves(real, cfg.seed);
    if (cfg.k > d2.n_rows()) throw std::invalid_argument("indicator: k exceeds holdout half");

    const auto params = ScalingParams::fit(real);
    const auto emb_real = embed(real, params);
    const auto emb_synth = embed(synth, params);
    const auto emb_d1 = embed(d1, params);
    const auto emb_d2 = embed(d2, params);

    // Synthetic-to-real against the full real set; real-to-real within the
    // holdout halves.
    const auto srd = knn_mean_distances(emb_synth, emb_real, cfg.k);
    const auto rrd = knn_mean_distances(emb_d1, emb_d2, cfg.k);

    const double threshold = percentile_linear(rrd, cfg.alpha_percent);

    std::size_t below = 0;
    for (double d : srd)
        if (d < threshold) ++below;

    const double alpha = cfg.alpha_percent / 100.0;
    const double fraction = static_cast<double>(below) / static_cast<double>(synth.n_rows());
    IndicatorScore score;
    score.raw_numerator = below;
    score.raw_denominator = alpha * static_cast<double>(d1.n_rows());
    score.threshold = threshold;
    score.value = (fraction / alpha - 1.0) / (100.0 / cfg.alpha_percent - 1.0);
    return score;
}

}  // namespace

double percentile_linear(std::vector<double> values, double alpha_percent) {
    if (values.empty()) throw std::invalid_argument("percentile: empty sample");
    std::sort(values.begin(), values.end());
    const double p = std::clamp(alpha_percent, 0.0, 100.0) / 100.0;
    const double rank = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = static_cast<std::size_t>(std::ceil(rank));
    if (lo == hi) return values[lo];
    const double w = rank - static_cast<double>(lo);
    return values[lo] * (1.0 - w) + values[hi] * w;
}

IndicatorScore ims(const Dataset& real, const Dataset& synth) {
    if (synth.empty()) throw std::invalid_argument("ims: empty synth");
    if (!(synth.schema() == real.schema())) throw std::invalid_argument("ims: schema mismatch");

    // Hash buckets of real rows; candidates verified cell-by-cell.
    std::unordered_multimap<std::uint64_t, std::size_t> buckets;
    buckets.reserve(real.n_rows());
    for (std::size_t r = 0; r < real.n_rows(); ++r) buckets.emplace(hash_row(real.row(r)), r);

    std::size_t matches = 0;
    for (std::size_t s = 0; s < synth.n_rows(); ++s) {
        auto [lo, hi] = buckets.equal_range(hash_row(synth.row(s)));
        for (auto it = lo; it != hi; ++it) {
            if (synth.rows_equal(s, real, it->second)) {
                ++matches;
                break;
            }
        }
    }
    IndicatorScore score;
    score.raw_numerator = matches;
    score.raw_denominator = static_cast<double>(synth.n_rows());
    score.value = static_cast<double>(matches) / static_cast<double>(synth.n_rows());
    score.threshold = 0.0;
    return score;
}

std::vector<double> srd_distribution(const Dataset& synth, const Dataset& real) {
    if (real.empty()) throw std::invalid_argument("srd: empty real");
    if (!(synth.schema() == real.schema())) throw std::invalid_argument("srd: schema mismatch");
    const auto params = ScalingParams::fit(real);
    return knn_mean_distances(embed(synth, params), embed(real, params), 1);
}

RrdResult rrd_distribution(const Dataset& real, std::uint64_t seed) {
    if (real.n_rows() < 4) throw std::invalid_argument("rrd: need at least 4 rows");
    auto [d1, d2] = holdout_halves(real, seed);
    const auto params = ScalingParams::fit(real);
    RrdResult res;
    res.values = knn_mean_distances(embed(d1, params), embed(d2, params), 1);
    return res;
}

double RrdResult::percentile(double alpha_percent) const {
    return percentile_linear(values, alpha_percent);
}

IndicatorScore dcr(const Dataset& synth, const Dataset& real, const IndicatorConfig& cfg) {
    IndicatorConfig c = cfg;
    c.k = 1;
    return indicator_impl(synth, real, c);
}

IndicatorScore knn_indicator(const Dataset& synth, const Dataset& real, const IndicatorConfig& cfg) {
    return indicator_impl(synth, real, cfg);
}

}  // namespace synthrisk
