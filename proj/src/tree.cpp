#include "synthrisk/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace synthrisk {
namespace {

constexpr double kMinGain = 1e-12;

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

double gini(const std::vector<double>& counts, double total) {
    if (total <= 0.0) return 0.0;
    double g = 1.0;
    for (double c : counts) {
        const double p = c / total;
        g -= p * p;
    }
    return g;
}

}  // namespace

struct TreeBuilder {
    const FeatureMatrix& x;
    const std::vector<std::size_t>* labels = nullptr;   // classification
    const std::vector<double>* targets = nullptr;       // regression
    std::size_t n_classes = 0;
    LearnerSpec spec;
    std::vector<DecisionTree::Node>* nodes;

    bool classify() const { return labels != nullptr; }

    double leaf_value(const std::vector<std::size_t>& rows) const {
        if (classify()) {
            std::vector<std::size_t> counts(n_classes, 0);
            for (std::size_t r : rows) ++counts[(*labels)[r]];
            std::size_t best = 0;
            for (std::size_t c = 1; c < n_classes; ++c)
                if (counts[c] > counts[best]) best = c;  // ties to the lowest index
            return static_cast<double>(best);
        }
        double mean = 0.0;
        for (std::size_t r : rows) mean += (*targets)[r];
        return rows.empty() ? 0.0 : mean / static_cast<double>(rows.size());
    }

    // Exhaustive best split over (feature, midpoint threshold); lowest feature
    // then lowest threshold wins ties.
    Split best_split(const std::vector<std::size_t>& rows) const {
        Split best;
        const double n = static_cast<double>(rows.size());
        std::vector<std::size_t> order(rows);

        for (std::size_t f = 0; f < x.dims; ++f) {
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                const double va = x.row(a)[f], vb = x.row(b)[f];
                if (va != vb) return va < vb;
                return a < b;
            });

            if (classify()) {
                std::vector<double> left(n_classes, 0.0), right(n_classes, 0.0);
                for (std::size_t r : order) right[(*labels)[r]] += 1.0;
                const double parent = gini(right, n);
                double nl = 0.0;
                for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                    const std::size_t r = order[i];
                    left[(*labels)[r]] += 1.0;
                    right[(*labels)[r]] -= 1.0;
                    nl += 1.0;
                    const double v = x.row(r)[f], vn = x.row(order[i + 1])[f];
                    if (v == vn) continue;
                    if (nl < spec.min_leaf || n - nl < spec.min_leaf) continue;
                    const double gain =
                        parent - (nl / n) * gini(left, nl) - ((n - nl) / n) * gini(right, n - nl);
                    if (gain > best.gain + kMinGain)
                        best = {static_cast<int>(f), (v + vn) / 2.0, gain};
                }
            } else {
                double sum_r = 0.0, sum2_r = 0.0;
                for (std::size_t r : order) {
                    sum_r += (*targets)[r];
                    sum2_r += (*targets)[r] * (*targets)[r];
                }
                const double parent = sum2_r - sum_r * sum_r / n;
                double sum_l = 0.0, sum2_l = 0.0, nl = 0.0;
                for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                    const std::size_t r = order[i];
                    const double t = (*targets)[r];
                    sum_l += t;
                    sum2_l += t * t;
                    sum_r -= t;
                    sum2_r -= t * t;
                    nl += 1.0;
                    const double v = x.row(r)[f], vn = x.row(order[i + 1])[f];
                    if (v == vn) continue;
                    if (nl < spec.min_leaf || n - nl < spec.min_leaf) continue;
                    const double sse = (sum2_l - sum_l * sum_l / nl) +
                                       (sum2_r - sum_r * sum_r / (n - nl));
                    const double gain = parent - sse;
                    if (gain > best.gain + kMinGain)
                        best = {static_cast<int>(f), (v + vn) / 2.0, gain};
                }
            }
        }
        return best;
    }

    int build(const std::vector<std::size_t>& rows, std::size_t depth) {
        const int id = static_cast<int>(nodes->size());
        nodes->push_back({});
        (*nodes)[id].value = leaf_value(rows);

        if (depth >= spec.max_depth || rows.size() < 2 * spec.min_leaf) return id;
        const Split s = best_split(rows);
        if (s.feature < 0 || s.gain <= kMinGain) return id;
        if (classify() && s.gain < spec.min_gain) return id;

        std::vector<std::size_t> left, right;
        for (std::size_t r : rows)
            (x.row(r)[s.feature] <= s.threshold ? left : right).push_back(r);
        if (left.size() < spec.min_leaf || right.size() < spec.min_leaf) return id;

        (*nodes)[id].feature = s.feature;
        (*nodes)[id].threshold = s.threshold;
        const int l = build(left, depth + 1);
        (*nodes)[id].left = l;
        const int r = build(right, depth + 1);
        (*nodes)[id].right = r;
        return id;
    }
};

DecisionTree DecisionTree::fit_classifier(const FeatureMatrix& x, const std::vector<std::size_t>& y,
                                          std::size_t n_classes, const LearnerSpec& spec) {
    if (x.rows == 0 || x.rows != y.size()) throw std::invalid_argument("tree: bad training data");
    if (n_classes < 1) throw std::invalid_argument("tree: need at least one class");
    DecisionTree t;
    TreeBuilder b{x, &y, nullptr, n_classes, spec, &t.nodes_};
    std::vector<std::size_t> rows(x.rows);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    b.build(rows, 0);
    return t;
}

DecisionTree DecisionTree::fit_regressor(const FeatureMatrix& x, const std::vector<double>& y,
                                         const LearnerSpec& spec) {
    if (x.rows == 0 || x.rows != y.size()) throw std::invalid_argument("tree: bad training data");
    DecisionTree t;
    TreeBuilder b{x, nullptr, &y, 0, spec, &t.nodes_};
    std::vector<std::size_t> rows(x.rows);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    b.build(rows, 0);
    return t;
}

double DecisionTree::predict(const double* x) const {
    int id = 0;
    while (nodes_[id].feature >= 0)
        id = x[nodes_[id].feature] <= nodes_[id].threshold ? nodes_[id].left : nodes_[id].right;
    return nodes_[id].value;
}

std::vector<double> DecisionTree::predict_batch(const FeatureMatrix& x) const {
    std::vector<double> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = predict(x.row(r));
    return out;
}

LearnerSpec::Predictor make_tree_classifier(const FeatureMatrix& x,
                                            const std::vector<std::size_t>& y,
                                            std::size_t n_classes, const LearnerSpec& spec) {
    if (spec.fit_classifier_override) return spec.fit_classifier_override(x, y, n_classes);
    auto tree = std::make_shared<DecisionTree>(DecisionTree::fit_classifier(x, y, n_classes, spec));
    return [tree](const double* p) { return tree->predict(p); };
}

LearnerSpec::Predictor make_tree_regressor(const FeatureMatrix& x, const std::vector<double>& y,
                                           const LearnerSpec& spec) {
    if (spec.fit_regressor_override) return spec.fit_regressor_override(x, y);
    auto tree = std::make_shared<DecisionTree>(DecisionTree::fit_regressor(x, y, spec));
    return [tree](const double* p) { return tree->predict(p); };
}

}  // namespace synthrisk
