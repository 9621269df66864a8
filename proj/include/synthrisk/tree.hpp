#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace synthrisk {

// Plain feature matrix for learners (row-major).
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t dims = 0;
    std::vector<double> data;

    const double* row(std::size_t r) const { return data.data() + r * dims; }
};

// Pluggable learner interface: fit returns a predictor. The built-in learner
// is a depth-limited CART tree (deterministic, no external dependencies);
// gradient-boosted ensembles can be swapped in behind the same signature.
struct LearnerSpec {
    std::size_t max_depth = 8;
    std::size_t min_leaf = 5;
    // Minimum Gini decrease per classifier split; nonzero values reject
    // splits that only fit sampling noise (used by the utility test, where
    // membership noise on duplicated rows otherwise anti-predicts the test
    // side).
    double min_gain = 0.0;

    using Predictor = std::function<double(const double*)>;
    using ClassifierFit =
        std::function<Predictor(const FeatureMatrix&, const std::vector<std::size_t>&, std::size_t)>;
    using RegressorFit = std::function<Predictor(const FeatureMatrix&, const std::vector<double>&)>;

    // Empty means "use the built-in tree".
    ClassifierFit fit_classifier_override;
    RegressorFit fit_regressor_override;
};

// Deterministic CART. Classification minimizes Gini impurity, regression
// minimizes variance; ties between splits resolve to the lowest feature index
// then lowest threshold, and a single-class label yields a constant model.
class DecisionTree {
public:
    static DecisionTree fit_classifier(const FeatureMatrix& x, const std::vector<std::size_t>& y,
                                       std::size_t n_classes, const LearnerSpec& spec = {});
    static DecisionTree fit_regressor(const FeatureMatrix& x, const std::vector<double>& y,
                                      const LearnerSpec& spec = {});

    // Class index for classifiers (majority, ties to the lowest index),
    // mean response for regressors.
    double predict(const double* x) const;
    std::vector<double> predict_batch(const FeatureMatrix& x) const;

private:
    struct Node {
        int feature = -1;  // -1: leaf
        double threshold = 0.0;
        int left = -1, right = -1;
        double value = 0.0;
    };
    std::vector<Node> nodes_;

    friend struct TreeBuilder;
};

LearnerSpec::Predictor make_tree_classifier(const FeatureMatrix& x,
                                            const std::vector<std::size_t>& y,
                                            std::size_t n_classes, const LearnerSpec& spec);
LearnerSpec::Predictor make_tree_regressor(const FeatureMatrix& x, const std::vector<double>& y,
                                           const LearnerSpec& spec);

}  // namespace synthrisk
