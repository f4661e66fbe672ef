#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <json.hpp>

namespace lccd {

/// One-vs-rest linear classifier. Row c of `weights` holds the hyperplane for
/// classes[c]; the last column is the bias.
struct LinearModel {
    std::vector<std::string> classes;
    Eigen::MatrixXd weights; // C x (dim + 1)

    int dim() const { return static_cast<int>(weights.cols()) - 1; }
};

struct TrainOptions {
    double l2 = 1e-4;
    int epochs = 50;
    double learning_rate = 1.0;
    std::uint64_t seed = 0; // reserved; training is order-independent
};

/// Trains one-vs-rest L2-regularized hinge-loss classifiers by full-batch
/// subgradient descent: each epoch takes one step along the subgradient
/// averaged over the whole training set. Averaging makes the update invariant
/// to duplicating the training set, and training deterministic.
/// Throws InvalidInputError with fewer than two classes.
LinearModel train(const Eigen::MatrixXd& x, const std::vector<std::string>& labels,
                  const TrainOptions& opts);

/// Per-class decision scores for one encoded vector.
Eigen::VectorXd decision_scores(const LinearModel& model,
                                const Eigen::Ref<const Eigen::VectorXd>& v);

/// Index into model.classes of the best-scoring class (ties -> lowest index).
int predict(const LinearModel& model, const Eigen::Ref<const Eigen::VectorXd>& v);

/// Evaluation results for one train/test split.
struct Report {
    std::vector<std::string> classes;
    std::vector<std::vector<std::int64_t>> confusion; // rows = truth
    double accuracy = 0.0;
    std::vector<double> per_class_accuracy;
    double mean_ap = 0.0;
    std::vector<double> per_class_ap;
    std::int64_t test_count = 0;
    std::int64_t skipped_unknown_labels = 0;
};

/// Scores a test set: overall and per-class accuracy, confusion matrix and
/// macro-averaged average precision from the decision scores. Test items whose
/// label was never trained on are skipped with a warning and counted.
Report evaluate(const LinearModel& model, const Eigen::MatrixXd& x,
                const std::vector<std::string>& labels);

/// Fraction of the pair's test items misclassified as each other
/// (a as b plus b as a). Throws InvalidInputError for unknown classes.
double pair_confusion_rate(const Report& report, const std::string& a,
                           const std::string& b);

nlohmann::ordered_json report_to_json(const Report& report);
Report report_from_json(const nlohmann::ordered_json& j);

/// Confusion matrix as CSV (header row/column of class names, rows = truth).
std::string confusion_csv(const Report& report);

/// Per-class accuracy and average precision as CSV bar-chart data.
std::string per_class_csv(const Report& report);

} // namespace lccd
