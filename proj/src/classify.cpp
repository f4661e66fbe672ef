#include "lccd/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <set>

#include "lccd/errors.hpp"

namespace lccd {

namespace {

std::vector<std::string> sorted_unique(const std::vector<std::string>& labels) {
    std::set<std::string> s(labels.begin(), labels.end());
    return {s.begin(), s.end()};
}

int class_index(const std::vector<std::string>& classes, const std::string& label) {
    const auto it = std::lower_bound(classes.begin(), classes.end(), label);
    if (it == classes.end() || *it != label) return -1;
    return static_cast<int>(it - classes.begin());
}

// Average precision of one ranking: mean of precision-at-rank over the
// positive items, with ties broken by original index for determinism.
double average_precision(const Eigen::VectorXd& scores,
                         const std::vector<char>& positive) {
    const auto n = static_cast<std::size_t>(scores.size());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores(static_cast<Eigen::Index>(a)) >
               scores(static_cast<Eigen::Index>(b));
    });
    double hits = 0.0;
    double precision_sum = 0.0;
    for (std::size_t rank = 0; rank < n; ++rank) {
        if (positive[order[rank]]) {
            hits += 1.0;
            precision_sum += hits / static_cast<double>(rank + 1);
        }
    }
    return hits > 0.0 ? precision_sum / hits : 0.0;
}

} // namespace

LinearModel train(const Eigen::MatrixXd& x, const std::vector<std::string>& labels,
                  const TrainOptions& opts) {
    const Eigen::Index n = x.rows();
    if (n == 0 || static_cast<std::size_t>(n) != labels.size())
        throw InvalidInputError("train: sample/label count mismatch");
    if (opts.epochs < 1 || !(opts.learning_rate > 0.0) || opts.l2 < 0.0)
        throw InvalidConfigError("train: invalid optimizer options");

    LinearModel model;
    model.classes = sorted_unique(labels);
    const int c = static_cast<int>(model.classes.size());
    if (c < 2) throw InvalidInputError("train: need at least 2 classes, got " +
                                       std::to_string(c));

    std::vector<int> label_idx(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        label_idx[i] = class_index(model.classes, labels[i]);

    const int dim = static_cast<int>(x.cols());
    model.weights = Eigen::MatrixXd::Zero(c, dim + 1);

    for (int cls = 0; cls < c; ++cls) {
        Eigen::VectorXd y(n);
        for (Eigen::Index i = 0; i < n; ++i)
            y(i) = label_idx[static_cast<std::size_t>(i)] == cls ? 1.0 : -1.0;

        Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
        double bias = 0.0;
        for (int epoch = 0; epoch < opts.epochs; ++epoch) {
            const double lr = opts.learning_rate / (1.0 + 0.2 * epoch);
            const Eigen::VectorXd margins =
                y.cwiseProduct(((x * w).array() + bias).matrix());
            Eigen::VectorXd active = (margins.array() < 1.0).cast<double>();
            active = active.cwiseProduct(y);
            // averaged hinge subgradient; the bias is not regularized
            const Eigen::VectorXd grad_w =
                opts.l2 * w - (x.transpose() * active) / static_cast<double>(n);
            const double grad_b = -active.sum() / static_cast<double>(n);
            w -= lr * grad_w;
            bias -= lr * grad_b;
        }
        model.weights.row(cls).head(dim) = w.transpose();
        model.weights(cls, dim) = bias;
    }
    return model;
}

Eigen::VectorXd decision_scores(const LinearModel& model,
                                const Eigen::Ref<const Eigen::VectorXd>& v) {
    if (v.size() != model.dim())
        throw InvalidInputError("decision_scores: vector length " +
                                std::to_string(v.size()) + " does not match model dim " +
                                std::to_string(model.dim()));
    return model.weights.leftCols(model.dim()) * v + model.weights.rightCols(1);
}

int predict(const LinearModel& model, const Eigen::Ref<const Eigen::VectorXd>& v) {
    const Eigen::VectorXd scores = decision_scores(model, v);
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < scores.size(); ++i)
        if (scores(i) > scores(best)) best = i;
    return static_cast<int>(best);
}

Report evaluate(const LinearModel& model, const Eigen::MatrixXd& x,
                const std::vector<std::string>& labels) {
    if (x.rows() == 0) throw InvalidInputError("evaluate: empty test set");
    if (static_cast<std::size_t>(x.rows()) != labels.size())
        throw InvalidInputError("evaluate: sample/label count mismatch");

    Report report;
    report.classes = model.classes;
    const int c = static_cast<int>(model.classes.size());
    report.confusion.assign(c, std::vector<std::int64_t>(c, 0));

    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        if (class_index(model.classes, labels[static_cast<std::size_t>(i)]) < 0) {
            ++report.skipped_unknown_labels;
        } else {
            kept.push_back(i);
        }
    }
    if (report.skipped_unknown_labels > 0)
        std::cerr << "lccd: evaluate: skipping " << report.skipped_unknown_labels
                  << " test items with labels absent from training\n";
    if (kept.empty()) throw InvalidInputError("evaluate: no test items with known labels");

    const Eigen::MatrixXd scores =
        x * model.weights.leftCols(model.dim()).transpose() +
        Eigen::VectorXd::Ones(x.rows()) * model.weights.rightCols(1).transpose();

    std::int64_t correct = 0;
    for (Eigen::Index i : kept) {
        const int truth = class_index(model.classes, labels[static_cast<std::size_t>(i)]);
        Eigen::Index pred = 0;
        scores.row(i).maxCoeff(&pred);
        report.confusion[static_cast<std::size_t>(truth)][static_cast<std::size_t>(pred)]++;
        if (static_cast<int>(pred) == truth) ++correct;
    }
    report.test_count = static_cast<std::int64_t>(kept.size());
    report.accuracy = static_cast<double>(correct) / static_cast<double>(kept.size());

    report.per_class_accuracy.assign(c, 0.0);
    report.per_class_ap.assign(c, 0.0);
    double ap_sum = 0.0;
    int ap_classes = 0;
    for (int cls = 0; cls < c; ++cls) {
        const auto& row = report.confusion[static_cast<std::size_t>(cls)];
        const std::int64_t row_total = std::accumulate(row.begin(), row.end(),
                                                       std::int64_t{0});
        report.per_class_accuracy[static_cast<std::size_t>(cls)] =
            row_total > 0 ? static_cast<double>(row[static_cast<std::size_t>(cls)]) /
                                static_cast<double>(row_total)
                          : 0.0;

        Eigen::VectorXd cls_scores(static_cast<Eigen::Index>(kept.size()));
        std::vector<char> positive(kept.size(), 0);
        for (std::size_t i = 0; i < kept.size(); ++i) {
            cls_scores(static_cast<Eigen::Index>(i)) = scores(kept[i], cls);
            positive[i] =
                class_index(model.classes, labels[static_cast<std::size_t>(kept[i])]) == cls;
        }
        if (row_total > 0) {
            const double ap = average_precision(cls_scores, positive);
            report.per_class_ap[static_cast<std::size_t>(cls)] = ap;
            ap_sum += ap;
            ++ap_classes;
        }
    }
    report.mean_ap = ap_classes > 0 ? ap_sum / ap_classes : 0.0;
    return report;
}

double pair_confusion_rate(const Report& report, const std::string& a,
                           const std::string& b) {
    const int ia = class_index(report.classes, a);
    const int ib = class_index(report.classes, b);
    if (ia < 0) throw InvalidInputError("pair_confusion_rate: unknown class '" + a + "'");
    if (ib < 0) throw InvalidInputError("pair_confusion_rate: unknown class '" + b + "'");
    const auto& rows = report.confusion;
    std::int64_t pair_items = 0;
    for (const auto idx : {ia, ib})
        pair_items += std::accumulate(rows[static_cast<std::size_t>(idx)].begin(),
                                      rows[static_cast<std::size_t>(idx)].end(),
                                      std::int64_t{0});
    if (pair_items == 0) return 0.0;
    const std::int64_t crossed =
        rows[static_cast<std::size_t>(ia)][static_cast<std::size_t>(ib)] +
        rows[static_cast<std::size_t>(ib)][static_cast<std::size_t>(ia)];
    return static_cast<double>(crossed) / static_cast<double>(pair_items);
}

nlohmann::ordered_json report_to_json(const Report& report) {
    nlohmann::ordered_json j;
    j["classes"] = report.classes;
    j["test_count"] = report.test_count;
    j["skipped_unknown_labels"] = report.skipped_unknown_labels;
    j["accuracy"] = report.accuracy;
    j["mean_average_precision"] = report.mean_ap;
    nlohmann::ordered_json per_class = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < report.classes.size(); ++i) {
        nlohmann::ordered_json c;
        c["label"] = report.classes[i];
        c["accuracy"] = report.per_class_accuracy[i];
        c["average_precision"] = report.per_class_ap[i];
        c["test_count"] = std::accumulate(report.confusion[i].begin(),
                                          report.confusion[i].end(), std::int64_t{0});
        per_class.push_back(c);
    }
    j["per_class"] = per_class;
    j["confusion"] = report.confusion;
    return j;
}

Report report_from_json(const nlohmann::ordered_json& j) {
    Report report;
    report.classes = j.at("classes").get<std::vector<std::string>>();
    report.test_count = j.at("test_count").get<std::int64_t>();
    report.skipped_unknown_labels = j.at("skipped_unknown_labels").get<std::int64_t>();
    report.accuracy = j.at("accuracy").get<double>();
    report.mean_ap = j.at("mean_average_precision").get<double>();
    for (const auto& c : j.at("per_class")) {
        report.per_class_accuracy.push_back(c.at("accuracy").get<double>());
        report.per_class_ap.push_back(c.at("average_precision").get<double>());
    }
    report.confusion =
        j.at("confusion").get<std::vector<std::vector<std::int64_t>>>();
    return report;
}

std::string confusion_csv(const Report& report) {
    std::string out = "truth\\predicted";
    for (const std::string& c : report.classes) out += "," + c;
    out += "\n";
    for (std::size_t r = 0; r < report.classes.size(); ++r) {
        out += report.classes[r];
        for (std::size_t c = 0; c < report.classes.size(); ++c)
            out += "," + std::to_string(report.confusion[r][c]);
        out += "\n";
    }
    return out;
}

std::string per_class_csv(const Report& report) {
    std::string out = "class,accuracy,average_precision\n";
    char buf[64];
    for (std::size_t i = 0; i < report.classes.size(); ++i) {
        std::snprintf(buf, sizeof(buf), ",%.6f,%.6f\n", report.per_class_accuracy[i],
                      report.per_class_ap[i]);
        out += report.classes[i] + buf;
    }
    return out;
}

} // namespace lccd
