#include "lccd/pca.hpp"

#include <iostream>

#include <Eigen/Eigenvalues>

#include "lccd/errors.hpp"
#include "lccd/rng.hpp"

namespace lccd {

PcaModel fit_pca(const Eigen::MatrixXd& samples, int output_dim,
                 std::int64_t sample_cap, std::uint64_t seed, bool whiten) {
    const auto n_all = static_cast<std::size_t>(samples.rows());
    const int dim = static_cast<int>(samples.cols());
    if (output_dim < 1 || output_dim > dim)
        throw InvalidConfigError("fit_pca: output dim " + std::to_string(output_dim) +
                                 " out of range for input dim " + std::to_string(dim));
    if (sample_cap < 1) throw InvalidConfigError("fit_pca: sample cap must be positive");

    Eigen::MatrixXd selected;
    const Eigen::MatrixXd* data = &samples;
    if (n_all > static_cast<std::size_t>(sample_cap)) {
        const std::vector<std::size_t> idx =
            sample_indices(n_all, static_cast<std::size_t>(sample_cap), seed);
        selected.resize(static_cast<Eigen::Index>(idx.size()), dim);
        for (std::size_t i = 0; i < idx.size(); ++i)
            selected.row(static_cast<Eigen::Index>(i)) =
                samples.row(static_cast<Eigen::Index>(idx[i]));
        data = &selected;
    }

    const Eigen::Index n = data->rows();
    if (n < output_dim)
        throw InvalidInputError("fit_pca: " + std::to_string(n) +
                                " samples after capping, need at least " +
                                std::to_string(output_dim));

    PcaModel model;
    model.mean = data->colwise().mean();
    const Eigen::MatrixXd centered = data->rowwise() - model.mean.transpose();
    const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
    const Eigen::MatrixXd cov = centered.transpose() * centered / denom;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success)
        throw InvalidInputError("fit_pca: eigendecomposition failed");

    // Eigen returns ascending eigenvalues; take the top K from the back.
    model.components.resize(output_dim, dim);
    model.eigenvalues.resize(output_dim);
    const double scale = std::max(solver.eigenvalues().maxCoeff(), 1.0);
    int deficient = 0;
    for (int k = 0; k < output_dim; ++k) {
        const Eigen::Index src = dim - 1 - k;
        Eigen::VectorXd row = solver.eigenvectors().col(src);
        Eigen::Index max_at = 0;
        row.cwiseAbs().maxCoeff(&max_at);
        if (row(max_at) < 0.0) row = -row;
        model.components.row(k) = row.transpose();
        const double ev = std::max(solver.eigenvalues()(src), 0.0);
        model.eigenvalues(k) = ev;
        if (ev < 1e-12 * scale) ++deficient;
    }
    if (deficient > 0)
        std::cerr << "lccd: fit_pca: sample covariance is rank deficient; " << deficient
                  << " of " << output_dim
                  << " components come from the orthonormal completion\n";

    if (whiten) {
        for (int k = 0; k < output_dim; ++k)
            model.components.row(k) /= std::sqrt(model.eigenvalues(k) + 1e-12);
    }
    return model;
}

Eigen::VectorXd project(const PcaModel& model,
                        const Eigen::Ref<const Eigen::VectorXd>& v) {
    if (v.size() != model.mean.size())
        throw InvalidInputError("project: vector length " + std::to_string(v.size()) +
                                " does not match model input dim " +
                                std::to_string(model.mean.size()));
    return model.components * (v - model.mean);
}

Eigen::MatrixXd project_rows(const PcaModel& model,
                             const Eigen::Ref<const Eigen::MatrixXd>& rows) {
    if (rows.cols() != model.mean.size())
        throw InvalidInputError("project_rows: row length " + std::to_string(rows.cols()) +
                                " does not match model input dim " +
                                std::to_string(model.mean.size()));
    return (rows.rowwise() - model.mean.transpose()) * model.components.transpose();
}

} // namespace lccd
