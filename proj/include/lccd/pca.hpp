#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace lccd {

/// Linear reduction model: y = components * (x - mean).
/// Component rows are orthonormal for plain fits; when whitening is enabled
/// the per-component scaling is folded into the rows.
struct PcaModel {
    Eigen::VectorXd mean;        // D
    Eigen::MatrixXd components;  // K x D
    Eigen::VectorXd eigenvalues; // K, populated by fit_pca only (not serialized)

    int input_dim() const { return static_cast<int>(components.cols()); }
    int output_dim() const { return static_cast<int>(components.rows()); }
};

/// Fits a PCA model on the rows of `samples` (N x D).
///
/// When N exceeds sample_cap, a seeded uniform subsample of sample_cap rows is
/// used. Components are the top-K eigenvectors of the sample covariance in
/// descending eigenvalue order, with each row's sign fixed so its
/// largest-magnitude entry is positive. A rank-deficient sample set still
/// yields K orthonormal rows (the eigenbasis completes it) with a warning.
///
/// Throws InvalidInputError when fewer than K samples are available and
/// InvalidConfigError for K < 1 or K > D.
PcaModel fit_pca(const Eigen::MatrixXd& samples, int output_dim,
                 std::int64_t sample_cap, std::uint64_t seed, bool whiten = false);

/// Projects one vector. Throws InvalidInputError on a length mismatch.
Eigen::VectorXd project(const PcaModel& model, const Eigen::Ref<const Eigen::VectorXd>& v);

/// Projects each row of an N x D matrix to N x K.
Eigen::MatrixXd project_rows(const PcaModel& model,
                             const Eigen::Ref<const Eigen::MatrixXd>& rows);

} // namespace lccd
