#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace lccd {

/// Diagonal-covariance Gaussian mixture codebook.
struct GmmModel {
    Eigen::VectorXd weights;   // K, on the simplex
    Eigen::MatrixXd means;     // K x dim
    Eigen::MatrixXd variances; // K x dim, strictly positive

    int components() const { return static_cast<int>(weights.size()); }
    int dim() const { return static_cast<int>(means.cols()); }
};

struct GmmFitOptions {
    int max_iter = 100;
    double tol = 1e-5; // relative mean log-likelihood improvement to stop at
    std::uint64_t seed = 0;
};

struct GmmFitResult {
    GmmModel model;
    std::vector<double> log_likelihood; // mean log-likelihood after each iteration
    bool converged = false;
    int reseeded_components = 0;
};

/// Fits a K-component diagonal GMM with EM, initialized by seeded k-means++.
/// Requires at least 10*K samples. Per-dimension variances are floored at
/// max(1e-6 * data variance, 1e-10). A component whose weight collapses below
/// 1e-8 is reseeded from the sample farthest from the current means.
GmmFitResult fit_gmm(const Eigen::MatrixXd& samples, int k, const GmmFitOptions& opts);

/// Posterior component probabilities for each sample row (N x K; rows sum to 1).
Eigen::MatrixXd responsibilities(const GmmModel& model, const Eigen::MatrixXd& samples);

/// Mean per-sample log-likelihood under the model.
double mean_log_likelihood(const GmmModel& model, const Eigen::MatrixXd& samples);

/// Reseeds components whose weight is below weight_floor from the sample
/// farthest from the current means. Returns the number reseeded. Exposed for
/// testing; fit_gmm applies it automatically.
int reseed_collapsed(GmmModel& model, const Eigen::MatrixXd& samples,
                     double weight_floor);

} // namespace lccd
