#include "lccd/gmm.hpp"

#include <cmath>
#include <iostream>
#include <limits>

#include "lccd/errors.hpp"
#include "lccd/rng.hpp"

namespace lccd {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kWeightFloor = 1e-8;

// log(w_k) + log N(x | mu_k, diag v_k) for every (sample, component) pair.
// Expanded into three matrix products so no per-component temporaries of the
// sample matrix are needed.
Eigen::MatrixXd weighted_log_density(const GmmModel& model, const Eigen::MatrixXd& x,
                                     const Eigen::MatrixXd& x_sq) {
    const int k = model.components();
    const int dim = model.dim();
    const Eigen::MatrixXd inv_v = model.variances.cwiseInverse();      // K x D
    const Eigen::MatrixXd mu_inv_v = model.means.cwiseProduct(inv_v);  // K x D

    Eigen::VectorXd offset(k);
    for (int j = 0; j < k; ++j) {
        const double log_det = model.variances.row(j).array().log().sum();
        const double mu_quad = model.means.row(j).dot(mu_inv_v.row(j));
        offset(j) = std::log(model.weights(j)) -
                    0.5 * (dim * kLog2Pi + log_det + mu_quad);
    }

    Eigen::MatrixXd log_p = x_sq * inv_v.transpose();       // N x K
    log_p.noalias() -= 2.0 * (x * mu_inv_v.transpose());
    log_p *= -0.5;
    log_p.rowwise() += offset.transpose();
    return log_p;
}

// Row-wise logsumexp; gamma is overwritten with the normalized posteriors.
Eigen::VectorXd normalize_rows(Eigen::MatrixXd& gamma) {
    Eigen::VectorXd lse(gamma.rows());
    for (Eigen::Index n = 0; n < gamma.rows(); ++n) {
        const double m = gamma.row(n).maxCoeff();
        const double s = (gamma.row(n).array() - m).exp().sum();
        lse(n) = m + std::log(s);
        gamma.row(n) = (gamma.row(n).array() - lse(n)).exp();
    }
    return lse;
}

Eigen::VectorXd per_dim_variance(const Eigen::MatrixXd& x) {
    const Eigen::RowVectorXd mean = x.colwise().mean();
    return ((x.rowwise() - mean).array().square().colwise().sum() /
            static_cast<double>(x.rows()))
        .transpose();
}

Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& x, int k, std::uint64_t seed) {
    const Eigen::Index n = x.rows();
    SplitMix64 rng(seed);
    Eigen::MatrixXd centers(k, x.cols());
    centers.row(0) = x.row(static_cast<Eigen::Index>(rng.below(n)));
    Eigen::VectorXd min_d2 =
        (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (int j = 1; j < k; ++j) {
        const double total = min_d2.sum();
        Eigen::Index pick = 0;
        if (total > 0.0) {
            double u = rng.uniform() * total;
            for (Eigen::Index i = 0; i < n; ++i) {
                u -= min_d2(i);
                if (u <= 0.0) {
                    pick = i;
                    break;
                }
                pick = i; // falls through to the last index on rounding
            }
        } else {
            pick = static_cast<Eigen::Index>(rng.below(n));
        }
        centers.row(j) = x.row(pick);
        min_d2 = min_d2.cwiseMin(
            (x.rowwise() - centers.row(j)).rowwise().squaredNorm());
    }
    return centers;
}

} // namespace

GmmFitResult fit_gmm(const Eigen::MatrixXd& samples, int k, const GmmFitOptions& opts) {
    const Eigen::Index n = samples.rows();
    if (k < 1) throw InvalidConfigError("fit_gmm: component count must be >= 1");
    if (opts.max_iter < 1 || !(opts.tol > 0.0))
        throw InvalidConfigError("fit_gmm: max_iter must be >= 1 and tol > 0");
    if (n < static_cast<Eigen::Index>(10) * k)
        throw InvalidInputError("fit_gmm: need at least " + std::to_string(10 * k) +
                                " samples for " + std::to_string(k) +
                                " components, got " + std::to_string(n));

    const Eigen::VectorXd data_var = per_dim_variance(samples);
    const Eigen::VectorXd var_floor =
        (1e-6 * data_var.array()).max(1e-10).matrix();

    GmmFitResult result;
    GmmModel& model = result.model;
    model.weights = Eigen::VectorXd::Constant(k, 1.0 / k);
    model.means = kmeanspp_init(samples, k, opts.seed);
    model.variances = data_var.transpose().replicate(k, 1).cwiseMax(
        var_floor.transpose().replicate(k, 1));

    const Eigen::MatrixXd x_sq = samples.array().square();
    double prev_ll = 0.0;
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        Eigen::MatrixXd gamma = weighted_log_density(model, samples, x_sq);
        const Eigen::VectorXd lse = normalize_rows(gamma);
        const double ll = lse.mean();
        result.log_likelihood.push_back(ll);
        if (iter > 0) {
            const double rel = (ll - prev_ll) / std::max(std::abs(prev_ll), 1e-12);
            if (rel < opts.tol) {
                result.converged = true;
                break;
            }
        }
        prev_ll = ll;

        const Eigen::VectorXd nk = gamma.colwise().sum();
        model.weights = nk / static_cast<double>(n);
        for (int j = 0; j < k; ++j) {
            const double mass = std::max(nk(j), 1e-300);
            model.means.row(j) = (gamma.col(j).transpose() * samples) / mass;
            const Eigen::RowVectorXd ex2 = (gamma.col(j).transpose() * x_sq) / mass;
            model.variances.row(j) =
                (ex2 - model.means.row(j).cwiseProduct(model.means.row(j)))
                    .cwiseMax(var_floor.transpose());
        }
        result.reseeded_components += reseed_collapsed(model, samples, kWeightFloor);
    }
    return result;
}

Eigen::MatrixXd responsibilities(const GmmModel& model, const Eigen::MatrixXd& samples) {
    if (samples.cols() != model.dim())
        throw InvalidInputError("responsibilities: sample dim " +
                                std::to_string(samples.cols()) +
                                " does not match model dim " +
                                std::to_string(model.dim()));
    const Eigen::MatrixXd x_sq = samples.array().square();
    Eigen::MatrixXd gamma = weighted_log_density(model, samples, x_sq);
    normalize_rows(gamma);
    return gamma;
}

double mean_log_likelihood(const GmmModel& model, const Eigen::MatrixXd& samples) {
    const Eigen::MatrixXd x_sq = samples.array().square();
    Eigen::MatrixXd gamma = weighted_log_density(model, samples, x_sq);
    return normalize_rows(gamma).mean();
}

int reseed_collapsed(GmmModel& model, const Eigen::MatrixXd& samples,
                     double weight_floor) {
    const int k = model.components();
    std::vector<int> collapsed;
    for (int j = 0; j < k; ++j)
        if (model.weights(j) < weight_floor) collapsed.push_back(j);
    if (collapsed.empty()) return 0;

    Eigen::VectorXd min_d2 = Eigen::VectorXd::Constant(
        samples.rows(), std::numeric_limits<double>::infinity());
    for (int j = 0; j < k; ++j)
        min_d2 = min_d2.cwiseMin(
            (samples.rowwise() - model.means.row(j)).rowwise().squaredNorm());

    const Eigen::VectorXd data_var = per_dim_variance(samples);
    const Eigen::VectorXd var_floor =
        (1e-6 * data_var.array()).max(1e-10).matrix();
    for (int j : collapsed) {
        Eigen::Index farthest = 0;
        min_d2.maxCoeff(&farthest);
        std::cerr << "lccd: fit_gmm: component " << j
                  << " collapsed, reseeding from sample " << farthest << "\n";
        model.means.row(j) = samples.row(farthest);
        model.variances.row(j) = data_var.transpose().cwiseMax(var_floor.transpose());
        model.weights(j) = 1.0 / k;
        min_d2 = min_d2.cwiseMin(
            (samples.rowwise() - model.means.row(j)).rowwise().squaredNorm());
    }
    model.weights /= model.weights.sum();
    return static_cast<int>(collapsed.size());
}

} // namespace lccd
