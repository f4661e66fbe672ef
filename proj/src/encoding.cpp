#include "lccd/encoding.hpp"

#include <cmath>
#include <iostream>

#include "lccd/errors.hpp"

namespace lccd {

namespace {

void require_descriptors(const GmmModel& model, const Eigen::MatrixXd& descriptors,
                         const char* op) {
    if (descriptors.rows() == 0)
        throw InvalidInputError(std::string(op) + ": empty descriptor set");
    if (descriptors.cols() != model.dim())
        throw InvalidInputError(std::string(op) + ": descriptor dim " +
                                std::to_string(descriptors.cols()) +
                                " does not match codebook dim " +
                                std::to_string(model.dim()));
}

std::vector<float> to_unit_f32(const Eigen::VectorXd& v, const char* op) {
    const double norm = v.norm();
    std::vector<float> out(static_cast<std::size_t>(v.size()));
    if (norm > 0.0) {
        for (Eigen::Index i = 0; i < v.size(); ++i)
            out[static_cast<std::size_t>(i)] = static_cast<float>(v(i) / norm);
    } else {
        std::cerr << "lccd: " << op << ": zero-norm encoding left unnormalized\n";
    }
    return out;
}

} // namespace

Eigen::VectorXd fisher_vector_raw(const GmmModel& model,
                                  const Eigen::MatrixXd& descriptors) {
    require_descriptors(model, descriptors, "fisher_vector");
    const int k = model.components();
    const int dim = model.dim();
    const auto n = static_cast<double>(descriptors.rows());

    const Eigen::MatrixXd gamma = responsibilities(model, descriptors); // N x K

    // Standardized residuals per component, accumulated directly; the
    // expanded-moment form loses precision when means are far from zero.
    Eigen::VectorXd out(2 * k * dim);
    Eigen::ArrayXXd u(descriptors.rows(), dim);
    for (int j = 0; j < k; ++j) {
        const Eigen::RowVectorXd sigma = model.variances.row(j).cwiseSqrt();
        u = (descriptors.rowwise() - model.means.row(j)).array().rowwise() /
            sigma.array();
        const double w = model.weights(j);
        // (1 / (N sqrt(w))) * sum_n gamma_nj (x_n - mu) / sigma
        out.segment(static_cast<Eigen::Index>(j) * dim, dim) =
            (gamma.col(j).transpose() * u.matrix()).transpose() / (n * std::sqrt(w));
        // (1 / (N sqrt(2w))) * sum_n gamma_nj (((x_n - mu) / sigma)^2 - 1)
        out.segment(static_cast<Eigen::Index>(k + j) * dim, dim) =
            (gamma.col(j).transpose() * (u.square() - 1.0).matrix()).transpose() /
            (n * std::sqrt(2.0 * w));
    }
    return out;
}

EncodedImage fisher_vector(const GmmModel& model, const Eigen::MatrixXd& descriptors,
                           const std::string& image_id) {
    Eigen::VectorXd fv = fisher_vector_raw(model, descriptors);
    for (Eigen::Index i = 0; i < fv.size(); ++i)
        fv(i) = fv(i) >= 0.0 ? std::sqrt(fv(i)) : -std::sqrt(-fv(i));
    return {image_id, to_unit_f32(fv, "fisher_vector")};
}

EncodedImage bow_encode(const GmmModel& model, const Eigen::MatrixXd& descriptors,
                        const std::string& image_id) {
    require_descriptors(model, descriptors, "bow_encode");
    const Eigen::MatrixXd gamma = responsibilities(model, descriptors);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(model.components());
    for (Eigen::Index i = 0; i < gamma.rows(); ++i) {
        Eigen::Index best = 0;
        gamma.row(i).maxCoeff(&best);
        counts(best) += 1.0;
    }
    return {image_id, to_unit_f32(counts, "bow_encode")};
}

EncodedImage concat_encodings(const std::vector<EncodedImage>& parts) {
    if (parts.empty()) throw InvalidInputError("concat_encodings: no parts");
    std::size_t total = 0;
    for (const EncodedImage& part : parts) {
        if (part.image_id != parts.front().image_id)
            throw InvalidInputError("concat_encodings: image id mismatch ('" +
                                    parts.front().image_id + "' vs '" +
                                    part.image_id + "')");
        total += part.values.size();
    }
    Eigen::VectorXd merged(static_cast<Eigen::Index>(total));
    Eigen::Index at = 0;
    for (const EncodedImage& part : parts)
        for (float v : part.values) merged(at++) = v;
    return {parts.front().image_id, to_unit_f32(merged, "concat_encodings")};
}

} // namespace lccd
