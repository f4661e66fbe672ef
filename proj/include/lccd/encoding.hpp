#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lccd/gmm.hpp"

namespace lccd {

/// Fixed-length image encoding (one vector per image per stream, or the
/// fused concatenation). Values are stored as f32, matching the file format.
struct EncodedImage {
    std::string image_id;
    std::vector<float> values;
};

/// Unnormalized Fisher vector of a descriptor set (rows of `descriptors`)
/// under a GMM codebook: for each component, the averaged soft-assignment
/// gradients with respect to the means and then the standard deviations.
/// Layout: [mean-gradient blocks k=0..K-1 | variance-gradient blocks k=0..K-1],
/// each block `dim` wide; total length 2*K*dim.
Eigen::VectorXd fisher_vector_raw(const GmmModel& model,
                                  const Eigen::MatrixXd& descriptors);

/// Fisher vector with signed square-root (power) normalization followed by
/// global L2 normalization. Throws InvalidInputError on an empty descriptor set.
EncodedImage fisher_vector(const GmmModel& model, const Eigen::MatrixXd& descriptors,
                           const std::string& image_id);

/// Hard-assignment bag-of-words alternative: a histogram over the most
/// probable component of each descriptor, L2-normalized. Length K.
EncodedImage bow_encode(const GmmModel& model, const Eigen::MatrixXd& descriptors,
                        const std::string& image_id);

/// Concatenates per-stream encodings of the same image and re-normalizes to
/// unit L2 length. Throws InvalidInputError on an empty list or mismatched ids.
EncodedImage concat_encodings(const std::vector<EncodedImage>& parts);

} // namespace lccd
