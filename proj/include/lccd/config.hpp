#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lccd/descriptor.hpp"
#include "lccd/divergence.hpp"

namespace lccd {

/// Declarative pipeline configuration. Serialized as a flat key=value file
/// with '#' comments; every constant is written out explicitly so deviations
/// from the defaults are visible in diffs.
struct PipelineConfig {
    int resize_width = 470;
    int resize_height = 380;
    int grid_rows = 50;
    int grid_cols = 50;
    int bins = 20;
    int subspace_window = 3;
    DivergenceKind divergence{};
    std::vector<ChannelPair> pairs{ChannelPair::RG, ChannelPair::RB};

    int pca_dim = 80;
    bool pca_whiten = false;
    std::int64_t pca_sample_cap = 200000;

    int gmm_components = 32; // full-scale runs use 256
    std::int64_t gmm_sample_cap = 200000;
    int gmm_max_iter = 100;
    double gmm_tol = 1e-5;

    std::string encoder = "fv"; // "fv" or "bow"

    double svm_l2 = 1e-4;
    int svm_epochs = 50;
    double svm_learning_rate = 1.0;

    std::uint64_t seed = 0;

    bool operator==(const PipelineConfig&) const = default;
};

/// Extraction options implied by a pipeline config.
DescriptorOptions descriptor_options(const PipelineConfig& config);

/// Checks value ranges and combinations; throws InvalidConfigError.
void validate_config(const PipelineConfig& config);

PipelineConfig parse_config(const std::string& text);
std::string serialize_config(const PipelineConfig& config);

PipelineConfig load_config(const std::string& path);
void save_config(const std::string& path, const PipelineConfig& config);

} // namespace lccd
