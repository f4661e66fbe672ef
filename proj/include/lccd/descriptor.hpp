#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lccd/colorgrid.hpp"
#include "lccd/divergence.hpp"
#include "lccd/image.hpp"

namespace lccd {

/// Stream identifiers used both in memory and in descriptor files.
enum class Stream : std::uint8_t { Spatial = 0, Channel = 1 };

/// Stream id reserved for descriptor files produced outside this pipeline
/// (e.g. gradient descriptors to fuse with).
constexpr std::uint8_t kExternalStreamId = 255;

/// Channel pairs for the channel-contrast stream. GB is supported but off by
/// default; its contrast tends to be redundant with the other two.
enum class ChannelPair { RG, RB, GB };

ChannelPair parse_channel_pair(const std::string& text);
std::string to_string(ChannelPair pair);

/// Top-left region coordinate of a 3x3-region patch.
struct PatchIndex {
    int row = 0;
    int col = 0;
};

/// Everything extraction needs to turn an image into descriptor streams.
struct DescriptorOptions {
    int resize_width = 470;
    int resize_height = 380;
    int grid_rows = 50;
    int grid_cols = 50;
    int bins = 20;
    SubspaceConfig subspace{3};
    DivergenceKind kind{};
    std::vector<ChannelPair> pairs{ChannelPair::RG, ChannelPair::RB};
};

/// One image's worth of per-patch descriptors for a single stream.
/// Values are patch-major: patches enumerated row-major, each contributing
/// `dim` consecutive floats.
struct DescriptorSet {
    std::string image_id;
    std::uint8_t stream_id = 0;
    int dim = 0;
    int patch_rows = 0;
    int patch_cols = 0;
    std::vector<float> values;

    int patch_count() const { return patch_rows * patch_cols; }
    std::span<const float> patch(int r, int c) const {
        return {values.data() +
                    (static_cast<std::size_t>(r) * patch_cols + c) * dim,
                static_cast<std::size_t>(dim)};
    }
};

/// Descriptor length of the spatial stream: 3 channels x 8 neighbors x
/// (bins - window + 1) windowed contrasts.
int spatial_dim(const DescriptorOptions& opts);

/// Descriptor length of the channel stream: pairs x 9 regions x
/// (bins - window + 1).
int channel_dim(const DescriptorOptions& opts);

/// Spatial contrast of one patch: for each opponent channel (O1, O2, O3),
/// the windowed divergences between the center region's histogram and each of
/// its 8 neighbors in order top-left, top, top-right, left, right,
/// bottom-left, bottom, bottom-right. Non-finite divergences (possible for
/// KL-type kinds on disjoint supports) are clamped to +/-1e12 so descriptors
/// stay finite.
std::vector<double> spatial_contrast_patch(const HistogramGrid& o1,
                                           const HistogramGrid& o2,
                                           const HistogramGrid& o3,
                                           PatchIndex patch,
                                           const DivergenceKind& kind,
                                           const SubspaceConfig& cfg);

/// Channel contrast of one patch: for each requested pair (x, y) and each of
/// the patch's 9 regions in row-major order, the windowed divergences between
/// the x-channel and y-channel histograms of that region.
std::vector<double> channel_contrast_patch(const HistogramGrid& r,
                                           const HistogramGrid& g,
                                           const HistogramGrid& b,
                                           PatchIndex patch,
                                           const std::vector<ChannelPair>& pairs,
                                           const DivergenceKind& kind,
                                           const SubspaceConfig& cfg);

struct ExtractedImage {
    DescriptorSet spatial;
    DescriptorSet channel;
};

/// Full dense extraction for one image: resize, color transforms, region
/// histograms, then both contrast streams over every 3x3-region patch in
/// row-major order. Deterministic for fixed input and options.
ExtractedImage extract_image(const RasterImage& img, const DescriptorOptions& opts,
                             const std::string& image_id);

} // namespace lccd
