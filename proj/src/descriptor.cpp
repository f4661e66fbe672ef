#include "lccd/descriptor.hpp"

#include <cmath>

#include "lccd/errors.hpp"

namespace lccd {

namespace {

// Neighbor offsets relative to the patch center, row-major around the center.
constexpr int kNeighborOffsets[8][2] = {
    {-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1},
};

constexpr double kInfSentinel = 1e12;

void validate_patch(const HistogramGrid& grid, PatchIndex patch) {
    if (patch.row < 0 || patch.col < 0 || patch.row > grid.rows - 3 ||
        patch.col > grid.cols - 3)
        throw InvalidInputError("patch (" + std::to_string(patch.row) + "," +
                                std::to_string(patch.col) + ") out of range for " +
                                std::to_string(grid.rows) + "x" +
                                std::to_string(grid.cols) + " grid");
}

void validate_same_shape(const HistogramGrid& a, const HistogramGrid& b) {
    if (a.rows != b.rows || a.cols != b.cols || a.bins != b.bins)
        throw InvalidInputError("histogram grids have different shapes");
}

void clamp_non_finite(std::vector<double>& values, std::size_t from) {
    for (std::size_t i = from; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            values[i] = values[i] > 0.0 ? kInfSentinel : -kInfSentinel;
    }
}

} // namespace

ChannelPair parse_channel_pair(const std::string& text) {
    if (text == "rg") return ChannelPair::RG;
    if (text == "rb") return ChannelPair::RB;
    if (text == "gb") return ChannelPair::GB;
    throw InvalidConfigError("unknown channel pair '" + text + "' (expected rg, rb or gb)");
}

std::string to_string(ChannelPair pair) {
    switch (pair) {
    case ChannelPair::RG: return "rg";
    case ChannelPair::RB: return "rb";
    case ChannelPair::GB: return "gb";
    }
    return "rg";
}

int spatial_dim(const DescriptorOptions& opts) {
    return 3 * 8 * (opts.bins - opts.subspace.window + 1);
}

int channel_dim(const DescriptorOptions& opts) {
    return static_cast<int>(opts.pairs.size()) * 9 *
           (opts.bins - opts.subspace.window + 1);
}

std::vector<double> spatial_contrast_patch(const HistogramGrid& o1,
                                           const HistogramGrid& o2,
                                           const HistogramGrid& o3,
                                           PatchIndex patch,
                                           const DivergenceKind& kind,
                                           const SubspaceConfig& cfg) {
    validate_same_shape(o1, o2);
    validate_same_shape(o1, o3);
    validate_patch(o1, patch);

    const int cr = patch.row + 1;
    const int cc = patch.col + 1;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(3) * 8 * (o1.bins - cfg.window + 1));
    for (const HistogramGrid* grid : {&o1, &o2, &o3}) {
        const std::span<const double> center = grid->histogram(cr, cc);
        for (const auto& off : kNeighborOffsets) {
            subspace_divergence_append(kind, center,
                                       grid->histogram(cr + off[0], cc + off[1]),
                                       cfg, out);
        }
    }
    clamp_non_finite(out, 0);
    return out;
}

std::vector<double> channel_contrast_patch(const HistogramGrid& r,
                                           const HistogramGrid& g,
                                           const HistogramGrid& b,
                                           PatchIndex patch,
                                           const std::vector<ChannelPair>& pairs,
                                           const DivergenceKind& kind,
                                           const SubspaceConfig& cfg) {
    if (pairs.empty())
        throw InvalidConfigError("channel_contrast_patch: empty channel pair list");
    validate_same_shape(r, g);
    validate_same_shape(r, b);
    validate_patch(r, patch);

    std::vector<double> out;
    out.reserve(pairs.size() * 9 * (r.bins - cfg.window + 1));
    for (ChannelPair pair : pairs) {
        const HistogramGrid* x = nullptr;
        const HistogramGrid* y = nullptr;
        switch (pair) {
        case ChannelPair::RG: x = &r; y = &g; break;
        case ChannelPair::RB: x = &r; y = &b; break;
        case ChannelPair::GB: x = &g; y = &b; break;
        }
        for (int dr = 0; dr < 3; ++dr) {
            for (int dc = 0; dc < 3; ++dc) {
                subspace_divergence_append(
                    kind, x->histogram(patch.row + dr, patch.col + dc),
                    y->histogram(patch.row + dr, patch.col + dc), cfg, out);
            }
        }
    }
    clamp_non_finite(out, 0);
    return out;
}

ExtractedImage extract_image(const RasterImage& img, const DescriptorOptions& opts,
                             const std::string& image_id) {
    if (opts.bins < 2 || opts.subspace.window < 1 || opts.subspace.window > opts.bins)
        throw InvalidConfigError("extract_image: invalid bins/window combination");
    if (opts.pairs.empty())
        throw InvalidConfigError("extract_image: empty channel pair list");

    const RasterImage resized =
        resize_image(img, opts.resize_width, opts.resize_height);
    const OpponentPlanes opp = to_opponent(resized);
    const RgbPlanes rgb = split_rgb(resized);

    const HistogramGrid go1 =
        compute_region_histograms(opp.o1, opts.grid_rows, opts.grid_cols, opts.bins);
    const HistogramGrid go2 =
        compute_region_histograms(opp.o2, opts.grid_rows, opts.grid_cols, opts.bins);
    const HistogramGrid go3 =
        compute_region_histograms(opp.o3, opts.grid_rows, opts.grid_cols, opts.bins);
    const HistogramGrid gr =
        compute_region_histograms(rgb.r, opts.grid_rows, opts.grid_cols, opts.bins);
    const HistogramGrid gg =
        compute_region_histograms(rgb.g, opts.grid_rows, opts.grid_cols, opts.bins);
    const HistogramGrid gb =
        compute_region_histograms(rgb.b, opts.grid_rows, opts.grid_cols, opts.bins);

    const int patch_rows = opts.grid_rows - 2;
    const int patch_cols = opts.grid_cols - 2;
    const int sdim = spatial_dim(opts);
    const int cdim = channel_dim(opts);

    ExtractedImage out;
    out.spatial.image_id = image_id;
    out.spatial.stream_id = static_cast<std::uint8_t>(Stream::Spatial);
    out.spatial.dim = sdim;
    out.spatial.patch_rows = patch_rows;
    out.spatial.patch_cols = patch_cols;
    out.spatial.values.reserve(static_cast<std::size_t>(patch_rows) * patch_cols * sdim);

    out.channel.image_id = image_id;
    out.channel.stream_id = static_cast<std::uint8_t>(Stream::Channel);
    out.channel.dim = cdim;
    out.channel.patch_rows = patch_rows;
    out.channel.patch_cols = patch_cols;
    out.channel.values.reserve(static_cast<std::size_t>(patch_rows) * patch_cols * cdim);

    for (int pr = 0; pr < patch_rows; ++pr) {
        for (int pc = 0; pc < patch_cols; ++pc) {
            const PatchIndex patch{pr, pc};
            const std::vector<double> sp =
                spatial_contrast_patch(go1, go2, go3, patch, opts.kind, opts.subspace);
            for (double v : sp) out.spatial.values.push_back(static_cast<float>(v));
            const std::vector<double> ch = channel_contrast_patch(
                gr, gg, gb, patch, opts.pairs, opts.kind, opts.subspace);
            for (double v : ch) out.channel.values.push_back(static_cast<float>(v));
        }
    }
    return out;
}

} // namespace lccd
