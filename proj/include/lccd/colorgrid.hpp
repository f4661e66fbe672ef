#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lccd/image.hpp"

namespace lccd {

/// Per-region probability histograms over a rows x cols partition of a plane.
/// Each histogram has `bins` entries and sums to 1.
struct HistogramGrid {
    int rows = 0;
    int cols = 0;
    int bins = 0;
    std::vector<double> values; // rows * cols * bins, region-major

    std::span<const double> histogram(int r, int c) const {
        return {values.data() +
                    (static_cast<std::size_t>(r) * cols + c) * bins,
                static_cast<std::size_t>(bins)};
    }
};

/// Half-open pixel span [begin, end) of partition cell `index` out of `count`
/// along an axis of `extent` pixels. Cells differ in size by at most one pixel.
std::pair<int, int> region_span(int extent, int count, int index);

/// Turns raw bin counts into a probability histogram. An empty region (total
/// of zero) falls back to the uniform histogram so downstream divergences
/// stay finite.
std::vector<double> normalize_counts(const std::vector<double>& counts, double total);

/// Computes the per-region value histograms of a plane, binned uniformly over
/// the plane's declared [lo, hi] range. Requires grid_rows, grid_cols >= 3,
/// bins >= 2 and a plane at least as large as the grid.
HistogramGrid compute_region_histograms(const ChannelPlane& plane, int grid_rows,
                                        int grid_cols, int bins);

} // namespace lccd
