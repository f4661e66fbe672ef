#include "lccd/colorgrid.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "lccd/errors.hpp"

namespace lccd {

std::pair<int, int> region_span(int extent, int count, int index) {
    const auto e = static_cast<std::int64_t>(extent);
    const int begin = static_cast<int>(e * index / count);
    const int end = static_cast<int>(e * (index + 1) / count);
    return {begin, end};
}

std::vector<double> normalize_counts(const std::vector<double>& counts, double total) {
    std::vector<double> hist(counts.size());
    if (total <= 0.0) {
        std::cerr << "lccd: empty region, falling back to uniform histogram\n";
        const double u = 1.0 / static_cast<double>(counts.size());
        for (double& v : hist) v = u;
        return hist;
    }
    for (std::size_t i = 0; i < counts.size(); ++i) hist[i] = counts[i] / total;
    return hist;
}

HistogramGrid compute_region_histograms(const ChannelPlane& plane, int grid_rows,
                                        int grid_cols, int bins) {
    if (grid_rows < 3 || grid_cols < 3)
        throw InvalidInputError("compute_region_histograms: grid must be at least 3x3, got " +
                                std::to_string(grid_rows) + "x" + std::to_string(grid_cols));
    if (bins < 2)
        throw InvalidInputError("compute_region_histograms: need at least 2 bins, got " +
                                std::to_string(bins));
    if (plane.height < grid_rows || plane.width < grid_cols)
        throw InvalidInputError("compute_region_histograms: plane " +
                                std::to_string(plane.width) + "x" + std::to_string(plane.height) +
                                " smaller than grid " + std::to_string(grid_cols) + "x" +
                                std::to_string(grid_rows));
    if (!(plane.hi > plane.lo))
        throw InvalidInputError("compute_region_histograms: empty value range");
    if (plane.values.size() != static_cast<std::size_t>(plane.width) * plane.height)
        throw InvalidInputError("compute_region_histograms: plane size mismatch");

    HistogramGrid grid;
    grid.rows = grid_rows;
    grid.cols = grid_cols;
    grid.bins = bins;
    grid.values.assign(static_cast<std::size_t>(grid_rows) * grid_cols * bins, 0.0);

    const double scale = bins / (plane.hi - plane.lo);
    std::vector<double> counts(static_cast<std::size_t>(bins));
    for (int r = 0; r < grid_rows; ++r) {
        const auto [y0, y1] = region_span(plane.height, grid_rows, r);
        for (int c = 0; c < grid_cols; ++c) {
            const auto [x0, x1] = region_span(plane.width, grid_cols, c);
            std::fill(counts.begin(), counts.end(), 0.0);
            for (int y = y0; y < y1; ++y) {
                const double* row = plane.values.data() +
                                    static_cast<std::size_t>(y) * plane.width;
                for (int x = x0; x < x1; ++x) {
                    int bin = static_cast<int>(std::floor((row[x] - plane.lo) * scale));
                    bin = std::clamp(bin, 0, bins - 1);
                    counts[static_cast<std::size_t>(bin)] += 1.0;
                }
            }
            const double total = static_cast<double>(y1 - y0) * (x1 - x0);
            const std::vector<double> hist = normalize_counts(counts, total);
            std::copy(hist.begin(), hist.end(),
                      grid.values.begin() +
                          (static_cast<std::size_t>(r) * grid_cols + c) * bins);
        }
    }
    return grid;
}

} // namespace lccd
