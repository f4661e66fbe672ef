#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lccd {

/// Decoded 3-channel 8-bit image. Row-major, channel-interleaved, R,G,B order.
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // width * height * 3 bytes

    std::uint8_t at(int x, int y, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    std::uint8_t& at(int x, int y, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    bool valid() const {
        return width > 0 && height > 0 &&
               data.size() == static_cast<std::size_t>(width) * height * 3;
    }
};

/// A single real-valued channel with a declared value range [lo, hi].
/// The range is a property of the transform that produced the plane, not of
/// the observed values, so histograms are comparable across images.
struct ChannelPlane {
    int width = 0;
    int height = 0;
    double lo = 0.0;
    double hi = 255.0;
    std::vector<double> values; // row-major

    double at(int x, int y) const {
        return values[static_cast<std::size_t>(y) * width + x];
    }
};

struct OpponentPlanes {
    ChannelPlane o1; // (R - G) / sqrt(2)
    ChannelPlane o2; // (R + G - 2B) / sqrt(6)
    ChannelPlane o3; // (R + G + B) / sqrt(3)
};

struct RgbPlanes {
    ChannelPlane r;
    ChannelPlane g;
    ChannelPlane b;
};

/// Bilinear resize (pixel-center aligned) to exactly target_w x target_h.
/// Throws InvalidInputError for an empty image or target dims < 3.
RasterImage resize_image(const RasterImage& img, int target_w, int target_h);

/// RGB -> opponent color space. O1 and O2 carry color opponency, O3 intensity.
OpponentPlanes to_opponent(const RasterImage& img);

/// Split into three [0,255] planes, one per channel.
RgbPlanes split_rgb(const RasterImage& img);

/// Recombine planes produced by split_rgb into an image (lossless round-trip).
RasterImage merge_rgb(const RgbPlanes& planes);

/// Reads an image file. PNG/JPEG are handled by the decoding layer; files
/// starting with the "LCCDIMG1" magic are parsed as raw planar dumps.
RasterImage load_image(const std::string& path);

/// Raw planar dump: magic "LCCDIMG1", u32 width, u32 height, u8 channels (3),
/// little-endian, followed by the samples plane by plane, each row-major.
RasterImage read_raw_image(const std::string& path);
void write_raw_image(const std::string& path, const RasterImage& img);

} // namespace lccd
