#include "lccd/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "io_util.hpp"
#include "lccd/errors.hpp"

namespace lccd {

namespace {

constexpr char kImageMagic[8] = {'L', 'C', 'C', 'D', 'I', 'M', 'G', '1'};

void require_valid(const RasterImage& img, const char* op) {
    if (!img.valid())
        throw InvalidInputError(std::string(op) + ": invalid image (" +
                                std::to_string(img.width) + "x" +
                                std::to_string(img.height) + ", " +
                                std::to_string(img.data.size()) + " bytes)");
}

ChannelPlane make_plane(int w, int h, double lo, double hi) {
    ChannelPlane p;
    p.width = w;
    p.height = h;
    p.lo = lo;
    p.hi = hi;
    p.values.resize(static_cast<std::size_t>(w) * h);
    return p;
}

} // namespace

RasterImage resize_image(const RasterImage& img, int target_w, int target_h) {
    require_valid(img, "resize_image");
    if (target_w < 3 || target_h < 3)
        throw InvalidInputError("resize_image: target dimensions must be >= 3, got " +
                                std::to_string(target_w) + "x" + std::to_string(target_h));

    RasterImage out;
    out.width = target_w;
    out.height = target_h;
    out.data.resize(static_cast<std::size_t>(target_w) * target_h * 3);

    const double sx = static_cast<double>(img.width) / target_w;
    const double sy = static_cast<double>(img.height) / target_h;

    for (int y = 0; y < target_h; ++y) {
        const double src_y = (y + 0.5) * sy - 0.5;
        int y0 = static_cast<int>(std::floor(src_y));
        const double fy = src_y - y0;
        int y1 = std::min(y0 + 1, img.height - 1);
        y0 = std::clamp(y0, 0, img.height - 1);
        for (int x = 0; x < target_w; ++x) {
            const double src_x = (x + 0.5) * sx - 0.5;
            int x0 = static_cast<int>(std::floor(src_x));
            const double fx = src_x - x0;
            int x1 = std::min(x0 + 1, img.width - 1);
            x0 = std::clamp(x0, 0, img.width - 1);
            const double w00 = (1.0 - fx) * (1.0 - fy);
            const double w10 = fx * (1.0 - fy);
            const double w01 = (1.0 - fx) * fy;
            const double w11 = fx * fy;
            for (int c = 0; c < 3; ++c) {
                const double v = w00 * img.at(x0, y0, c) + w10 * img.at(x1, y0, c) +
                                 w01 * img.at(x0, y1, c) + w11 * img.at(x1, y1, c);
                out.at(x, y, c) = static_cast<std::uint8_t>(
                    std::clamp<long>(std::lround(v), 0, 255));
            }
        }
    }
    return out;
}

OpponentPlanes to_opponent(const RasterImage& img) {
    require_valid(img, "to_opponent");
    const double s2 = std::sqrt(2.0);
    const double s3 = std::sqrt(3.0);
    const double s6 = std::sqrt(6.0);

    OpponentPlanes out;
    out.o1 = make_plane(img.width, img.height, -255.0 / s2, 255.0 / s2);
    out.o2 = make_plane(img.width, img.height, -510.0 / s6, 510.0 / s6);
    out.o3 = make_plane(img.width, img.height, 0.0, 765.0 / s3);

    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = img.data[i * 3 + 0];
        const double g = img.data[i * 3 + 1];
        const double b = img.data[i * 3 + 2];
        out.o1.values[i] = (r - g) / s2;
        out.o2.values[i] = (r + g - 2.0 * b) / s6;
        out.o3.values[i] = (r + g + b) / s3;
    }
    return out;
}

RgbPlanes split_rgb(const RasterImage& img) {
    require_valid(img, "split_rgb");
    RgbPlanes out;
    out.r = make_plane(img.width, img.height, 0.0, 255.0);
    out.g = make_plane(img.width, img.height, 0.0, 255.0);
    out.b = make_plane(img.width, img.height, 0.0, 255.0);
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (std::size_t i = 0; i < n; ++i) {
        out.r.values[i] = img.data[i * 3 + 0];
        out.g.values[i] = img.data[i * 3 + 1];
        out.b.values[i] = img.data[i * 3 + 2];
    }
    return out;
}

RasterImage merge_rgb(const RgbPlanes& planes) {
    const ChannelPlane* chans[3] = {&planes.r, &planes.g, &planes.b};
    for (const ChannelPlane* p : chans) {
        if (p->width != planes.r.width || p->height != planes.r.height)
            throw InvalidInputError("merge_rgb: plane dimensions differ");
    }
    RasterImage img;
    img.width = planes.r.width;
    img.height = planes.r.height;
    img.data.resize(static_cast<std::size_t>(img.width) * img.height * 3);
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (std::size_t i = 0; i < n; ++i) {
        for (int c = 0; c < 3; ++c) {
            const double v = chans[c]->values[i];
            img.data[i * 3 + c] =
                static_cast<std::uint8_t>(std::clamp<long>(std::lround(v), 0, 255));
        }
    }
    return img;
}

RasterImage load_image(const std::string& path) {
    {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw InvalidInputError("cannot open image file: " + path);
        char magic[8] = {};
        in.read(magic, 8);
        if (in.gcount() == 8 && std::memcmp(magic, kImageMagic, 8) == 0)
            return read_raw_image(path);
    }
    cv::Mat m = cv::imread(path, cv::IMREAD_COLOR);
    if (m.empty()) throw InvalidInputError("cannot decode image file: " + path);
    RasterImage img;
    img.width = m.cols;
    img.height = m.rows;
    img.data.resize(static_cast<std::size_t>(m.cols) * m.rows * 3);
    for (int y = 0; y < m.rows; ++y) {
        const cv::Vec3b* row = m.ptr<cv::Vec3b>(y); // BGR
        for (int x = 0; x < m.cols; ++x) {
            img.at(x, y, 0) = row[x][2];
            img.at(x, y, 1) = row[x][1];
            img.at(x, y, 2) = row[x][0];
        }
    }
    return img;
}

RasterImage read_raw_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInputError("cannot open image file: " + path);
    io::expect_magic(in, kImageMagic, path);
    const std::uint32_t w = io::read_u32(in, "width");
    const std::uint32_t h = io::read_u32(in, "height");
    const std::uint8_t channels = io::read_u8(in, "channels");
    if (channels != 3)
        throw InvalidInputError(path + ": expected 3 channels, got " +
                                std::to_string(channels));
    if (w == 0 || h == 0 || w > (1u << 20) || h > (1u << 20))
        throw InvalidInputError(path + ": implausible dimensions " +
                                std::to_string(w) + "x" + std::to_string(h));
    RasterImage img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.data.resize(static_cast<std::size_t>(w) * h * 3);
    std::vector<std::uint8_t> plane(static_cast<std::size_t>(w) * h);
    for (int c = 0; c < 3; ++c) {
        io::read_bytes(in, plane.data(), plane.size(), "plane samples");
        for (std::size_t i = 0; i < plane.size(); ++i) img.data[i * 3 + c] = plane[i];
    }
    return img;
}

void write_raw_image(const std::string& path, const RasterImage& img) {
    require_valid(img, "write_raw_image");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInputError("cannot open for writing: " + path);
    io::write_magic(out, kImageMagic);
    io::write_u32(out, static_cast<std::uint32_t>(img.width));
    io::write_u32(out, static_cast<std::uint32_t>(img.height));
    io::write_u8(out, 3);
    std::vector<std::uint8_t> plane(static_cast<std::size_t>(img.width) * img.height);
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = img.data[i * 3 + c];
        io::write_bytes(out, plane.data(), plane.size());
    }
    if (!out) throw InvalidInputError("write failed: " + path);
}

} // namespace lccd
