#pragma once

// Binary file formats, all little-endian:
//
//   LCCDDSC1  descriptor streams: u8 stream-id, u32 dim, u32 patch-rows,
//             u32 patch-cols, u32 image-count, then per image a u16-length
//             UTF-8 id followed by dim*rows*cols f32 values (patch-major,
//             patches row-major).
//   LCCDPCA1  reduction model: u32 D, u32 K, f64 mean[D],
//             f64 components[K][D] row-major.
//   LCCDGMM1  codebook: u32 K, u32 dim, f64 weights[K], f64 means[K][dim],
//             f64 variances[K][dim].
//   LCCDENC1  encoded vectors: u32 dim, u32 count, then per image a
//             u16-length UTF-8 id followed by dim f32 values.

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "lccd/descriptor.hpp"
#include "lccd/encoding.hpp"
#include "lccd/gmm.hpp"
#include "lccd/pca.hpp"

namespace lccd {

/// In-memory view of an LCCDDSC1 file.
struct DescriptorFile {
    std::uint8_t stream_id = 0;
    std::uint32_t dim = 0;
    std::uint32_t patch_rows = 0;
    std::uint32_t patch_cols = 0;
    std::vector<std::string> ids;
    std::vector<std::vector<float>> values; // one block per image

    std::uint32_t patches_per_image() const { return patch_rows * patch_cols; }
    /// Index of an image id, or -1.
    int find(const std::string& id) const;
};

/// Streaming LCCDDSC1 writer. The image count is patched into the header on
/// close, so the number of images need not be known up front.
class DescriptorFileWriter {
public:
    DescriptorFileWriter(const std::string& path, std::uint8_t stream_id,
                         std::uint32_t dim, std::uint32_t patch_rows,
                         std::uint32_t patch_cols);
    ~DescriptorFileWriter();

    void add(const DescriptorSet& set);
    void add(const std::string& id, const std::vector<float>& values);
    void close();
    std::uint32_t count() const { return count_; }

private:
    std::ofstream out_;
    std::string path_;
    std::uint32_t dim_;
    std::uint32_t block_;
    std::uint32_t count_ = 0;
    bool closed_ = false;
};

DescriptorFile load_descriptor_file(const std::string& path);
void save_descriptor_file(const std::string& path, const DescriptorFile& file);

/// Header-only read (id table and geometry, values skipped).
DescriptorFile load_descriptor_header(const std::string& path);

void save_pca(const std::string& path, const PcaModel& model);
PcaModel load_pca(const std::string& path);

void save_gmm(const std::string& path, const GmmModel& model);
GmmModel load_gmm(const std::string& path);

void save_encodings(const std::string& path, const std::vector<EncodedImage>& encodings);
std::vector<EncodedImage> load_encodings(const std::string& path);

} // namespace lccd
