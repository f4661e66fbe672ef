#include "lccd/formats.hpp"

#include "io_util.hpp"
#include "lccd/errors.hpp"

namespace lccd {

namespace {

constexpr char kDescriptorMagic[8] = {'L', 'C', 'C', 'D', 'D', 'S', 'C', '1'};
constexpr char kPcaMagic[8] = {'L', 'C', 'C', 'D', 'P', 'C', 'A', '1'};
constexpr char kGmmMagic[8] = {'L', 'C', 'C', 'D', 'G', 'M', 'M', '1'};
constexpr char kEncodingMagic[8] = {'L', 'C', 'C', 'D', 'E', 'N', 'C', '1'};

// Header layout after the magic: stream-id, dim, rows, cols, image-count.
constexpr std::streamoff kCountOffset = 8 + 1 + 4 + 4 + 4;

std::ifstream open_read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInputError("cannot open file: " + path);
    return in;
}

std::ofstream open_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInputError("cannot open file for writing: " + path);
    return out;
}

DescriptorFile read_descriptor(const std::string& path, bool with_values) {
    std::ifstream in = open_read(path);
    io::expect_magic(in, kDescriptorMagic, path);
    DescriptorFile file;
    file.stream_id = io::read_u8(in, "stream id");
    file.dim = io::read_u32(in, "descriptor dim");
    file.patch_rows = io::read_u32(in, "patch rows");
    file.patch_cols = io::read_u32(in, "patch cols");
    const std::uint32_t count = io::read_u32(in, "image count");
    if (file.dim == 0 || file.patch_rows == 0 || file.patch_cols == 0)
        throw InvalidInputError(path + ": zero descriptor geometry");

    const std::size_t block = static_cast<std::size_t>(file.dim) *
                              file.patch_rows * file.patch_cols;
    file.ids.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        file.ids.push_back(io::read_string(in, "image id"));
        if (with_values) {
            std::vector<float> v(block);
            for (float& f : v) f = io::read_f32(in, "descriptor values");
            file.values.push_back(std::move(v));
        } else {
            in.seekg(static_cast<std::streamoff>(block) * 4, std::ios::cur);
            if (!in) throw InvalidInputError(path + ": truncated descriptor block");
        }
    }
    return file;
}

} // namespace

int DescriptorFile::find(const std::string& id) const {
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == id) return static_cast<int>(i);
    return -1;
}

DescriptorFileWriter::DescriptorFileWriter(const std::string& path,
                                           std::uint8_t stream_id, std::uint32_t dim,
                                           std::uint32_t patch_rows,
                                           std::uint32_t patch_cols)
    : out_(path, std::ios::binary | std::ios::trunc),
      path_(path),
      dim_(dim),
      block_(dim * patch_rows * patch_cols) {
    if (!out_) throw InvalidInputError("cannot open file for writing: " + path);
    if (dim == 0 || patch_rows == 0 || patch_cols == 0)
        throw InvalidInputError("descriptor writer: zero geometry");
    io::write_magic(out_, kDescriptorMagic);
    io::write_u8(out_, stream_id);
    io::write_u32(out_, dim);
    io::write_u32(out_, patch_rows);
    io::write_u32(out_, patch_cols);
    io::write_u32(out_, 0); // patched on close
}

DescriptorFileWriter::~DescriptorFileWriter() {
    if (!closed_) {
        try {
            close();
        } catch (...) {
            // destructor must not throw; close() explicitly to see errors
        }
    }
}

void DescriptorFileWriter::add(const DescriptorSet& set) {
    add(set.image_id, set.values);
}

void DescriptorFileWriter::add(const std::string& id, const std::vector<float>& values) {
    if (values.size() != block_)
        throw InvalidInputError("descriptor writer: image '" + id + "' has " +
                                std::to_string(values.size()) + " values, expected " +
                                std::to_string(block_));
    io::write_string(out_, id);
    for (float v : values) io::write_f32(out_, v);
    ++count_;
}

void DescriptorFileWriter::close() {
    if (closed_) return;
    closed_ = true;
    out_.seekp(kCountOffset);
    io::write_u32(out_, count_);
    out_.flush();
    if (!out_) throw InvalidInputError("descriptor writer: write failed: " + path_);
    out_.close();
}

DescriptorFile load_descriptor_file(const std::string& path) {
    return read_descriptor(path, true);
}

DescriptorFile load_descriptor_header(const std::string& path) {
    return read_descriptor(path, false);
}

void save_descriptor_file(const std::string& path, const DescriptorFile& file) {
    DescriptorFileWriter writer(path, file.stream_id, file.dim, file.patch_rows,
                                file.patch_cols);
    for (std::size_t i = 0; i < file.ids.size(); ++i)
        writer.add(file.ids[i], file.values[i]);
    writer.close();
}

void save_pca(const std::string& path, const PcaModel& model) {
    std::ofstream out = open_write(path);
    io::write_magic(out, kPcaMagic);
    const auto d = static_cast<std::uint32_t>(model.input_dim());
    const auto k = static_cast<std::uint32_t>(model.output_dim());
    io::write_u32(out, d);
    io::write_u32(out, k);
    for (std::uint32_t i = 0; i < d; ++i) io::write_f64(out, model.mean(i));
    for (std::uint32_t r = 0; r < k; ++r)
        for (std::uint32_t c = 0; c < d; ++c) io::write_f64(out, model.components(r, c));
    if (!out) throw InvalidInputError("write failed: " + path);
}

PcaModel load_pca(const std::string& path) {
    std::ifstream in = open_read(path);
    io::expect_magic(in, kPcaMagic, path);
    const std::uint32_t d = io::read_u32(in, "input dim");
    const std::uint32_t k = io::read_u32(in, "output dim");
    if (d == 0 || k == 0 || k > d)
        throw InvalidInputError(path + ": bad PCA dims D=" + std::to_string(d) +
                                " K=" + std::to_string(k));
    PcaModel model;
    model.mean.resize(d);
    model.components.resize(k, d);
    for (std::uint32_t i = 0; i < d; ++i) model.mean(i) = io::read_f64(in, "mean");
    for (std::uint32_t r = 0; r < k; ++r)
        for (std::uint32_t c = 0; c < d; ++c)
            model.components(r, c) = io::read_f64(in, "components");
    return model;
}

void save_gmm(const std::string& path, const GmmModel& model) {
    std::ofstream out = open_write(path);
    io::write_magic(out, kGmmMagic);
    const auto k = static_cast<std::uint32_t>(model.components());
    const auto d = static_cast<std::uint32_t>(model.dim());
    io::write_u32(out, k);
    io::write_u32(out, d);
    for (std::uint32_t i = 0; i < k; ++i) io::write_f64(out, model.weights(i));
    for (std::uint32_t r = 0; r < k; ++r)
        for (std::uint32_t c = 0; c < d; ++c) io::write_f64(out, model.means(r, c));
    for (std::uint32_t r = 0; r < k; ++r)
        for (std::uint32_t c = 0; c < d; ++c) io::write_f64(out, model.variances(r, c));
    if (!out) throw InvalidInputError("write failed: " + path);
}

GmmModel load_gmm(const std::string& path) {
    std::ifstream in = open_read(path);
    io::expect_magic(in, kGmmMagic, path);
    const std::uint32_t k = io::read_u32(in, "component count");
    const std::uint32_t d = io::read_u32(in, "dim");
    if (k == 0 || d == 0)
        throw InvalidInputError(path + ": bad GMM dims K=" + std::to_string(k) +
                                " dim=" + std::to_string(d));
    GmmModel model;
    model.weights.resize(k);
    model.means.resize(k, d);
    model.variances.resize(k, d);
    for (std::uint32_t i = 0; i < k; ++i) model.weights(i) = io::read_f64(in, "weights");
    for (std::uint32_t r = 0; r < k; ++r)
        for (std::uint32_t c = 0; c < d; ++c) model.means(r, c) = io::read_f64(in, "means");
    for (std::uint32_t r = 0; r < k; ++r)
        for (std::uint32_t c = 0; c < d; ++c)
            model.variances(r, c) = io::read_f64(in, "variances");
    return model;
}

void save_encodings(const std::string& path, const std::vector<EncodedImage>& encodings) {
    if (encodings.empty()) throw InvalidInputError("save_encodings: nothing to write");
    std::ofstream out = open_write(path);
    io::write_magic(out, kEncodingMagic);
    const auto dim = static_cast<std::uint32_t>(encodings.front().values.size());
    io::write_u32(out, dim);
    io::write_u32(out, static_cast<std::uint32_t>(encodings.size()));
    for (const EncodedImage& e : encodings) {
        if (e.values.size() != dim)
            throw InvalidInputError("save_encodings: inconsistent vector length for '" +
                                    e.image_id + "'");
        io::write_string(out, e.image_id);
        for (float v : e.values) io::write_f32(out, v);
    }
    if (!out) throw InvalidInputError("write failed: " + path);
}

std::vector<EncodedImage> load_encodings(const std::string& path) {
    std::ifstream in = open_read(path);
    io::expect_magic(in, kEncodingMagic, path);
    const std::uint32_t dim = io::read_u32(in, "encoding dim");
    const std::uint32_t count = io::read_u32(in, "encoding count");
    if (dim == 0) throw InvalidInputError(path + ": zero encoding dim");
    std::vector<EncodedImage> out;
    out.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        EncodedImage e;
        e.image_id = io::read_string(in, "image id");
        e.values.resize(dim);
        for (float& v : e.values) v = io::read_f32(in, "encoding values");
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace lccd
