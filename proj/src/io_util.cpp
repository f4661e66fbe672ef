#include "io_util.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

#include "lccd/errors.hpp"

namespace lccd::io {

void write_bytes(std::ostream& out, const void* data, std::size_t n) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

void write_u8(std::ostream& out, std::uint8_t v) {
    write_bytes(out, &v, 1);
}

void write_u16(std::ostream& out, std::uint16_t v) {
    unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>(v >> 8)};
    write_bytes(out, b, 2);
}

void write_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    write_bytes(out, b, 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    write_bytes(out, b, 8);
}

void write_f32(std::ostream& out, float v) {
    write_u32(out, std::bit_cast<std::uint32_t>(v));
}

void write_f64(std::ostream& out, double v) {
    write_u64(out, std::bit_cast<std::uint64_t>(v));
}

void write_magic(std::ostream& out, const char magic[8]) {
    write_bytes(out, magic, 8);
}

void write_string(std::ostream& out, const std::string& s) {
    if (s.size() > 0xffff)
        throw InvalidInputError("string too long for u16-length field: " +
                                std::to_string(s.size()) + " bytes");
    write_u16(out, static_cast<std::uint16_t>(s.size()));
    write_bytes(out, s.data(), s.size());
}

void read_bytes(std::istream& in, void* data, std::size_t n, const char* what) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n)
        throw InvalidInputError(std::string("truncated file while reading ") + what);
}

std::uint8_t read_u8(std::istream& in, const char* what) {
    std::uint8_t v;
    read_bytes(in, &v, 1, what);
    return v;
}

std::uint16_t read_u16(std::istream& in, const char* what) {
    unsigned char b[2];
    read_bytes(in, b, 2, what);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t read_u32(std::istream& in, const char* what) {
    unsigned char b[4];
    read_bytes(in, b, 4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t read_u64(std::istream& in, const char* what) {
    unsigned char b[8];
    read_bytes(in, b, 8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

float read_f32(std::istream& in, const char* what) {
    return std::bit_cast<float>(read_u32(in, what));
}

double read_f64(std::istream& in, const char* what) {
    return std::bit_cast<double>(read_u64(in, what));
}

void expect_magic(std::istream& in, const char magic[8], const std::string& path) {
    char buf[8];
    read_bytes(in, buf, 8, "magic");
    if (std::memcmp(buf, magic, 8) != 0)
        throw InvalidInputError("bad magic in " + path + " (expected " +
                                std::string(magic, 8) + ")");
}

std::string read_string(std::istream& in, const char* what) {
    std::uint16_t len = read_u16(in, what);
    std::string s(len, '\0');
    if (len > 0) read_bytes(in, s.data(), len, what);
    return s;
}

} // namespace lccd::io
