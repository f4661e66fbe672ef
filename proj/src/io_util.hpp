#pragma once

// Little-endian binary stream helpers shared by the file format readers and
// writers. Values are composed byte by byte so the on-disk layout does not
// depend on the host byte order.

#include <cstdint>
#include <iosfwd>
#include <string>

namespace lccd::io {

void write_bytes(std::ostream& out, const void* data, std::size_t n);
void write_u8(std::ostream& out, std::uint8_t v);
void write_u16(std::ostream& out, std::uint16_t v);
void write_u32(std::ostream& out, std::uint32_t v);
void write_u64(std::ostream& out, std::uint64_t v);
void write_f32(std::ostream& out, float v);
void write_f64(std::ostream& out, double v);
void write_magic(std::ostream& out, const char magic[8]);
void write_string(std::ostream& out, const std::string& s); // u16 length + UTF-8 bytes

// Readers throw InvalidInputError on a short or failed read.
void read_bytes(std::istream& in, void* data, std::size_t n, const char* what);
std::uint8_t read_u8(std::istream& in, const char* what);
std::uint16_t read_u16(std::istream& in, const char* what);
std::uint32_t read_u32(std::istream& in, const char* what);
std::uint64_t read_u64(std::istream& in, const char* what);
float read_f32(std::istream& in, const char* what);
double read_f64(std::istream& in, const char* what);
void expect_magic(std::istream& in, const char magic[8], const std::string& path);
std::string read_string(std::istream& in, const char* what);

} // namespace lccd::io
