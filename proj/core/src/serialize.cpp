#include "pointhop/serialize.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "pointhop/error.hpp"

namespace pointhop {
namespace {

std::array<uint32_t, 256> make_crc_table() {
  std::array<uint32_t, 256> table{};
  for (uint32_t i = 0; i < 256; ++i) {
    uint32_t c = i;
    for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
    table[i] = c;
  }
  return table;
}

}  // namespace

uint32_t crc32(const void* data, size_t size, uint32_t seed) {
  static const std::array<uint32_t, 256> table = make_crc_table();
  uint32_t c = seed ^ 0xFFFFFFFFu;
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < size; ++i) c = table[(c ^ p[i]) & 0xFF] ^ (c >> 8);
  return c ^ 0xFFFFFFFFu;
}

void BinaryWriter::u8(uint8_t v) { buf_.push_back(char(v)); }

void BinaryWriter::u16(uint16_t v) {
  u8(uint8_t(v));
  u8(uint8_t(v >> 8));
}

void BinaryWriter::u32(uint32_t v) {
  u16(uint16_t(v));
  u16(uint16_t(v >> 16));
}

void BinaryWriter::u64(uint64_t v) {
  u32(uint32_t(v));
  u32(uint32_t(v >> 32));
}

void BinaryWriter::f32(float v) { u32(std::bit_cast<uint32_t>(v)); }
void BinaryWriter::f64(double v) { u64(std::bit_cast<uint64_t>(v)); }

void BinaryWriter::bytes(const void* data, size_t size) {
  buf_.append(static_cast<const char*>(data), size);
}

void BinaryWriter::str(std::string_view s) {
  u32(uint32_t(s.size()));
  buf_.append(s);
}

void BinaryWriter::matrix(const Eigen::MatrixXd& m) {
  u32(uint32_t(m.rows()));
  u32(uint32_t(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) f64(m(r, c));
}

void BinaryWriter::vector(const Eigen::VectorXd& v) {
  u32(uint32_t(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) f64(v[i]);
}

void BinaryReader::need(size_t n) {
  if (data_.size() - pos_ < n) raise(errc::truncated_file, "unexpected end of data");
}

uint8_t BinaryReader::u8() {
  need(1);
  return uint8_t(data_[pos_++]);
}

uint16_t BinaryReader::u16() {
  const uint16_t lo = u8();
  const uint16_t hi = u8();
  return uint16_t(lo | (hi << 8));
}

uint32_t BinaryReader::u32() {
  const uint32_t lo = u16();
  const uint32_t hi = u16();
  return lo | (hi << 16);
}

uint64_t BinaryReader::u64() {
  const uint64_t lo = u32();
  const uint64_t hi = u32();
  return lo | (hi << 32);
}

float BinaryReader::f32() { return std::bit_cast<float>(u32()); }
double BinaryReader::f64() { return std::bit_cast<double>(u64()); }

std::string BinaryReader::str() {
  const uint32_t n = u32();
  need(n);
  std::string s(data_.substr(pos_, n));
  pos_ += n;
  return s;
}

void BinaryReader::bytes(void* out, size_t size) {
  need(size);
  std::memcpy(out, data_.data() + pos_, size);
  pos_ += size;
}

Eigen::MatrixXd BinaryReader::matrix() {
  const uint32_t rows = u32();
  const uint32_t cols = u32();
  Eigen::MatrixXd m(rows, cols);
  for (uint32_t r = 0; r < rows; ++r)
    for (uint32_t c = 0; c < cols; ++c) m(r, c) = f64();
  return m;
}

Eigen::VectorXd BinaryReader::vector() {
  const uint32_t n = u32();
  Eigen::VectorXd v(n);
  for (uint32_t i = 0; i < n; ++i) v[i] = f64();
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io_failure, "cannot open " + path);
  std::string contents((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) raise(errc::io_failure, "read error on " + path);
  return contents;
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(errc::io_failure, "cannot create " + path);
  out.write(contents.data(), std::streamsize(contents.size()));
  if (!out) raise(errc::io_failure, "write error on " + path);
}

}  // namespace pointhop
