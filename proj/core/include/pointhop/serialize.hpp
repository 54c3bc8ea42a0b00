#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace pointhop {

/// CRC-32 (IEEE 802.3, reflected polynomial 0xEDB88320) over a byte range.
uint32_t crc32(const void* data, size_t size, uint32_t seed = 0);

/// Little-endian binary writer used by all on-disk formats. Explicit byte
/// packing keeps files identical regardless of host endianness.
class BinaryWriter {
 public:
  void u8(uint8_t v);
  void u16(uint16_t v);
  void u32(uint32_t v);
  void u64(uint64_t v);
  void f32(float v);
  void f64(double v);
  void bytes(const void* data, size_t size);
  void str(std::string_view s);  // u32 length prefix + raw bytes

  /// Row-major f64 payload, preceded by u32 rows and u32 cols.
  void matrix(const Eigen::MatrixXd& m);
  void vector(const Eigen::VectorXd& v);  // u32 size + f64 payload

  const std::string& buffer() const { return buf_; }
  std::string take() { return std::move(buf_); }

 private:
  std::string buf_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::string_view data) : data_(data) {}

  uint8_t u8();
  uint16_t u16();
  uint32_t u32();
  uint64_t u64();
  float f32();
  double f64();
  std::string str();
  void bytes(void* out, size_t size);

  Eigen::MatrixXd matrix();
  Eigen::VectorXd vector();

  size_t pos() const { return pos_; }
  size_t remaining() const { return data_.size() - pos_; }
  bool at_end() const { return pos_ == data_.size(); }

 private:
  void need(size_t n);

  std::string_view data_;
  size_t pos_ = 0;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace pointhop
