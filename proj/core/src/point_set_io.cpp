#include "pointhop/point_set_io.hpp"

#include <charconv>
#include <cstdio>
#include <vector>

#include "pointhop/error.hpp"
#include "pointhop/serialize.hpp"

namespace pointhop {
namespace {

constexpr std::string_view kMagic = "PHP1";

PointCloud read_xyz_text(std::string_view text) {
  std::vector<double> values;
  int dims = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (const size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);

    double row[6];
    int count = 0;
    size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      if (i >= line.size()) break;
      if (count == 6) raise(errc::length_mismatch, "more than 6 values on a line");
      const char* begin = line.data() + i;
      const auto [ptr, ec] = std::from_chars(begin, line.data() + line.size(), row[count]);
      if (ec != std::errc() || ptr == begin)
        raise(errc::length_mismatch, "bad number in xyz text");
      i = size_t(ptr - line.data());
      ++count;
    }
    if (count == 0) continue;
    if (count != 3 && count != 6)
      raise(errc::length_mismatch, "expected 3 or 6 values per line, got " + std::to_string(count));
    if (dims == 0) dims = count;
    if (count != dims) raise(errc::length_mismatch, "inconsistent column count");
    values.insert(values.end(), row, row + count);
  }
  if (dims == 0) raise(errc::length_mismatch, "no points in xyz text");

  const int n = int(values.size()) / dims;
  PointCloud pc;
  pc.points.resize(n, 3);
  if (dims == 6) pc.colors.resize(n, 3);
  for (int r = 0; r < n; ++r)
    for (int d = 0; d < dims; ++d) {
      const double v = values[size_t(r * dims + d)];
      if (d < 3)
        pc.points(r, d) = v;
      else
        pc.colors(r, d - 3) = v;
    }
  return pc;
}

std::string write_xyz_text(const PointCloud& pc) {
  std::string out;
  out.reserve(size_t(pc.size()) * 40);
  char buf[160];
  for (int i = 0; i < pc.size(); ++i) {
    int len;
    if (pc.has_colors()) {
      len = std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g %.9g %.9g %.9g\n", pc.points(i, 0),
                          pc.points(i, 1), pc.points(i, 2), pc.colors(i, 0), pc.colors(i, 1),
                          pc.colors(i, 2));
    } else {
      len = std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g\n", pc.points(i, 0), pc.points(i, 1),
                          pc.points(i, 2));
    }
    out.append(buf, size_t(len));
  }
  return out;
}

PointCloud read_packed(std::string_view bytes) {
  if (bytes.size() < 4 || bytes.substr(0, 4) != kMagic)
    raise(errc::unknown_magic, "not a packed point set");
  BinaryReader r(bytes.substr(4));
  if (r.remaining() < 8) raise(errc::length_mismatch, "truncated packed header");
  const uint32_t n = r.u32();
  const uint8_t dims = r.u8();
  r.u8();
  r.u8();
  r.u8();  // reserved
  if (dims != 3 && dims != 6) raise(errc::length_mismatch, "dims must be 3 or 6");
  const size_t expected = size_t(n) * dims * 4;
  if (r.remaining() != expected)
    raise(errc::length_mismatch, "body holds " + std::to_string(r.remaining()) +
                                     " bytes, expected " + std::to_string(expected));
  PointCloud pc;
  pc.points.resize(n, 3);
  if (dims == 6) pc.colors.resize(n, 3);
  for (uint32_t i = 0; i < n; ++i)
    for (int d = 0; d < dims; ++d) {
      const double v = double(r.f32());
      if (d < 3)
        pc.points(int(i), d) = v;
      else
        pc.colors(int(i), d - 3) = v;
    }
  return pc;
}

std::string write_packed(const PointCloud& pc) {
  BinaryWriter w;
  w.bytes(kMagic.data(), kMagic.size());
  w.u32(uint32_t(pc.size()));
  const uint8_t dims = pc.has_colors() ? 6 : 3;
  w.u8(dims);
  w.u8(0);
  w.u8(0);
  w.u8(0);
  for (int i = 0; i < pc.size(); ++i) {
    for (int d = 0; d < 3; ++d) w.f32(float(pc.points(i, d)));
    if (dims == 6)
      for (int d = 0; d < 3; ++d) w.f32(float(pc.colors(i, d)));
  }
  return w.take();
}

}  // namespace

PointCloud read_point_set(std::string_view bytes, PointSetFormat format) {
  return format == PointSetFormat::xyz_text ? read_xyz_text(bytes) : read_packed(bytes);
}

std::string write_point_set(const PointCloud& pc, PointSetFormat format) {
  return format == PointSetFormat::xyz_text ? write_xyz_text(pc) : write_packed(pc);
}

PointCloud read_point_set_file(const std::string& path, PointSetFormat format) {
  return read_point_set(read_file(path), format);
}

void write_point_set_file(const std::string& path, const PointCloud& pc, PointSetFormat format) {
  write_file(path, write_point_set(pc, format));
}

PointCloud read_point_set_auto(const std::string& path) {
  const std::string bytes = read_file(path);
  const PointSetFormat format = bytes.starts_with(kMagic)
                                    ? PointSetFormat::packed_binary
                                    : PointSetFormat::xyz_text;
  return read_point_set(bytes, format);
}

}  // namespace pointhop
