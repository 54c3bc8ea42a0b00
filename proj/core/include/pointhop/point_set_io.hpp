#pragma once

#include <string>
#include <string_view>

#include "pointhop/point_cloud.hpp"

namespace pointhop {

enum class PointSetFormat {
  xyz_text,       // one point per line, 3 or 6 reals, '#' comments
  packed_binary,  // "PHP1", u32le N, u8 dims (3|6), u8[3] reserved, N*dims f32le
};

/// read(write(pc)) is the identity on coordinates: bit-exact for
/// packed_binary (f32 precision), to 1e-6 for xyz_text.
PointCloud read_point_set(std::string_view bytes, PointSetFormat format);
std::string write_point_set(const PointCloud& pc, PointSetFormat format);

PointCloud read_point_set_file(const std::string& path, PointSetFormat format);
void write_point_set_file(const std::string& path, const PointCloud& pc, PointSetFormat format);

/// Sniffs packed_binary by magic, xyz_text otherwise.
PointCloud read_point_set_auto(const std::string& path);

}  // namespace pointhop
