#pragma once

#include <array>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace pointhop {

/// Triangle mesh. Polygonal faces are fan-triangulated at parse time, so
/// faces always holds triples.
struct Mesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;
};

/// Parses OFF text. Tolerates '#' comments, blank lines, a missing "OFF"
/// header, and the ModelNet quirk where the header fuses with the counts
/// line ("OFF3 1 0"). Faces with more than three vertices become triangle
/// fans (v0,v1,v2), (v0,v2,v3), ...
///
/// Throws: MalformedHeader, IndexOutOfRange, TruncatedFile.
Mesh parse_off(std::string_view text);

}  // namespace pointhop
