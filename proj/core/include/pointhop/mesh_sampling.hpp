#pragma once

#include <cstdint>

#include "pointhop/off.hpp"
#include "pointhop/point_cloud.hpp"

namespace pointhop {

/// Draws n points from the mesh surface, area-weighted over triangles and
/// uniform within each (square-root barycentric sampling). Zero-area
/// triangles get zero weight. Bit-reproducible for a given seed.
///
/// Throws DegenerateMesh when the total surface area is zero.
PointCloud sample_mesh_surface(const Mesh& mesh, int n, uint64_t seed);

}  // namespace pointhop
