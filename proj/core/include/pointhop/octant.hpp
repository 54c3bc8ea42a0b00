#pragma once

#include <Eigen/Core>

#include "pointhop/kdtree.hpp"

namespace pointhop {

/// Splits a local region into the eight octants around the center point and
/// concatenates the per-octant attribute centroids into one 8*D vector.
///
/// Octant of a neighbor: bit 0 set when x > x_c, bit 1 when y > y_c, bit 2
/// when z > z_c; a coordinate equal to the center's does not set its bit.
/// Octants with no points contribute a zero block. Accumulation runs in
/// ascending point-index order, so the result is bit-identical under any
/// permutation of the region.
///
/// `positions` drive the octant test, `attributes` are what gets averaged;
/// both are indexed by the region's point indices.
///
/// Throws DimensionMismatch when a region index has no attribute row.
Eigen::VectorXd octant_descriptor(const Eigen::RowVector3d& center, const LocalRegion& region,
                                  const Eigen::Matrix<double, Eigen::Dynamic, 3>& positions,
                                  const Eigen::MatrixXd& attributes);

}  // namespace pointhop
