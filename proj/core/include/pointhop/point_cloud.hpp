#pragma once

#include <Eigen/Core>

namespace pointhop {

/// A point cloud: N xyz rows, optional N rgb rows in [0,1], optional label.
/// Points carry no meaningful order; pipeline code canonicalizes before any
/// seeded choice (see sort_canonical).
struct PointCloud {
  Eigen::Matrix<double, Eigen::Dynamic, 3> points;
  Eigen::Matrix<double, Eigen::Dynamic, 3> colors;  // 0 rows when absent
  int label = -1;

  int size() const { return int(points.rows()); }
  bool has_colors() const { return colors.rows() > 0; }
};

/// Centers the cloud on its centroid and scales so the farthest point sits
/// on the unit sphere. A cloud of coincident points collapses to the origin.
/// Idempotent to 1e-12.
PointCloud normalize_cloud(const PointCloud& pc);

/// Reorders points lexicographically by (x, y, z) and, for exact position
/// duplicates, by color. Makes every downstream seeded choice independent
/// of on-file point order.
PointCloud sort_canonical(const PointCloud& pc);

}  // namespace pointhop
