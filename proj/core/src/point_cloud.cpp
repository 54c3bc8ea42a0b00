#include "pointhop/point_cloud.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace pointhop {

PointCloud normalize_cloud(const PointCloud& pc) {
  PointCloud out = pc;
  const Eigen::RowVector3d centroid = pc.points.colwise().mean();
  out.points.rowwise() -= centroid;
  const double max_norm = out.points.rowwise().norm().maxCoeff();
  if (max_norm > 0.0) out.points /= max_norm;
  return out;
}

PointCloud sort_canonical(const PointCloud& pc) {
  const int n = pc.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const bool rgb = pc.has_colors();
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    for (int d = 0; d < 3; ++d) {
      if (pc.points(a, d) != pc.points(b, d)) return pc.points(a, d) < pc.points(b, d);
    }
    if (rgb) {
      for (int d = 0; d < 3; ++d) {
        if (pc.colors(a, d) != pc.colors(b, d)) return pc.colors(a, d) < pc.colors(b, d);
      }
    }
    return a < b;
  });
  PointCloud out;
  out.label = pc.label;
  out.points.resize(n, 3);
  if (rgb) out.colors.resize(n, 3);
  for (int i = 0; i < n; ++i) {
    out.points.row(i) = pc.points.row(order[i]);
    if (rgb) out.colors.row(i) = pc.colors.row(order[i]);
  }
  return out;
}

}  // namespace pointhop
