#include "pointhop/sampling.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "pointhop/error.hpp"
#include "pointhop/rng.hpp"

namespace pointhop {

std::vector<int> random_dropout_indices(int cloud_size, int n, uint64_t seed) {
  if (n < 1 || n > cloud_size)
    raise(errc::too_many_requested,
          "requested " + std::to_string(n) + " of " + std::to_string(cloud_size) + " points");
  std::vector<int> indices(static_cast<size_t>(cloud_size));
  std::iota(indices.begin(), indices.end(), 0);
  Philox rng(seed);
  for (int i = 0; i < n; ++i) {
    const int j = i + int(rng.next_below(uint64_t(cloud_size - i)));
    std::swap(indices[size_t(i)], indices[size_t(j)]);
  }
  indices.resize(size_t(n));
  return indices;
}

PointCloud random_dropout(const PointCloud& pc, int n, uint64_t seed) {
  const std::vector<int> keep = random_dropout_indices(pc.size(), n, seed);
  PointCloud out;
  out.label = pc.label;
  out.points.resize(n, 3);
  if (pc.has_colors()) out.colors.resize(n, 3);
  for (int i = 0; i < n; ++i) {
    out.points.row(i) = pc.points.row(keep[size_t(i)]);
    if (pc.has_colors()) out.colors.row(i) = pc.colors.row(keep[size_t(i)]);
  }
  return out;
}

std::vector<int> farthest_point_sample(const Eigen::Matrix<double, Eigen::Dynamic, 3>& points,
                                       int n) {
  const int count = int(points.rows());
  if (n < 1 || n > count)
    raise(errc::too_many_requested,
          "requested " + std::to_string(n) + " of " + std::to_string(count) + " points");

  const Eigen::RowVector3d centroid = points.colwise().mean();
  int current = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    const double d2 = (points.row(i) - centroid).squaredNorm();
    if (d2 < best) {
      best = d2;
      current = i;
    }
  }

  std::vector<int> selected;
  selected.reserve(size_t(n));
  selected.push_back(current);
  std::vector<double> min_d2(size_t(count), std::numeric_limits<double>::infinity());
  for (int step = 1; step < n; ++step) {
    int next = -1;
    double next_d2 = -1.0;
    for (int i = 0; i < count; ++i) {
      const double d2 = (points.row(i) - points.row(current)).squaredNorm();
      if (d2 < min_d2[size_t(i)]) min_d2[size_t(i)] = d2;
      if (min_d2[size_t(i)] > next_d2 && min_d2[size_t(i)] > 0.0) {
        next_d2 = min_d2[size_t(i)];
        next = i;
      }
    }
    if (next < 0) {
      // all remaining points coincide with selected ones; fall back to the
      // lowest unselected index to keep the result well-defined
      std::vector<bool> taken(static_cast<size_t>(count), false);
      for (int s : selected) taken[size_t(s)] = true;
      for (int i = 0; i < count && next < 0; ++i)
        if (!taken[size_t(i)]) next = i;
    }
    selected.push_back(next);
    current = next;
  }
  return selected;
}

std::vector<int> random_sample_indices(int cloud_size, int n, uint64_t seed) {
  std::vector<int> indices = random_dropout_indices(cloud_size, n, seed);
  std::sort(indices.begin(), indices.end());
  return indices;
}

}  // namespace pointhop
