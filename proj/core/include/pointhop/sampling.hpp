#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "pointhop/point_cloud.hpp"

namespace pointhop {

/// Uniform sample of n distinct point indices (partial Fisher-Yates over
/// the index array, counter-based RNG). Deterministic given the seed.
std::vector<int> random_dropout_indices(int cloud_size, int n, uint64_t seed);

/// random_dropout_indices applied to the cloud rows.
PointCloud random_dropout(const PointCloud& pc, int n, uint64_t seed);

/// Farthest point sampling. Starts at the point nearest the cloud centroid,
/// then greedily adds the point with the largest minimum distance to the
/// selected set. All ties resolve to the lowest point index, so the result
/// is a pure function of the input order. O(N*n) incremental form.
std::vector<int> farthest_point_sample(const Eigen::Matrix<double, Eigen::Dynamic, 3>& points,
                                       int n);

/// n uniformly chosen distinct indices, sorted ascending — the `fps off`
/// ablation's stand-in for farthest_point_sample.
std::vector<int> random_sample_indices(int cloud_size, int n, uint64_t seed);

}  // namespace pointhop
