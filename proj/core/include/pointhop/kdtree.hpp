#pragma once

#include <vector>

#include <Eigen/Core>

namespace pointhop {

/// K nearest neighbors of a cloud member, the query point included.
/// neighbor_indices is sorted ascending and always contains center_index.
struct LocalRegion {
  int center_index;
  std::vector<int> neighbor_indices;
};

/// Exact KNN over one cloud's coordinates. Immutable after construction and
/// safe to query from many threads.
///
/// Result contract: the query point itself plus the k-1 nearest others,
/// ordered by (squared distance, point index) — equal distances resolve to
/// the lowest index. This matches a brute-force sort under the same key, so
/// results are deterministic and platform-independent (distances are exact
/// f64 arithmetic, never contracted).
class SpatialIndex {
 public:
  explicit SpatialIndex(const Eigen::Matrix<double, Eigen::Dynamic, 3>& points);

  /// Throws KTooLarge unless 1 <= k <= size().
  LocalRegion knn(int query_index, int k) const;

  int size() const { return int(points_.rows()); }

 private:
  struct Node {
    int left = -1, right = -1;  // children, -1 for leaf
    int begin = 0, end = 0;     // range in order_ (leaves)
    int axis = 0;
    double split = 0.0;
  };

  int build(int begin, int end);

  Eigen::Matrix<double, Eigen::Dynamic, 3> points_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace pointhop
