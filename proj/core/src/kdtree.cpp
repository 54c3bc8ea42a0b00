#include "pointhop/kdtree.hpp"

#include <algorithm>
#include <numeric>

#include "pointhop/error.hpp"

namespace pointhop {
namespace {

constexpr int kLeafSize = 16;

inline double dist2(const Eigen::Matrix<double, Eigen::Dynamic, 3>& pts, int a,
                    const double* q) {
  const double dx = pts(a, 0) - q[0];
  const double dy = pts(a, 1) - q[1];
  const double dz = pts(a, 2) - q[2];
  return dx * dx + dy * dy + dz * dz;
}

struct Candidate {
  double d2;
  int idx;
};

// Max-heap order: the top is the worst kept candidate under the
// (distance, index) key.
inline bool better(const Candidate& a, const Candidate& b) {
  return a.d2 < b.d2 || (a.d2 == b.d2 && a.idx < b.idx);
}

}  // namespace

SpatialIndex::SpatialIndex(const Eigen::Matrix<double, Eigen::Dynamic, 3>& points)
    : points_(points), order_(size_t(points.rows())) {
  std::iota(order_.begin(), order_.end(), 0);
  if (!order_.empty()) {
    nodes_.reserve(order_.size() / kLeafSize * 2 + 2);
    root_ = build(0, int(order_.size()));
  }
}

int SpatialIndex::build(int begin, int end) {
  const int node_id = int(nodes_.size());
  nodes_.emplace_back();
  Node node;
  node.begin = begin;
  node.end = end;

  if (end - begin > kLeafSize) {
    Eigen::RowVector3d lo = points_.row(order_[size_t(begin)]);
    Eigen::RowVector3d hi = lo;
    for (int i = begin + 1; i < end; ++i) {
      lo = lo.cwiseMin(points_.row(order_[size_t(i)]));
      hi = hi.cwiseMax(points_.row(order_[size_t(i)]));
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    if (hi[axis] > lo[axis]) {
      const int mid = begin + (end - begin) / 2;
      std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                       [&](int a, int b) {
                         const double va = points_(a, axis), vb = points_(b, axis);
                         return va < vb || (va == vb && a < b);
                       });
      node.axis = axis;
      node.split = points_(order_[size_t(mid)], axis);
      node.left = build(begin, mid);
      node.right = build(mid, end);
    }
  }
  nodes_[size_t(node_id)] = node;
  return node_id;
}

LocalRegion SpatialIndex::knn(int query_index, int k) const {
  const int n = size();
  if (k < 1 || k > n)
    raise(errc::k_too_large, "k=" + std::to_string(k) + " for a cloud of " + std::to_string(n));

  const double q[3] = {points_(query_index, 0), points_(query_index, 1), points_(query_index, 2)};
  const int want = k - 1;  // the query itself always belongs to the region

  std::vector<Candidate> heap;
  heap.reserve(size_t(want) + 1);
  const auto worse = [](const Candidate& a, const Candidate& b) { return better(a, b); };

  // Iterative depth-first descent, near child first. A subtree is skipped
  // only when every point in it is strictly worse than the current worst
  // candidate; equal plane distance must still be visited because a lower
  // index could win the tie.
  std::vector<int> stack;
  if (root_ >= 0 && want > 0) stack.push_back(root_);
  while (!stack.empty()) {
    const Node& node = nodes_[size_t(stack.back())];
    stack.pop_back();
    if (node.left < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const int idx = order_[size_t(i)];
        if (idx == query_index) continue;
        const Candidate cand{dist2(points_, idx, q), idx};
        if (int(heap.size()) < want) {
          heap.push_back(cand);
          std::push_heap(heap.begin(), heap.end(), worse);
        } else if (better(cand, heap.front())) {
          std::pop_heap(heap.begin(), heap.end(), worse);
          heap.back() = cand;
          std::push_heap(heap.begin(), heap.end(), worse);
        }
      }
      continue;
    }
    const double delta = q[node.axis] - node.split;
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    if (int(heap.size()) < want || delta * delta <= heap.front().d2) stack.push_back(far);
    stack.push_back(near);
  }

  LocalRegion region;
  region.center_index = query_index;
  region.neighbor_indices.reserve(size_t(k));
  region.neighbor_indices.push_back(query_index);
  for (const Candidate& c : heap) region.neighbor_indices.push_back(c.idx);
  std::sort(region.neighbor_indices.begin(), region.neighbor_indices.end());
  return region;
}

}  // namespace pointhop
