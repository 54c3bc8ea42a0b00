#include "pointhop/octant.hpp"

#include <algorithm>
#include <array>

#include "pointhop/error.hpp"

namespace pointhop {

Eigen::VectorXd octant_descriptor(const Eigen::RowVector3d& center, const LocalRegion& region,
                                  const Eigen::Matrix<double, Eigen::Dynamic, 3>& positions,
                                  const Eigen::MatrixXd& attributes) {
  const Eigen::Index dim = attributes.cols();
  Eigen::VectorXd descriptor = Eigen::VectorXd::Zero(8 * dim);
  std::array<int, 8> counts{};

  std::vector<int> members = region.neighbor_indices;
  std::sort(members.begin(), members.end());

  for (const int idx : members) {
    if (idx < 0 || idx >= attributes.rows() || idx >= positions.rows())
      raise(errc::dimension_mismatch,
            "region index " + std::to_string(idx) + " outside attribute matrix");
    const int octant = (positions(idx, 0) > center[0] ? 1 : 0) |
                       (positions(idx, 1) > center[1] ? 2 : 0) |
                       (positions(idx, 2) > center[2] ? 4 : 0);
    descriptor.segment(octant * dim, dim) += attributes.row(idx).transpose();
    ++counts[size_t(octant)];
  }
  for (int j = 0; j < 8; ++j) {
    if (counts[size_t(j)] > 1) descriptor.segment(j * dim, dim) /= double(counts[size_t(j)]);
  }
  return descriptor;
}

}  // namespace pointhop
