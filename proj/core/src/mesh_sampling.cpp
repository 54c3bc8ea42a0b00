#include "pointhop/mesh_sampling.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Geometry>

#include "pointhop/error.hpp"
#include "pointhop/rng.hpp"

namespace pointhop {

PointCloud sample_mesh_surface(const Mesh& mesh, int n, uint64_t seed) {
  if (n < 1) raise(errc::too_many_requested, "sample count must be >= 1");
  if (mesh.vertices.empty() || mesh.faces.empty())
    raise(errc::degenerate_mesh, "mesh has no sampleable surface");

  std::vector<double> cumulative(mesh.faces.size());
  double total = 0.0;
  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& [a, b, c] = mesh.faces[f];
    const Eigen::Vector3d e1 = mesh.vertices[size_t(b)] - mesh.vertices[size_t(a)];
    const Eigen::Vector3d e2 = mesh.vertices[size_t(c)] - mesh.vertices[size_t(a)];
    total += 0.5 * e1.cross(e2).norm();
    cumulative[f] = total;
  }
  if (total <= 0.0) raise(errc::degenerate_mesh, "total surface area is zero");

  PointCloud pc;
  pc.points.resize(n, 3);
  Philox rng(seed);
  for (int i = 0; i < n; ++i) {
    // Fixed draw order (u, r1, r2) per point keeps output a pure function
    // of the seed.
    const double u = rng.next_double() * total;
    const double r1 = rng.next_double();
    const double r2 = rng.next_double();
    const size_t f = size_t(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                            cumulative.begin());
    const auto& [a, b, c] = mesh.faces[std::min(f, mesh.faces.size() - 1)];
    const double s = std::sqrt(r1);
    const double wa = 1.0 - s, wb = s * (1.0 - r2), wc = s * r2;
    pc.points.row(i) = wa * mesh.vertices[size_t(a)] + wb * mesh.vertices[size_t(b)] +
                       wc * mesh.vertices[size_t(c)];
  }
  return pc;
}

}  // namespace pointhop
