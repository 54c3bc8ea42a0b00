#include "pointhop/ensemble.hpp"

#include <cmath>

#include "pointhop/error.hpp"

namespace pointhop {

PointCloud rotate_cloud(const PointCloud& pc, double angle_degrees, int axis) {
  if (axis < 0 || axis > 2) raise(errc::bad_config, "rotation axis must be 0, 1 or 2");
  const double theta = angle_degrees * M_PI / 180.0;
  const double c = std::cos(theta), s = std::sin(theta);
  const int u = (axis + 1) % 3, v = (axis + 2) % 3;
  PointCloud out = pc;
  for (int i = 0; i < pc.size(); ++i) {
    const double a = pc.points(i, u), b = pc.points(i, v);
    out.points(i, u) = c * a - s * b;
    out.points(i, v) = s * a + c * b;
  }
  return out;
}

void EnsembleSpec::validate() const {
  if (branches.empty()) raise(errc::bad_config, "ensemble needs at least one branch");
  for (const auto& branch : branches) {
    if (branch.rotation_degrees < 0.0 || branch.rotation_degrees >= 360.0)
      raise(errc::bad_config, "branch rotation must lie in [0, 360)");
    branch.config.validate();
  }
  if (rotation_axis < 0 || rotation_axis > 2) raise(errc::bad_config, "bad rotation axis");
}

Eigen::VectorXd EnsembleModel::ensemble_features(const PointCloud& cloud,
                                                 std::optional<int> input_override) const {
  Eigen::VectorXd out(feature_dim());
  int offset = 0;
  for (size_t b = 0; b < models.size(); ++b) {
    const PointCloud rotated =
        rotate_cloud(cloud, spec.branches[b].rotation_degrees, spec.rotation_axis);
    const Eigen::VectorXd f = extract_features(models[b], rotated, input_override);
    out.segment(offset, f.size()) = f;
    offset += int(f.size());
  }
  return out;
}

Eigen::VectorXd EnsembleModel::decision_features(const PointCloud& cloud,
                                                 std::optional<int> input_override) const {
  if (branch_classifiers.size() != models.size())
    raise(errc::bad_config, "decision fusion requires one classifier per branch");
  std::vector<Eigen::VectorXd> parts;
  int total = 0;
  for (size_t b = 0; b < models.size(); ++b) {
    const PointCloud rotated =
        rotate_cloud(cloud, spec.branches[b].rotation_degrees, spec.rotation_axis);
    parts.push_back(
        branch_classifiers[b].predict_proba(extract_features(models[b], rotated, input_override)));
    total += int(parts.back().size());
  }
  Eigen::VectorXd out(total);
  int offset = 0;
  for (const auto& p : parts) {
    out.segment(offset, p.size()) = p;
    offset += int(p.size());
  }
  return out;
}

int EnsembleModel::feature_dim() const {
  int total = 0;
  for (const auto& model : models) total += model.layout.total_dim;
  return total;
}

EnsembleFitResult fit_ensemble(const std::vector<PointCloud>& clouds, const EnsembleSpec& spec,
                               int threads) {
  spec.validate();
  EnsembleFitResult result;
  int total_dim = 0;
  std::vector<Eigen::MatrixXd> blocks;
  for (const auto& branch : spec.branches) {
    std::vector<PointCloud> rotated;
    rotated.reserve(clouds.size());
    for (const auto& cloud : clouds)
      rotated.push_back(rotate_cloud(cloud, branch.rotation_degrees, spec.rotation_axis));
    FitResult fit = fit_pointhop(rotated, branch.config, threads);
    result.branch_offsets.push_back(total_dim);
    total_dim += fit.model.layout.total_dim;
    result.models.push_back(std::move(fit.model));
    blocks.push_back(std::move(fit.features));
  }
  result.features.resize(clouds.size(), total_dim);
  for (size_t b = 0; b < blocks.size(); ++b)
    result.features.middleCols(result.branch_offsets[b], blocks[b].cols()) = blocks[b];
  return result;
}

}  // namespace pointhop
