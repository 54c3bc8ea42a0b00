#pragma once

#include <optional>
#include <vector>

#include "pointhop/classifier.hpp"
#include "pointhop/pipeline.hpp"

namespace pointhop {

/// Rigid rotation about the vertical axis through the origin (models are
/// normalized and gravity-aligned, so this is the natural augmentation).
/// axis: 0=x, 1=y, 2=z.
PointCloud rotate_cloud(const PointCloud& pc, double angle_degrees, int axis = 2);

struct EnsembleBranch {
  PointHopConfig config;
  double rotation_degrees = 0.0;
};

enum class Fusion : uint8_t { feature = 0, decision = 1 };

/// A set of cascades made diverse by rotation and hyper-parameter changes,
/// fused either at the feature level or through per-branch decision vectors.
struct EnsembleSpec {
  std::vector<EnsembleBranch> branches;
  Fusion fusion = Fusion::feature;
  int rotation_axis = 2;

  void validate() const;  // >= 1 branch, angles in [0, 360)
};

/// Fitted ensemble. Feature fusion trains one classifier on the
/// concatenated branch features; decision fusion trains one classifier per
/// branch and a second-stage classifier on the concatenated class
/// probability vectors.
struct EnsembleModel {
  EnsembleSpec spec;
  std::vector<PointHopModel> models;           // one per branch
  std::vector<Classifier> branch_classifiers;  // decision fusion only

  /// Concatenated branch features of a cloud (each branch sees its own
  /// rotated copy). Feature-fusion classifier input.
  Eigen::VectorXd ensemble_features(const PointCloud& cloud,
                                    std::optional<int> input_override = {}) const;

  /// Concatenated per-branch probability vectors (length C per branch).
  /// Second-stage classifier input for decision fusion.
  Eigen::VectorXd decision_features(const PointCloud& cloud,
                                    std::optional<int> input_override = {}) const;

  int feature_dim() const;
};

/// Fits every branch independently on its rotated copy of the training
/// clouds (each branch refits its own filter banks). Returns the fitted
/// models plus the per-branch training feature blocks, column-concatenated
/// in branch order.
struct EnsembleFitResult {
  std::vector<PointHopModel> models;
  Eigen::MatrixXd features;  // n_clouds x sum(branch feature dims)
  std::vector<int> branch_offsets;
};
EnsembleFitResult fit_ensemble(const std::vector<PointCloud>& clouds, const EnsembleSpec& spec,
                               int threads = 1);

}  // namespace pointhop
