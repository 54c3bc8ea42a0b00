#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace pointhop {

struct RandomForestParams {
  int n_trees = 128;
  int max_depth = 0;     // 0 = unlimited
  int min_leaf = 1;
  int max_features = 0;  // 0 = floor(sqrt(D))
};

/// CART-style random forest: bootstrap per tree, random feature subset per
/// split, Gini criterion, leaves hold class distributions. Per-tree seeds
/// derive from the master seed through the documented splitmix scheme, so
/// training parallelism never changes the model.
class RandomForestModel {
 public:
  static RandomForestModel fit(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                               int n_classes, const RandomForestParams& params, uint64_t seed,
                               int threads = 1);

  /// Mean of the leaf distributions across trees; sums to 1.
  Eigen::VectorXd predict_proba(const Eigen::VectorXd& feature) const;

  /// argmax of predict_proba, ties to the lowest class id.
  int predict(const Eigen::VectorXd& feature) const;

  int n_classes() const { return n_classes_; }
  int n_features() const { return n_features_; }
  int n_trees() const { return int(trees_.size()); }

  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1, right = -1;
    int leaf = -1;  // row into the tree's leaf distribution table
  };
  struct Tree {
    std::vector<Node> nodes;
    Eigen::MatrixXd leaf_probs;  // leaf row -> class distribution
  };
  const std::vector<Tree>& trees() const { return trees_; }

  // used by the bundle serializer
  RandomForestModel() = default;
  RandomForestModel(int n_features, int n_classes, RandomForestParams params,
                    std::vector<Tree> trees)
      : n_features_(n_features), n_classes_(n_classes), params_(params), trees_(std::move(trees)) {}
  const RandomForestParams& params() const { return params_; }

 private:
  int n_features_ = 0;
  int n_classes_ = 0;
  RandomForestParams params_;
  std::vector<Tree> trees_;
};

}  // namespace pointhop
