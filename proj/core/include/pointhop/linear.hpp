#pragma once

#include <vector>

#include <Eigen/Core>

namespace pointhop {

struct LinearParams {
  double cost = 1.0;   // hinge penalty C
  double tol = 1e-4;   // relative objective change that stops training
  int max_epochs = 200;
};

/// One-vs-rest max-margin linear classifier on z-scored features, trained
/// by deterministic dual coordinate descent on the hinge objective.
/// Dimensions whose training variance falls below the floor are ignored.
class LinearClassifierModel {
 public:
  static LinearClassifierModel fit(const Eigen::MatrixXd& features,
                                   const std::vector<int>& labels, int n_classes,
                                   const LinearParams& params = {});

  /// Softmax over the per-class margins.
  Eigen::VectorXd predict_proba(const Eigen::VectorXd& feature) const;
  int predict(const Eigen::VectorXd& feature) const;

  int n_classes() const { return int(weights_.rows()); }
  int n_features() const { return int(weights_.cols()); }

  LinearClassifierModel() = default;
  LinearClassifierModel(Eigen::MatrixXd weights, Eigen::VectorXd intercepts, Eigen::VectorXd mean,
                        Eigen::VectorXd inv_scale, LinearParams params)
      : weights_(std::move(weights)),
        intercepts_(std::move(intercepts)),
        mean_(std::move(mean)),
        inv_scale_(std::move(inv_scale)),
        params_(params) {}

  const Eigen::MatrixXd& weights() const { return weights_; }
  const Eigen::VectorXd& intercepts() const { return intercepts_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& inv_scale() const { return inv_scale_; }
  const LinearParams& params() const { return params_; }

 private:
  Eigen::VectorXd margins(const Eigen::VectorXd& feature) const;

  Eigen::MatrixXd weights_;     // C x D, in standardized space
  Eigen::VectorXd intercepts_;  // C
  Eigen::VectorXd mean_;        // training mean per dim
  Eigen::VectorXd inv_scale_;   // 1/std per dim, 0 for constant dims
  LinearParams params_;
};

}  // namespace pointhop
