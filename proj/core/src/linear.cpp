#include "pointhop/linear.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "pointhop/error.hpp"

namespace pointhop {
namespace {

// One-vs-rest hinge SVM via dual coordinate descent (sequential sweeps in
// sample order, so training is deterministic). The bias rides along as an
// extra all-ones feature. Returns the (D+1)-dim primal weight vector.
Eigen::VectorXd dual_cd(const Eigen::MatrixXd& x, const std::vector<char>& positive, double cost,
                        double tol, int max_epochs) {
  const Eigen::Index n = x.rows();
  const Eigen::Index dim = x.cols();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd q_diag(n);
  for (Eigen::Index i = 0; i < n; ++i) q_diag[i] = x.row(i).squaredNorm();

  double prev_objective = 0.0;
  for (int epoch = 0; epoch < max_epochs; ++epoch) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (q_diag[i] <= 0.0) continue;
      const double y = positive[size_t(i)] ? 1.0 : -1.0;
      const double gradient = y * x.row(i).dot(w) - 1.0;
      const double next = std::min(std::max(alpha[i] - gradient / q_diag[i], 0.0), cost);
      if (next != alpha[i]) {
        w += (next - alpha[i]) * y * x.row(i).transpose();
        alpha[i] = next;
      }
    }
    const double objective = alpha.sum() - 0.5 * w.squaredNorm();  // dual objective
    if (epoch > 0 && std::abs(objective - prev_objective) <=
                         tol * std::max(1.0, std::abs(prev_objective)))
      break;
    prev_objective = objective;
  }
  return w;
}

}  // namespace

LinearClassifierModel LinearClassifierModel::fit(const Eigen::MatrixXd& features,
                                                 const std::vector<int>& labels, int n_classes,
                                                 const LinearParams& params) {
  const int n = int(features.rows());
  const int dim = int(features.cols());
  if (n != int(labels.size()))
    raise(errc::dimension_mismatch, "features and labels disagree on sample count");
  if (n == 0) raise(errc::too_few_samples, "no training samples");
  if (std::set<int>(labels.begin(), labels.end()).size() < 2)
    raise(errc::degenerate_labels, "training labels hold a single class");

  LinearClassifierModel model;
  model.params_ = params;
  model.mean_ = features.colwise().mean();
  Eigen::VectorXd var = Eigen::VectorXd::Zero(dim);
  for (int i = 0; i < n; ++i)
    var += (features.row(i).transpose() - model.mean_).array().square().matrix();
  var /= double(n);
  model.inv_scale_.resize(dim);
  for (int d = 0; d < dim; ++d)
    model.inv_scale_[d] = var[d] > 1e-24 ? 1.0 / std::sqrt(var[d]) : 0.0;

  Eigen::MatrixXd xs(n, dim + 1);  // standardized, plus the bias column
  xs.leftCols(dim) =
      (features.rowwise() - model.mean_.transpose()) * model.inv_scale_.asDiagonal();
  xs.col(dim).setOnes();

  model.weights_.resize(n_classes, dim);
  model.intercepts_.resize(n_classes);
  std::vector<char> positive(size_t(n));
  for (int c = 0; c < n_classes; ++c) {
    for (int i = 0; i < n; ++i) positive[size_t(i)] = labels[size_t(i)] == c ? 1 : 0;
    const Eigen::VectorXd w = dual_cd(xs, positive, params.cost, params.tol, params.max_epochs);
    model.weights_.row(c) = w.head(dim).transpose();
    model.intercepts_[c] = w[dim];
  }
  return model;
}

Eigen::VectorXd LinearClassifierModel::margins(const Eigen::VectorXd& feature) const {
  if (feature.size() != mean_.size())
    raise(errc::dimension_mismatch, "feature of dim " + std::to_string(feature.size()) +
                                        ", model expects " + std::to_string(mean_.size()));
  const Eigen::VectorXd xs = (feature - mean_).cwiseProduct(inv_scale_);
  return weights_ * xs + intercepts_;
}

Eigen::VectorXd LinearClassifierModel::predict_proba(const Eigen::VectorXd& feature) const {
  const Eigen::VectorXd m = margins(feature);
  const Eigen::ArrayXd shifted = (m.array() - m.maxCoeff()).exp();
  return (shifted / shifted.sum()).matrix();
}

int LinearClassifierModel::predict(const Eigen::VectorXd& feature) const {
  const Eigen::VectorXd m = margins(feature);
  int best = 0;
  for (int c = 1; c < int(m.size()); ++c)
    if (m[c] > m[best]) best = c;
  return best;
}

}  // namespace pointhop
