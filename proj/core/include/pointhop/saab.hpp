#pragma once

#include <Eigen/Core>

namespace pointhop {

/// Eigenvalues of the AC covariance (descending) with cumulative explained
/// energy ratios. The last ratio is exactly 1 for a non-degenerate spectrum.
struct EnergyCurve {
  Eigen::VectorXd eigenvalues;
  Eigen::VectorXd cumulative;
};

/// One stage's frozen Saab transform: the constant DC filter, PCA-derived
/// AC filters, and a single shared bias that keeps every response
/// non-negative on the training set. In pca_mode (ablation) the bank is a
/// plain PCA projection of the mean-centered input instead — no DC filter,
/// no bias.
struct SaabFilterBank {
  int input_dim = 0;
  int n_ac = 0;
  Eigen::VectorXd dc_filter;   // (1/sqrt(D)) * ones
  Eigen::MatrixXd ac_filters;  // n_ac x D, orthonormal rows (zero-padded if rank-deficient)
  double bias = 0.0;           // >= max training-vector norm
  bool pca_mode = false;
  Eigen::VectorXd mean;        // training mean, used by pca_mode only

  int output_dim() const { return 1 + n_ac; }

  /// y[0] = dc·v + bias, y[k] = ac_k·v + bias. Output is (1+n_ac)-dim.
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

  /// apply() over the rows of a sample matrix.
  Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& rows) const;

  /// Sorted eigenvalues seen at fit time (descending), for energy plots.
  EnergyCurve energy;
};

/// Streaming second-moment accumulator for fitting a bank without ever
/// materializing the pooled sample matrix. add() may run on disjoint sample
/// batches in any thread; merge partials in a fixed order for bitwise
/// reproducibility.
class SaabAccumulator {
 public:
  explicit SaabAccumulator(int dim);

  void add(const Eigen::MatrixXd& rows);
  void merge(const SaabAccumulator& other);

  long count() const { return count_; }
  int dim() const { return dim_; }

  /// Derives the bank: DC projection removal, PCA on (optionally
  /// mean-centered) AC components in double precision, eigenvector signs
  /// fixed so each filter's largest-magnitude entry is positive, bias set
  /// to the max training norm. Fewer than n_ac positive eigenvalues keeps
  /// the valid filters and zero-pads the rest (with a warning to stderr).
  ///
  /// Throws TooFewSamples when count() < n_ac + 1.
  SaabFilterBank fit(int n_ac, bool pca_mode = false, bool center = true) const;

 private:
  int dim_;
  long count_ = 0;
  Eigen::MatrixXd gram_;      // sum of u u^T over AC components
  Eigen::VectorXd sum_;       // sum of AC components
  Eigen::MatrixXd raw_gram_;  // sum of v v^T over raw samples (pca_mode)
  Eigen::VectorXd raw_sum_;
  double max_norm_ = 0.0;
};

/// Convenience one-shot fit over a sample matrix (row = sample).
SaabFilterBank fit_saab(const Eigen::MatrixXd& samples, int n_ac, bool pca_mode = false,
                        bool center = true);

/// Kneedle-style knee: the index (1-based filter count) whose point on the
/// cumulative-energy curve lies farthest from the chord between the curve's
/// endpoints. Returns 1 for flat or degenerate curves. Advisory only; the
/// pipeline runs with configured filter counts.
int energy_knee(const EnergyCurve& curve);

}  // namespace pointhop
