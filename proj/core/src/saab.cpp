#include "pointhop/saab.hpp"

#include <cmath>
#include <iostream>

#include <Eigen/Dense>

#include "pointhop/error.hpp"

namespace pointhop {
namespace {

// Largest-|entry| index, ties to the lowest; flips the row so that entry is
// positive. PCA signs are arbitrary, fixing them makes banks portable.
void fix_sign(Eigen::MatrixXd& filters, int row) {
  int arg = 0;
  double best = -1.0;
  for (int i = 0; i < filters.cols(); ++i) {
    const double mag = std::abs(filters(row, i));
    if (mag > best) {
      best = mag;
      arg = i;
    }
  }
  if (filters(row, arg) < 0.0) filters.row(row) = -filters.row(row);
}

}  // namespace

Eigen::VectorXd SaabFilterBank::apply(const Eigen::VectorXd& v) const {
  if (int(v.size()) != input_dim)
    raise(errc::dimension_mismatch,
          "vector of dim " + std::to_string(v.size()) + ", bank expects " +
              std::to_string(input_dim));
  Eigen::VectorXd out(output_dim());
  if (pca_mode) {
    const Eigen::VectorXd centered = v - mean;
    out[0] = dc_filter.dot(centered);
    out.tail(n_ac) = ac_filters * centered;
    return out;
  }
  out[0] = dc_filter.dot(v) + bias;
  out.tail(n_ac) = (ac_filters * v).array() + bias;
  return out;
}

Eigen::MatrixXd SaabFilterBank::apply_rows(const Eigen::MatrixXd& rows) const {
  if (int(rows.cols()) != input_dim)
    raise(errc::dimension_mismatch,
          "rows of dim " + std::to_string(rows.cols()) + ", bank expects " +
              std::to_string(input_dim));
  Eigen::MatrixXd out(rows.rows(), output_dim());
  if (pca_mode) {
    const Eigen::MatrixXd centered = rows.rowwise() - mean.transpose();
    out.col(0) = centered * dc_filter;
    out.rightCols(n_ac) = centered * ac_filters.transpose();
    return out;
  }
  out.col(0) = (rows * dc_filter).array() + bias;
  out.rightCols(n_ac) = ((rows * ac_filters.transpose()).array() + bias).matrix();
  return out;
}

SaabAccumulator::SaabAccumulator(int dim)
    : dim_(dim),
      gram_(Eigen::MatrixXd::Zero(dim, dim)),
      sum_(Eigen::VectorXd::Zero(dim)),
      raw_gram_(Eigen::MatrixXd::Zero(dim, dim)),
      raw_sum_(Eigen::VectorXd::Zero(dim)) {}

void SaabAccumulator::add(const Eigen::MatrixXd& rows) {
  if (int(rows.cols()) != dim_)
    raise(errc::dimension_mismatch, "sample dim " + std::to_string(rows.cols()) +
                                        " != accumulator dim " + std::to_string(dim_));
  // AC part of every row: remove the projection onto the DC direction.
  const double inv_sqrt_d = 1.0 / std::sqrt(double(dim_));
  const Eigen::VectorXd dc_coeff = rows.rowwise().sum() * inv_sqrt_d;
  const Eigen::MatrixXd ac = rows - (dc_coeff * inv_sqrt_d) * Eigen::RowVectorXd::Ones(dim_);

  gram_.noalias() += ac.transpose() * ac;
  sum_ += ac.colwise().sum().transpose();
  raw_gram_.noalias() += rows.transpose() * rows;
  raw_sum_ += rows.colwise().sum().transpose();
  count_ += rows.rows();

  for (Eigen::Index r = 0; r < rows.rows(); ++r)
    max_norm_ = std::max(max_norm_, rows.row(r).norm());
}

void SaabAccumulator::merge(const SaabAccumulator& other) {
  if (other.dim_ != dim_) raise(errc::dimension_mismatch, "merging accumulators of unequal dim");
  gram_ += other.gram_;
  sum_ += other.sum_;
  raw_gram_ += other.raw_gram_;
  raw_sum_ += other.raw_sum_;
  count_ += other.count_;
  max_norm_ = std::max(max_norm_, other.max_norm_);
}

SaabFilterBank SaabAccumulator::fit(int n_ac, bool pca_mode, bool center) const {
  if (n_ac < 0 || n_ac > dim_ - 1)
    raise(errc::bad_config, "n_ac must lie in [0, dim-1], got " + std::to_string(n_ac));
  if (count_ < n_ac + 1)
    raise(errc::too_few_samples, std::to_string(count_) + " samples for " +
                                     std::to_string(n_ac) + " AC filters");

  const int n_filters = pca_mode ? n_ac + 1 : n_ac;
  const Eigen::MatrixXd& gram = pca_mode ? raw_gram_ : gram_;
  const Eigen::VectorXd& sum = pca_mode ? raw_sum_ : sum_;
  const Eigen::VectorXd mean = sum / double(count_);

  Eigen::MatrixXd cov = gram / double(count_);
  if (center || pca_mode) cov -= mean * mean.transpose();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success)
    raise(errc::too_few_samples, "eigendecomposition failed to converge");

  // Eigen returns ascending order; we want descending.
  const Eigen::VectorXd eigs = solver.eigenvalues().reverse();
  const Eigen::MatrixXd vecs = solver.eigenvectors().rowwise().reverse();

  const double tol = std::max(eigs[0], 0.0) * 1e-12;
  int rank = 0;
  while (rank < int(eigs.size()) && eigs[rank] > tol) ++rank;

  SaabFilterBank bank;
  bank.input_dim = dim_;
  bank.pca_mode = pca_mode;
  bank.n_ac = n_ac;
  bank.bias = pca_mode ? 0.0 : max_norm_;
  bank.mean = pca_mode ? mean : Eigen::VectorXd::Zero(dim_);
  bank.dc_filter = Eigen::VectorXd::Constant(dim_, 1.0 / std::sqrt(double(dim_)));

  const int kept = std::min(n_filters, rank);
  if (kept < n_filters)
    std::cerr << "saab: rank deficient covariance, keeping " << kept << " of " << n_filters
              << " filters (zero-padding the rest)\n";

  Eigen::MatrixXd filters = Eigen::MatrixXd::Zero(n_filters, dim_);
  for (int k = 0; k < kept; ++k) {
    filters.row(k) = vecs.col(k).transpose();
    fix_sign(filters, k);
  }
  if (pca_mode) {
    // First principal component stands in for the DC slot so output
    // dimensions match the Saab bank exactly.
    bank.dc_filter = filters.row(0).transpose();
    bank.ac_filters = filters.bottomRows(n_ac);
  } else {
    bank.ac_filters = filters;
  }

  bank.energy.eigenvalues = eigs.cwiseMax(0.0);
  const double total = bank.energy.eigenvalues.sum();
  bank.energy.cumulative.resize(eigs.size());
  double running = 0.0;
  for (int i = 0; i < int(eigs.size()); ++i) {
    running += bank.energy.eigenvalues[i];
    bank.energy.cumulative[i] = total > 0.0 ? running / total : 1.0;
  }
  if (total > 0.0) bank.energy.cumulative[eigs.size() - 1] = 1.0;
  return bank;
}

SaabFilterBank fit_saab(const Eigen::MatrixXd& samples, int n_ac, bool pca_mode, bool center) {
  SaabAccumulator acc(int(samples.cols()));
  acc.add(samples);
  return acc.fit(n_ac, pca_mode, center);
}

int energy_knee(const EnergyCurve& curve) {
  const int n = int(curve.cumulative.size());
  if (n < 3) return std::max(1, n);
  const double x0 = 1.0, y0 = curve.cumulative[0];
  const double x1 = double(n), y1 = curve.cumulative[n - 1];
  // |distance to chord| up to the constant chord length; argmax is the knee
  const double dx = x1 - x0, dy = y1 - y0;
  int best_index = 1;
  double best = 1e-12;  // flat curves (all distances ~0) fall through to 1
  for (int i = 0; i < n; ++i) {
    const double x = double(i + 1), y = curve.cumulative[i];
    const double dist = std::abs(dy * x - dx * y + x1 * y0 - y1 * x0);
    if (dist > best) {
      best = dist;
      best_index = i + 1;
    }
  }
  return best_index;
}

}  // namespace pointhop
