#include "pointhop/random_forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>

#include "pointhop/error.hpp"
#include "pointhop/rng.hpp"

namespace pointhop {
namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double score = -1.0;  // sum of squared-count ratios over both children
};

class TreeBuilder {
 public:
  TreeBuilder(const Eigen::MatrixXd& x, const std::vector<int>& y, int n_classes,
              const RandomForestParams& params, uint64_t seed)
      : x_(x), y_(y), n_classes_(n_classes), params_(params), rng_(seed) {
    const int n = int(x.rows());
    samples_.reserve(size_t(n));
    for (int i = 0; i < n; ++i) samples_.push_back(int(rng_.next_below(uint64_t(n))));
    std::sort(samples_.begin(), samples_.end());  // bootstrap, fixed scan order
    all_features_.resize(size_t(x.cols()));
    std::iota(all_features_.begin(), all_features_.end(), 0);
  }

  RandomForestModel::Tree build() {
    grow(0, int(samples_.size()), 0);
    RandomForestModel::Tree tree;
    tree.nodes = std::move(nodes_);
    tree.leaf_probs.resize(int(leaves_.size()), n_classes_);
    for (size_t i = 0; i < leaves_.size(); ++i) tree.leaf_probs.row(int(i)) = leaves_[i];
    return tree;
  }

 private:
  int grow(int begin, int end, int depth) {
    const int node_id = int(nodes_.size());
    nodes_.emplace_back();

    Eigen::VectorXd counts = Eigen::VectorXd::Zero(n_classes_);
    for (int i = begin; i < end; ++i) counts[y_[size_t(samples_[size_t(i)])]] += 1.0;
    const int n = end - begin;
    const bool pure = counts.maxCoeff() == double(n);
    const bool depth_capped = params_.max_depth > 0 && depth >= params_.max_depth;

    Split split;
    if (!pure && !depth_capped && n >= 2 * params_.min_leaf)
      split = find_split(begin, end, counts);

    if (split.feature < 0) {
      nodes_[size_t(node_id)].leaf = int(leaves_.size());
      leaves_.push_back(counts / double(n));
      return node_id;
    }

    const auto mid = std::stable_partition(
        samples_.begin() + begin, samples_.begin() + end,
        [&](int s) { return x_(s, split.feature) <= split.threshold; });
    const int cut = int(mid - samples_.begin());
    nodes_[size_t(node_id)].feature = split.feature;
    nodes_[size_t(node_id)].threshold = split.threshold;
    const int left = grow(begin, cut, depth + 1);
    const int right = grow(cut, end, depth + 1);
    nodes_[size_t(node_id)].left = left;
    nodes_[size_t(node_id)].right = right;
    return node_id;
  }

  // Exhaustive threshold scan over a random feature subset; maximizes the
  // Gini-equivalent score sum_c nL_c^2 / nL + sum_c nR_c^2 / nR. Ties go to
  // the lowest feature index, then the lowest threshold.
  Split find_split(int begin, int end, const Eigen::VectorXd& total_counts) {
    const int n = end - begin;
    const int n_features = int(all_features_.size());
    const int mtry = params_.max_features > 0
                         ? std::min(params_.max_features, n_features)
                         : std::max(1, int(std::floor(std::sqrt(double(n_features)))));

    // partial Fisher-Yates, then sorted so the scan order is index order
    for (int i = 0; i < mtry; ++i) {
      const int j = i + int(rng_.next_below(uint64_t(n_features - i)));
      std::swap(all_features_[size_t(i)], all_features_[size_t(j)]);
    }
    std::vector<int> chosen(all_features_.begin(), all_features_.begin() + mtry);
    std::sort(chosen.begin(), chosen.end());

    Split best;
    std::vector<std::pair<double, int>> column(static_cast<size_t>(n));
    Eigen::VectorXd left_counts(n_classes_);
    for (const int f : chosen) {
      for (int i = 0; i < n; ++i) {
        const int s = samples_[size_t(begin + i)];
        column[size_t(i)] = {x_(s, f), y_[size_t(s)]};
      }
      std::sort(column.begin(), column.end());
      left_counts.setZero();
      double left_n = 0.0;
      for (int i = 0; i + 1 < n; ++i) {
        left_counts[column[size_t(i)].second] += 1.0;
        left_n += 1.0;
        if (column[size_t(i)].first == column[size_t(i + 1)].first) continue;
        const double right_n = double(n) - left_n;
        if (left_n < params_.min_leaf || right_n < params_.min_leaf) continue;
        double score = 0.0;
        for (int c = 0; c < n_classes_; ++c) {
          score += left_counts[c] * left_counts[c] / left_n;
          const double rc = total_counts[c] - left_counts[c];
          score += rc * rc / right_n;
        }
        if (score > best.score) {
          best.score = score;
          best.feature = f;
          best.threshold =
              column[size_t(i)].first + 0.5 * (column[size_t(i + 1)].first - column[size_t(i)].first);
        }
      }
    }
    // reject splits that cannot beat the parent (no impurity decrease)
    if (best.feature >= 0) {
      const double parent_score = total_counts.squaredNorm() / double(n);
      if (best.score <= parent_score + 1e-12) best.feature = -1;
    }
    return best;
  }

  const Eigen::MatrixXd& x_;
  const std::vector<int>& y_;
  int n_classes_;
  RandomForestParams params_;
  Philox rng_;
  std::vector<int> samples_;
  std::vector<int> all_features_;
  std::vector<RandomForestModel::Node> nodes_;
  std::vector<Eigen::VectorXd> leaves_;
};

}  // namespace

RandomForestModel RandomForestModel::fit(const Eigen::MatrixXd& features,
                                         const std::vector<int>& labels, int n_classes,
                                         const RandomForestParams& params, uint64_t seed,
                                         int threads) {
  if (features.rows() != Eigen::Index(labels.size()))
    raise(errc::dimension_mismatch, "features and labels disagree on sample count");
  if (features.rows() == 0) raise(errc::too_few_samples, "no training samples");
  const int distinct = int(std::set<int>(labels.begin(), labels.end()).size());
  if (distinct < 2) raise(errc::degenerate_labels, "training labels hold a single class");

  RandomForestModel model;
  model.n_features_ = int(features.cols());
  model.n_classes_ = n_classes;
  model.params_ = params;
  model.trees_.resize(size_t(params.n_trees));

  // Tree t draws its seed from the t-th output of a SplitMix64 stream over
  // the master seed; trees are independent of each other and of threading.
  std::vector<uint64_t> tree_seeds(static_cast<size_t>(params.n_trees));
  for (int t = 0; t < params.n_trees; ++t)
    tree_seeds[size_t(t)] = derive_seed(seed, seed_domain::forest, uint64_t(t));

  std::atomic<int> next{0};
  auto worker = [&] {
    while (true) {
      const int t = next.fetch_add(1);
      if (t >= params.n_trees) return;
      TreeBuilder builder(features, labels, n_classes, params, tree_seeds[size_t(t)]);
      model.trees_[size_t(t)] = builder.build();
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(threads, params.n_trees); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return model;
}

Eigen::VectorXd RandomForestModel::predict_proba(const Eigen::VectorXd& feature) const {
  if (int(feature.size()) != n_features_)
    raise(errc::dimension_mismatch, "feature of dim " + std::to_string(feature.size()) +
                                        ", model expects " + std::to_string(n_features_));
  Eigen::VectorXd probs = Eigen::VectorXd::Zero(n_classes_);
  for (const Tree& tree : trees_) {
    int node = 0;
    while (tree.nodes[size_t(node)].feature >= 0) {
      const Node& nd = tree.nodes[size_t(node)];
      node = feature[nd.feature] <= nd.threshold ? nd.left : nd.right;
    }
    probs += tree.leaf_probs.row(tree.nodes[size_t(node)].leaf);
  }
  return probs / double(trees_.size());
}

int RandomForestModel::predict(const Eigen::VectorXd& feature) const {
  const Eigen::VectorXd probs = predict_proba(feature);
  int best = 0;
  for (int c = 1; c < n_classes_; ++c)
    if (probs[c] > probs[best]) best = c;
  return best;
}

}  // namespace pointhop
