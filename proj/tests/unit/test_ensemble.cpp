#include <cmath>

#include "doctest.h"
#include "pointhop/ensemble.hpp"
#include "pointhop/error.hpp"
#include "pointhop/metrics.hpp"
#include "pointhop/rng.hpp"
#include "synth.hpp"

using namespace pointhop;

namespace {

PointHopConfig tiny_config() {
  PointHopConfig cfg;
  cfg.input_points = 64;
  cfg.unit_points = {64, 32, 16, 8};
  cfg.k_values = {8, 8, 8, 8};
  cfg.n_ac = {4, 6, 8, 10};
  cfg.seed = 7;
  return cfg;
}

std::vector<PointCloud> tiny_clouds(int count, uint64_t seed = 6000) {
  std::vector<PointCloud> clouds;
  for (int i = 0; i < count; ++i)
    clouds.push_back(normalize_cloud(synth::random_cloud(64, derive_seed(seed, 8, uint64_t(i)))));
  return clouds;
}

}  // namespace

TEST_CASE("rotate_cloud: 0 and 360 degrees are the identity") {
  const PointCloud pc = normalize_cloud(synth::random_cloud(100, 42));
  CHECK(rotate_cloud(pc, 0.0).points == pc.points);
  CHECK((rotate_cloud(pc, 360.0).points - pc.points).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("rotate_cloud: eight 45-degree turns close the loop") {
  const PointCloud pc = normalize_cloud(synth::random_cloud(100, 43));
  PointCloud turned = pc;
  for (int i = 0; i < 8; ++i) turned = rotate_cloud(turned, 45.0);
  CHECK((turned.points - pc.points).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("rotate_cloud preserves pairwise distances and norms") {
  const PointCloud pc = normalize_cloud(synth::random_cloud(50, 44));
  const PointCloud rot = rotate_cloud(pc, 77.5);
  for (int i = 0; i < pc.size(); ++i) {
    CHECK(std::abs(rot.points.row(i).norm() - pc.points.row(i).norm()) <= 1e-9);
    for (int j = i + 1; j < pc.size(); ++j) {
      const double before = (pc.points.row(i) - pc.points.row(j)).norm();
      const double after = (rot.points.row(i) - rot.points.row(j)).norm();
      CHECK(std::abs(before - after) <= 1e-9);
    }
  }
}

TEST_CASE("rotate_cloud supports the other axes") {
  PointCloud pc;
  pc.points.resize(1, 3);
  pc.points << 0, 1, 0;
  const PointCloud about_x = rotate_cloud(pc, 90.0, 0);
  CHECK(about_x.points(0, 2) == doctest::Approx(1.0));
  CHECK_THROWS_AS(rotate_cloud(pc, 10.0, 3), Error);
}

TEST_CASE("single-branch ensemble equals plain feature extraction") {
  const auto clouds = tiny_clouds(8);
  EnsembleSpec spec;
  spec.branches.push_back({tiny_config(), 0.0});
  const EnsembleFitResult fit = fit_ensemble(clouds, spec);

  const FitResult plain = fit_pointhop(clouds, tiny_config());
  CHECK(fit.features == plain.features);

  EnsembleModel model;
  model.spec = spec;
  model.models = fit.models;
  CHECK(model.ensemble_features(clouds[3]) == extract_features(plain.model, clouds[3]));
}

TEST_CASE("ensemble feature length is the sum of branch lengths") {
  const auto clouds = tiny_clouds(8);
  EnsembleSpec spec;
  for (const double angle : {0.0, 45.0, 90.0, 135.0, 180.0})
    spec.branches.push_back({tiny_config(), angle});
  const EnsembleFitResult fit = fit_ensemble(clouds, spec);
  const int single = fit.models[0].layout.total_dim;
  CHECK(fit.features.cols() == 5 * single);
  CHECK(fit.branch_offsets == std::vector<int>{0, single, 2 * single, 3 * single, 4 * single});

  EnsembleModel model;
  model.spec = spec;
  model.models = fit.models;
  CHECK(model.ensemble_features(clouds[0]).size() == 5 * single);
  // branch 0 sees the unrotated cloud, so its block matches the plain path
  CHECK(model.ensemble_features(clouds[0]).head(single) ==
        extract_features(fit.models[0], clouds[0]));
}

TEST_CASE("branch order permutation only permutes feature blocks") {
  const auto clouds = tiny_clouds(6);
  EnsembleSpec spec;
  spec.branches.push_back({tiny_config(), 0.0});
  spec.branches.push_back({tiny_config(), 90.0});
  EnsembleSpec swapped;
  swapped.branches.push_back({tiny_config(), 90.0});
  swapped.branches.push_back({tiny_config(), 0.0});

  const EnsembleFitResult a = fit_ensemble(clouds, spec);
  const EnsembleFitResult b = fit_ensemble(clouds, swapped);
  const int dim = a.models[0].layout.total_dim;
  CHECK(a.features.leftCols(dim) == b.features.rightCols(dim));
  CHECK(a.features.rightCols(dim) == b.features.leftCols(dim));
}

TEST_CASE("decision features concatenate per-branch probability vectors") {
  const auto clouds = tiny_clouds(10);
  std::vector<int> labels;
  for (size_t i = 0; i < clouds.size(); ++i) labels.push_back(int(i) % 2);

  EnsembleSpec spec;
  spec.fusion = Fusion::decision;
  for (const double angle : {0.0, 120.0, 240.0}) spec.branches.push_back({tiny_config(), angle});
  const EnsembleFitResult fit = fit_ensemble(clouds, spec);

  EnsembleModel model;
  model.spec = spec;
  model.models = fit.models;
  RandomForestParams params;
  params.n_trees = 8;
  for (size_t b = 0; b < 3; ++b) {
    const Eigen::MatrixXd block = fit.features.middleCols(
        fit.branch_offsets[b], fit.models[b].layout.total_dim);
    model.branch_classifiers.push_back(
        Classifier{RandomForestModel::fit(block, labels, 2, params, 5)});
  }
  const Eigen::VectorXd decision = model.decision_features(clouds[0]);
  CHECK(decision.size() == 3 * 2);  // three branches, two classes
  // each branch block is that branch's own probability vector
  const Eigen::VectorXd f0 = extract_features(model.models[0], clouds[0]);
  CHECK(decision.head(2) == model.branch_classifiers[0].predict_proba(f0));
  CHECK(decision.head(2).sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("complementary branches lift a decision ensemble above either alone") {
  // two synthetic "branches" with complementary errors on a toy problem:
  // branch A sees only dimension 0, branch B only dimension 1; class is the
  // XOR-free quadrant sign so each single view misclassifies one stripe
  Philox rng(2025);
  const int n = 400;
  Eigen::MatrixXd features(n, 2);
  std::vector<int> labels;
  for (int i = 0; i < n; ++i) {
    const double a = rng.next_double() * 2.0 - 1.0;
    const double b = rng.next_double() * 2.0 - 1.0;
    features(i, 0) = a;
    features(i, 1) = b;
    labels.push_back(a + b > 0.0 ? 1 : 0);
  }
  RandomForestParams params;
  params.n_trees = 32;
  const RandomForestModel on_a = RandomForestModel::fit(features.leftCols(1), labels, 2, params, 1);
  const RandomForestModel on_b = RandomForestModel::fit(features.rightCols(1), labels, 2, params, 2);

  Eigen::MatrixXd decisions(n, 4);
  for (int i = 0; i < n; ++i) {
    decisions.row(i).head(2) = on_a.predict_proba(features.row(i).head(1).transpose());
    decisions.row(i).tail(2) = on_b.predict_proba(features.row(i).tail(1).transpose());
  }
  const RandomForestModel fused = RandomForestModel::fit(decisions, labels, 2, params, 3);

  auto accuracy = [&](auto&& predict) {
    int correct = 0;
    for (int i = 0; i < n; ++i)
      if (predict(i) == labels[size_t(i)]) ++correct;
    return double(correct) / n;
  };
  const double acc_a = accuracy([&](int i) { return on_a.predict(features.row(i).head(1).transpose()); });
  const double acc_b = accuracy([&](int i) { return on_b.predict(features.row(i).tail(1).transpose()); });
  const double acc_fused = accuracy([&](int i) { return fused.predict(decisions.row(i).transpose()); });
  CHECK(acc_fused >= std::max(acc_a, acc_b));
}

TEST_CASE("ensemble spec validation") {
  EnsembleSpec spec;
  CHECK_THROWS_AS(spec.validate(), Error);  // no branches
  spec.branches.push_back({tiny_config(), 370.0});
  CHECK_THROWS_AS(spec.validate(), Error);  // angle out of range
  spec.branches[0].rotation_degrees = 45.0;
  spec.validate();
}
