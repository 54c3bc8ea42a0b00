// ModelNet40 acceptance suite. Needs the raw dataset (OFF layout) under
// $POINTHOP_MODELNET40_DIR; every criterion prints SKIP and the suite exits
// 0 when the variable is unset. Converted clouds and nothing else are
// cached under $POINTHOP_WORK_DIR (default ./modelnet40_work).
//
// Criteria:
//   1. 256-point default, four poolings + RF: overall >= 84.0%, fit <= 30 min
//   2. 1024-point single model: overall >= 86.5%, fit <= 90 min
//   3. rotation feature-ensemble (5 branches at 512 points): >= 86.0% and
//      strictly above its own single-branch baseline
//   4. pooling ensemble >= every single pooling, at 256 and 1024 points
//   5. density robustness: train 1024, test {256,512,768} emitted;
//      accuracy at 256 >= 70% of the 1024-point accuracy
//   6. per-class report: flower_pot accuracy within the bottom 3 classes

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <thread>

#include "commands.hpp"
#include "pointhop/metrics.hpp"
#include "pointhop/random_forest.hpp"
#include "pointhop/rng.hpp"

using namespace pointhop;
using namespace pointhop::cli;

namespace {

int g_failures = 0;
const char* kCriteria[] = {
    "256-point default accuracy",   "1024-point baseline accuracy",
    "rotation feature-ensemble",    "pooling ensemble trend",
    "density robustness",           "per-class hardest classes",
};

void line(const char* status, const std::string& name, const std::string& detail) {
  std::printf("[%s] %-32s %s\n", status, name.c_str(), detail.c_str());
  std::fflush(stdout);
}

void check(int criterion, bool ok, const std::string& detail) {
  line(ok ? "PASS" : "FAIL", kCriteria[criterion], detail);
  if (!ok) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

PointHopConfig config_for(int input_points, std::array<int, 4> unit_points) {
  PointHopConfig cfg;
  cfg.input_points = input_points;
  cfg.unit_points = unit_points;
  cfg.seed = 1;
  return cfg;
}

// feature columns belonging to one pooling scheme
std::vector<int> pooling_columns(const FeatureLayout& layout, Pooling pooling) {
  std::vector<int> cols;
  for (const auto& slice : layout.slices)
    if (slice.pooling == pooling)
      for (int i = 0; i < slice.dim; ++i) cols.push_back(slice.offset + i);
  return cols;
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& m, const std::vector<int>& cols) {
  Eigen::MatrixXd out(m.rows(), Eigen::Index(cols.size()));
  for (size_t i = 0; i < cols.size(); ++i) out.col(Eigen::Index(i)) = m.col(cols[i]);
  return out;
}

double forest_accuracy(const Eigen::MatrixXd& train_x, const std::vector<int>& train_y,
                       const Eigen::MatrixXd& test_x, const std::vector<int>& test_y,
                       int n_classes, int threads) {
  const RandomForestModel rf = RandomForestModel::fit(train_x, train_y, n_classes, {}, 1, threads);
  int correct = 0;
  for (Eigen::Index i = 0; i < test_x.rows(); ++i)
    if (rf.predict(test_x.row(i).transpose()) == test_y[size_t(i)]) ++correct;
  return double(correct) / double(test_y.size());
}

Eigen::MatrixXd test_features(const PointHopModel& model, const LoadedSplit& split,
                              std::optional<int> override_points = {}) {
  Eigen::MatrixXd features(Eigen::Index(split.clouds.size()), model.layout.total_dim);
  for (size_t i = 0; i < split.clouds.size(); ++i)
    features.row(Eigen::Index(i)) = extract_features(model, split.clouds[i], override_points);
  return features;
}

}  // namespace

int main() {
  const char* raw_dir = std::getenv("POINTHOP_MODELNET40_DIR");
  if (raw_dir == nullptr || *raw_dir == '\0') {
    std::printf("acceptance: ModelNet40 suite (dataset not available)\n");
    for (const char* name : kCriteria)
      line("SKIP", name, "set POINTHOP_MODELNET40_DIR to the raw OFF root to run");
    return 0;
  }

  const char* work_env = std::getenv("POINTHOP_WORK_DIR");
  const std::filesystem::path work = work_env ? work_env : "modelnet40_work";
  const int threads = int(std::max(1u, std::thread::hardware_concurrency()));
  std::printf("acceptance: ModelNet40 suite (data=%s, work=%s, threads=%d)\n", raw_dir,
              work.c_str(), threads);

  if (!std::filesystem::exists(work / "train.txt")) {
    std::printf("converting raw meshes to 2048-point clouds...\n");
    cmd_convert({raw_dir, work, 2048, 1, {"train", "test"}});
  }
  const LoadedSplit train = load_split(work, "train");
  const LoadedSplit test = load_split(work, "test", train.class_names);
  const int n_classes = int(train.class_names.size());
  std::printf("loaded %zu train / %zu test clouds, %d classes\n", train.clouds.size(),
              test.clouds.size(), n_classes);

  // ---- criterion 1: 256-point default -----------------------------------
  auto start = std::chrono::steady_clock::now();
  const PointHopConfig cfg256 = config_for(256, {256, 128, 128, 64});
  const FitResult fit256 = fit_pointhop(train.clouds, cfg256, threads);
  const RandomForestModel rf256 =
      RandomForestModel::fit(fit256.features, train.labels, n_classes, {}, 1, threads);
  const double fit256_seconds = seconds_since(start);
  const Eigen::MatrixXd test256 = test_features(fit256.model, test);
  std::vector<int> pred;
  for (Eigen::Index i = 0; i < test256.rows(); ++i)
    pred.push_back(rf256.predict(test256.row(i).transpose()));
  const double acc256 =
      evaluate_predictions(pred, test.labels, test.class_names).overall;
  {
    char detail[160];
    std::snprintf(detail, sizeof detail, "overall %.2f%% (need >= 84.00%%), fit %.0f s (<= 1800)",
                  100.0 * acc256, fit256_seconds);
    check(0, acc256 >= 0.84 && fit256_seconds <= 1800.0, detail);
  }

  // ---- criterion 2: 1024-point baseline ----------------------------------
  start = std::chrono::steady_clock::now();
  const PointHopConfig cfg1024 = config_for(1024, {1024, 128, 128, 64});
  const FitResult fit1024 = fit_pointhop(train.clouds, cfg1024, threads);
  const RandomForestModel rf1024 =
      RandomForestModel::fit(fit1024.features, train.labels, n_classes, {}, 1, threads);
  const double fit1024_seconds = seconds_since(start);
  const Eigen::MatrixXd test1024 = test_features(fit1024.model, test);
  pred.clear();
  for (Eigen::Index i = 0; i < test1024.rows(); ++i)
    pred.push_back(rf1024.predict(test1024.row(i).transpose()));
  const EvalReport report1024 = evaluate_predictions(pred, test.labels, test.class_names);
  {
    char detail[160];
    std::snprintf(detail, sizeof detail, "overall %.2f%% (need >= 86.50%%), fit %.0f s (<= 5400)",
                  100.0 * report1024.overall, fit1024_seconds);
    check(1, report1024.overall >= 0.865 && fit1024_seconds <= 5400.0, detail);
  }

  // ---- criterion 3: rotation feature-ensemble ----------------------------
  {
    EnsembleSpec spec;
    for (const double angle : {0.0, 45.0, 90.0, 135.0, 180.0})
      spec.branches.push_back({config_for(512, {512, 128, 128, 64}), angle});
    const EnsembleFitResult ens = fit_ensemble(train.clouds, spec, threads);

    EnsembleModel model;
    model.spec = spec;
    model.models = ens.models;
    Eigen::MatrixXd ens_test(Eigen::Index(test.clouds.size()), ens.features.cols());
    for (size_t i = 0; i < test.clouds.size(); ++i)
      ens_test.row(Eigen::Index(i)) = model.ensemble_features(test.clouds[i]);

    const double ens_acc = forest_accuracy(ens.features, train.labels, ens_test, test.labels,
                                           n_classes, threads);
    const int single_dim = ens.models[0].layout.total_dim;
    const double single_acc =
        forest_accuracy(ens.features.leftCols(single_dim), train.labels,
                        ens_test.leftCols(single_dim), test.labels, n_classes, threads);
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "ensemble %.2f%% (need >= 86.00%%), single branch %.2f%% (must be below)",
                  100.0 * ens_acc, 100.0 * single_acc);
    check(2, ens_acc >= 0.86 && ens_acc > single_acc, detail);
  }

  // ---- criterion 4: pooling ensemble trend -------------------------------
  {
    bool ok = true;
    std::string detail;
    const struct {
      const FitResult* fit;
      const Eigen::MatrixXd* test_x;
      double all_acc;
      const char* tag;
    } runs[2] = {{&fit256, &test256, acc256, "256"},
                 {&fit1024, &test1024, report1024.overall, "1024"}};
    for (const auto& run : runs) {
      detail += std::string(run.tag) + ": all=" +
                std::to_string(100.0 * run.all_acc).substr(0, 5) + "%";
      for (const Pooling p : {Pooling::max, Pooling::mean, Pooling::l1, Pooling::l2}) {
        const auto cols = pooling_columns(run.fit->model.layout, p);
        const double single = forest_accuracy(select_columns(run.fit->features, cols),
                                              train.labels, select_columns(*run.test_x, cols),
                                              test.labels, n_classes, threads);
        detail += std::string(" ") + to_string(p) + "=" +
                  std::to_string(100.0 * single).substr(0, 5) + "%";
        if (single > run.all_acc) ok = false;
      }
      detail += "  ";
    }
    check(3, ok, detail);
  }

  // ---- criterion 5: density robustness -----------------------------------
  {
    std::string detail = "train@1024: ";
    double acc_at_256 = 0.0;
    for (const int points : {256, 512, 768}) {
      const Eigen::MatrixXd sparse = test_features(fit1024.model, test, points);
      pred.clear();
      for (Eigen::Index i = 0; i < sparse.rows(); ++i)
        pred.push_back(rf1024.predict(sparse.row(i).transpose()));
      const double acc = evaluate_predictions(pred, test.labels, test.class_names).overall;
      if (points == 256) acc_at_256 = acc;
      char part[48];
      std::snprintf(part, sizeof part, "test@%d=%.2f%% ", points, 100.0 * acc);
      detail += part;
    }
    char part[64];
    std::snprintf(part, sizeof part, "test@1024=%.2f%%", 100.0 * report1024.overall);
    detail += part;
    check(4, acc_at_256 >= 0.70 * report1024.overall, detail);
  }

  // ---- criterion 6: hardest classes ---------------------------------------
  {
    std::vector<std::pair<double, std::string>> ranked;
    for (size_t c = 0; c < test.class_names.size(); ++c)
      if (report1024.per_class[c] >= 0.0)
        ranked.emplace_back(report1024.per_class[c], test.class_names[c]);
    std::sort(ranked.begin(), ranked.end());
    std::string bottom;
    bool found = false;
    for (size_t i = 0; i < std::min<size_t>(3, ranked.size()); ++i) {
      bottom += ranked[i].second + "(" + std::to_string(100.0 * ranked[i].first).substr(0, 4) +
                "%) ";
      if (ranked[i].second.find("flower") != std::string::npos) found = true;
    }
    check(5, found, "bottom 3: " + bottom);
    std::printf("confusion matrix (1024-point model):\n%s", report1024.confusion_tsv().c_str());
  }

  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
