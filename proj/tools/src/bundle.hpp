#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pointhop/classifier.hpp"
#include "pointhop/ensemble.hpp"
#include "pointhop/metrics.hpp"
#include "pointhop/pipeline.hpp"

namespace pointhop::cli {

/// Self-contained result of a fit run: fitted pipeline model(s), the
/// classifier, the training-split report, a config snapshot and stage
/// timings. File format "PHB1", versioned, CRC-terminated. Re-running
/// evaluation from the bundle on the training split reproduces
/// train_report exactly.
struct RunBundle {
  static constexpr uint16_t format_version = 1;

  std::string config_text;
  std::vector<std::string> class_names;

  Fusion fusion = Fusion::feature;
  int rotation_axis = 2;
  std::vector<double> rotations;       // one per model; {0} for single runs
  std::vector<PointHopModel> models;   // >= 1
  std::vector<Classifier> branch_classifiers;  // decision fusion only
  Classifier classifier;

  EvalReport train_report;
  std::vector<std::pair<std::string, double>> timings;  // (stage, seconds)

  bool is_ensemble() const { return models.size() > 1; }

  Eigen::VectorXd features_of(const PointCloud& cloud,
                              std::optional<int> input_override = {}) const;
  int predict(const PointCloud& cloud, std::optional<int> input_override = {}) const;

  std::string serialize() const;
  static RunBundle deserialize(std::string_view bytes);

  void save(const std::filesystem::path& path) const;
  static RunBundle load(const std::filesystem::path& path);
};

}  // namespace pointhop::cli
