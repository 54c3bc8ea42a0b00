#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bundle.hpp"
#include "experiment_config.hpp"
#include "pointhop/metrics.hpp"
#include "pointhop/point_cloud.hpp"

namespace pointhop::cli {

/// One dataset split loaded into memory.
struct LoadedSplit {
  std::vector<PointCloud> clouds;
  std::vector<int> labels;
  std::vector<std::string> class_names;
};

/// Reads `<root>/<split>.txt` (written by convert) and its packed clouds.
LoadedSplit load_split(const std::filesystem::path& data_root, const std::string& split,
                       const std::optional<std::vector<std::string>>& expected_classes = {});

/// Fits pipeline(s) and classifier on in-memory data; fills the bundle with
/// the training report and stage timings. The workhorse behind fit,
/// ensemble-fit and ablate.
RunBundle fit_experiment(const ExperimentConfig& config, const LoadedSplit& train, int threads,
                         bool verbose = false);

/// Evaluates a bundle on in-memory data.
EvalReport eval_bundle(const RunBundle& bundle, const LoadedSplit& split,
                       std::optional<int> input_override = {});

struct ConvertOptions {
  std::filesystem::path in_root;
  std::filesystem::path out_root;
  int points = 2048;
  uint64_t seed = 0;
  std::vector<std::string> splits{"train", "test"};
};
int cmd_convert(const ConvertOptions& options);

struct FitOptions {
  std::filesystem::path config_path;  // empty = built-in defaults
  std::filesystem::path data_root;
  std::filesystem::path out_bundle;
  uint64_t seed = 0;
  int threads = 1;
  bool ensemble = false;  // set by the ensemble-fit command
};
int cmd_fit(const FitOptions& options);

struct EvalOptions {
  std::filesystem::path bundle_path;
  std::filesystem::path data_root;
  std::string split = "test";
  std::optional<int> test_points;
  std::filesystem::path report_out;     // optional
  std::filesystem::path confusion_out;  // optional
};
int cmd_eval(const EvalOptions& options);

struct AblateOptions {
  std::filesystem::path config_path;  // base configuration, empty = defaults
  std::filesystem::path data_root;
  uint64_t seed = 0;
  int threads = 1;
  std::vector<std::string> axes{"features", "fps", "pooling", "classifier", "reduction"};
};
int cmd_ablate(const AblateOptions& options);

struct InspectOptions {
  std::filesystem::path bundle_path;
  std::filesystem::path cloud_path;
  int unit = 1;     // 1-based
  int channel = 0;  // 0-based
  std::filesystem::path out;  // empty = stdout
};
int cmd_inspect(const InspectOptions& options);

}  // namespace pointhop::cli
