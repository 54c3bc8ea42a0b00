#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "pointhop/dataset.hpp"
#include "pointhop/error.hpp"
#include "pointhop/mesh_sampling.hpp"
#include "pointhop/off.hpp"
#include "pointhop/point_set_io.hpp"
#include "pointhop/rng.hpp"
#include "pointhop/serialize.hpp"

namespace pointhop::cli {

namespace fs = std::filesystem;

namespace {

class StageClock {
 public:
  explicit StageClock(bool verbose) : verbose_(verbose) {}

  void lap(const std::string& stage) {
    const auto now = std::chrono::steady_clock::now();
    const double seconds = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    timings_.emplace_back(stage, seconds);
    if (verbose_) std::printf("  %-24s %8.2f s\n", stage.c_str(), seconds);
  }

  void total(const std::string& stage) {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    timings_.emplace_back(stage, seconds);
    if (verbose_) std::printf("  %-24s %8.2f s\n", stage.c_str(), seconds);
  }

  std::vector<std::pair<std::string, double>> take() { return std::move(timings_); }

 private:
  bool verbose_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
  std::chrono::steady_clock::time_point last_ = start_;
  std::vector<std::pair<std::string, double>> timings_;
};

uint64_t path_key(const std::string& relpath) {
  uint64_t h = 0xCBF29CE484222325ull;
  for (const char ch : relpath) {
    h ^= uint8_t(ch);
    h *= 0x100000001B3ull;
  }
  return h;
}

Classifier train_classifier(const ExperimentConfig& config, const Eigen::MatrixXd& features,
                            const std::vector<int>& labels, int n_classes, uint64_t seed,
                            int threads) {
  if (config.classifier_kind == ClassifierKind::random_forest)
    return Classifier{RandomForestModel::fit(features, labels, n_classes, config.forest,
                                             derive_seed(seed, seed_domain::forest, 0), threads)};
  return Classifier{LinearClassifierModel::fit(features, labels, n_classes, config.linear)};
}

}  // namespace

LoadedSplit load_split(const fs::path& data_root, const std::string& split,
                       const std::optional<std::vector<std::string>>& expected_classes) {
  const DatasetManifest manifest =
      load_manifest_file(data_root / (split + ".txt"), split, expected_classes);
  LoadedSplit loaded;
  loaded.class_names = manifest.class_names;
  loaded.clouds.reserve(manifest.entries.size());
  for (const auto& entry : manifest.entries) {
    PointCloud pc = read_point_set_file(entry.path.string(), PointSetFormat::packed_binary);
    pc.label = entry.class_id;
    loaded.labels.push_back(entry.class_id);
    loaded.clouds.push_back(std::move(pc));
  }
  return loaded;
}

RunBundle fit_experiment(const ExperimentConfig& config, const LoadedSplit& train, int threads,
                         bool verbose) {
  const int n_classes = int(train.class_names.size());
  StageClock clock(verbose);

  RunBundle bundle;
  bundle.config_text = config.to_text();
  bundle.class_names = train.class_names;

  Eigen::MatrixXd features;
  if (!config.is_ensemble()) {
    FitResult fit = fit_pointhop(train.clouds, config.pipeline, threads);
    clock.lap("pipeline fit");
    bundle.models.push_back(std::move(fit.model));
    bundle.rotations.push_back(0.0);
    features = std::move(fit.features);
  } else {
    bundle.fusion = config.ensemble.fusion;
    bundle.rotation_axis = config.ensemble.rotation_axis;
    EnsembleFitResult fit = fit_ensemble(train.clouds, config.ensemble, threads);
    clock.lap("ensemble fit");
    bundle.models = std::move(fit.models);
    for (const auto& branch : config.ensemble.branches)
      bundle.rotations.push_back(branch.rotation_degrees);
    if (config.ensemble.fusion == Fusion::feature) {
      features = std::move(fit.features);
    } else {
      // decision fusion: per-branch classifiers, then stack their training
      // probability vectors as the second-stage input
      features.resize(Eigen::Index(train.clouds.size()),
                      Eigen::Index(bundle.models.size()) * n_classes);
      for (size_t b = 0; b < bundle.models.size(); ++b) {
        const Eigen::MatrixXd block = fit.features.middleCols(
            fit.branch_offsets[b], bundle.models[b].layout.total_dim);
        bundle.branch_classifiers.push_back(train_classifier(
            config, block, train.labels, n_classes,
            derive_seed(config.pipeline.seed, seed_domain::forest, 1 + uint64_t(b)), threads));
        for (Eigen::Index i = 0; i < block.rows(); ++i)
          features.row(i).segment(Eigen::Index(b) * n_classes, n_classes) =
              bundle.branch_classifiers[b].predict_proba(block.row(i).transpose()).transpose();
      }
      clock.lap("branch classifiers");
    }
  }

  bundle.classifier =
      train_classifier(config, features, train.labels, n_classes, config.pipeline.seed, threads);
  clock.lap("classifier fit");

  std::vector<int> predictions(train.labels.size());
  for (size_t i = 0; i < train.labels.size(); ++i)
    predictions[i] = bundle.classifier.predict(features.row(Eigen::Index(i)).transpose());
  bundle.train_report = evaluate_predictions(predictions, train.labels, train.class_names);
  clock.lap("train evaluation");
  clock.total("total fit");
  bundle.timings = clock.take();
  return bundle;
}

EvalReport eval_bundle(const RunBundle& bundle, const LoadedSplit& split,
                       std::optional<int> input_override) {
  if (split.clouds.empty()) raise(errc::empty_test_set, "no clouds in split");
  std::vector<int> predictions(split.clouds.size());
  for (size_t i = 0; i < split.clouds.size(); ++i)
    predictions[i] = bundle.predict(split.clouds[i], input_override);
  return evaluate_predictions(predictions, split.labels, split.class_names);
}

int cmd_convert(const ConvertOptions& options) {
  for (const auto& split : options.splits) {
    const DatasetManifest manifest = load_manifest(options.in_root, split, ".off");
    DatasetManifest out_manifest;
    out_manifest.class_names = manifest.class_names;
    out_manifest.split = split;
    for (const auto& entry : manifest.entries) {
      const std::string rel =
          fs::relative(entry.path, options.in_root).generic_string();
      const Mesh mesh = parse_off(read_file(entry.path.string()));
      const PointCloud raw = sample_mesh_surface(
          mesh, options.points, derive_seed(options.seed, seed_domain::convert, path_key(rel)));
      const PointCloud pc = normalize_cloud(raw);

      fs::path out_path = options.out_root / rel;
      out_path.replace_extension(".pbin");
      fs::create_directories(out_path.parent_path());
      write_point_set_file(out_path.string(), pc, PointSetFormat::packed_binary);
      out_manifest.entries.push_back({out_path, entry.class_id});
    }
    write_manifest_file(options.out_root / (split + ".txt"), out_manifest);
    std::printf("%s: %zu clouds of %d points -> %s\n", split.c_str(),
                out_manifest.entries.size(), options.points,
                (options.out_root / (split + ".txt")).c_str());
  }
  return 0;
}

int cmd_fit(const FitOptions& options) {
  ExperimentConfig config = options.config_path.empty()
                                ? ExperimentConfig{}
                                : ExperimentConfig::from_file(options.config_path);
  if (options.ensemble && !config.is_ensemble())
    raise(errc::bad_config, "ensemble-fit needs ensemble.branch lines in the config");
  if (!options.ensemble && config.is_ensemble())
    raise(errc::bad_config, "config defines an ensemble; use ensemble-fit");
  config.pipeline.seed = options.seed;
  for (auto& branch : config.ensemble.branches) branch.config.seed = options.seed;

  const LoadedSplit train = load_split(options.data_root, "train");
  std::printf("fitting on %zu training clouds, %zu classes\n", train.clouds.size(),
              train.class_names.size());
  const RunBundle bundle = fit_experiment(config, train, options.threads, true);
  bundle.save(options.out_bundle);
  std::printf("train split:\n%s", bundle.train_report.summary().c_str());
  std::printf("bundle written to %s\n", options.out_bundle.c_str());
  return 0;
}

int cmd_eval(const EvalOptions& options) {
  const RunBundle bundle = RunBundle::load(options.bundle_path);
  const LoadedSplit split = load_split(options.data_root, options.split, bundle.class_names);
  const EvalReport report = eval_bundle(bundle, split, options.test_points);
  std::string density;
  if (options.test_points) density = ", " + std::to_string(*options.test_points) + " points";
  std::printf("%s split (%zu clouds%s):\n%s", options.split.c_str(), split.clouds.size(),
              density.c_str(), report.full_report().c_str());
  if (!options.report_out.empty()) write_file(options.report_out.string(), report.full_report());
  if (!options.confusion_out.empty())
    write_file(options.confusion_out.string(), report.confusion_tsv());
  return 0;
}

int cmd_ablate(const AblateOptions& options) {
  const ExperimentConfig base = options.config_path.empty()
                                    ? ExperimentConfig{}
                                    : ExperimentConfig::from_file(options.config_path);
  if (base.is_ensemble()) raise(errc::bad_config, "ablate runs single-pipeline configs only");

  struct Variant {
    bool last_stage;
    bool fps;
    std::vector<Pooling> poolings;
    ClassifierKind classifier;
    bool pca;
  };
  const std::vector<Pooling> all{Pooling::max, Pooling::mean, Pooling::l1, Pooling::l2};
  const std::vector<Variant> grid = {
      {true, true, {Pooling::max}, ClassifierKind::linear, false},
      {false, false, {Pooling::max}, ClassifierKind::linear, false},
      {false, true, {Pooling::max}, ClassifierKind::linear, false},
      {false, false, {Pooling::max}, ClassifierKind::random_forest, false},
      {false, true, {Pooling::max}, ClassifierKind::random_forest, false},
      {false, true, {Pooling::mean}, ClassifierKind::random_forest, false},
      {false, true, {Pooling::l1}, ClassifierKind::random_forest, false},
      {false, true, {Pooling::l2}, ClassifierKind::random_forest, false},
      {false, true, {Pooling::max, Pooling::mean}, ClassifierKind::random_forest, false},
      {false, true, {Pooling::max, Pooling::l1}, ClassifierKind::random_forest, false},
      {false, true, {Pooling::max, Pooling::l2}, ClassifierKind::random_forest, false},
      {false, true, all, ClassifierKind::random_forest, false},
      {false, true, all, ClassifierKind::random_forest, true},
  };

  auto axis_on = [&options](const char* axis) {
    return std::find(options.axes.begin(), options.axes.end(), axis) != options.axes.end();
  };
  const Variant defaults{false, true, all, ClassifierKind::random_forest, false};

  const LoadedSplit train = load_split(options.data_root, "train");
  const LoadedSplit test = load_split(options.data_root, "test", train.class_names);

  std::printf("%-11s %-5s %-16s %-10s %-9s %s\n", "features", "fps", "pooling", "classifier",
              "reduction", "accuracy");
  for (const Variant& v : grid) {
    if (!axis_on("features") && v.last_stage != defaults.last_stage) continue;
    if (!axis_on("fps") && v.fps != defaults.fps) continue;
    if (!axis_on("pooling") && v.poolings != defaults.poolings) continue;
    if (!axis_on("classifier") && v.classifier != defaults.classifier) continue;
    if (!axis_on("reduction") && v.pca != defaults.pca) continue;

    ExperimentConfig config = base;
    config.pipeline.seed = options.seed;
    config.pipeline.last_stage_only = v.last_stage;
    config.pipeline.use_fps = v.fps;
    config.pipeline.poolings = v.poolings;
    config.pipeline.pca_reduction = v.pca;
    config.classifier_kind = v.classifier;

    const RunBundle bundle = fit_experiment(config, train, options.threads);
    const EvalReport report = eval_bundle(bundle, test);

    std::string pooling_names;
    for (const Pooling p : v.poolings) {
      if (!pooling_names.empty()) pooling_names += "+";
      pooling_names += to_string(p);
    }
    std::printf("%-11s %-5s %-16s %-10s %-9s %.2f%%\n", v.last_stage ? "last-stage" : "all-stages",
                v.fps ? "yes" : "no", pooling_names.c_str(), to_string(v.classifier),
                v.pca ? "pca" : "saab", 100.0 * report.overall);
    std::fflush(stdout);
  }
  return 0;
}

int cmd_inspect(const InspectOptions& options) {
  const RunBundle bundle = RunBundle::load(options.bundle_path);
  if (options.unit < 1 || options.unit > 4)
    raise(errc::channel_out_of_range, "unit must lie in [1,4]");
  const PointHopModel& model = bundle.models[0];
  const int channel_count = model.output_dims[size_t(options.unit - 1)];
  if (options.channel < 0 || options.channel >= channel_count)
    raise(errc::channel_out_of_range,
          "channel must lie in [0," + std::to_string(channel_count) + ")");

  const PointCloud cloud = read_point_set_auto(options.cloud_path.string());
  TransformTrace trace;
  const auto outputs = transform(model, cloud, {}, &trace);

  const auto& unit = trace.units[size_t(options.unit - 1)];
  const Eigen::VectorXd responses = outputs[size_t(options.unit - 1)].col(options.channel);
  const double lo = responses.minCoeff(), hi = responses.maxCoeff();
  const double scale = hi > lo ? 1.0 / (hi - lo) : 0.0;

  std::string out;
  char line[160];
  for (int r = 0; r < int(unit.retained.size()); ++r) {
    const auto pos = unit.input_positions.row(unit.retained[size_t(r)]);
    std::snprintf(line, sizeof line, "%.9g %.9g %.9g %.9g\n", pos[0], pos[1], pos[2],
                  (responses[r] - lo) * scale);
    out += line;
  }
  if (options.out.empty())
    std::fputs(out.c_str(), stdout);
  else
    write_file(options.out.string(), out);
  return 0;
}

}  // namespace pointhop::cli
