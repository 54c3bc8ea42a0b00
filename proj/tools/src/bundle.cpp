#include "bundle.hpp"

#include "pointhop/error.hpp"
#include "pointhop/serialize.hpp"

namespace pointhop::cli {
namespace {

constexpr std::string_view kMagic = "PHB1";

void write_report(BinaryWriter& w, const EvalReport& report) {
  w.f64(report.overall);
  w.f64(report.average_per_class);
  const uint32_t n = uint32_t(report.class_names.size());
  w.u32(n);
  for (const auto& name : report.class_names) w.str(name);
  for (uint32_t r = 0; r < n; ++r)
    for (uint32_t c = 0; c < n; ++c) w.u32(uint32_t(report.confusion(int(r), int(c))));
  for (const double v : report.per_class) w.f64(v);
}

EvalReport read_report(BinaryReader& r) {
  EvalReport report;
  report.overall = r.f64();
  report.average_per_class = r.f64();
  const uint32_t n = r.u32();
  for (uint32_t i = 0; i < n; ++i) report.class_names.push_back(r.str());
  report.confusion.resize(int(n), int(n));
  for (uint32_t row = 0; row < n; ++row)
    for (uint32_t col = 0; col < n; ++col) report.confusion(int(row), int(col)) = int(r.u32());
  report.per_class.resize(n);
  for (uint32_t i = 0; i < n; ++i) report.per_class[i] = r.f64();
  return report;
}

EnsembleModel as_ensemble(const RunBundle& bundle) {
  EnsembleModel model;
  model.spec.fusion = bundle.fusion;
  model.spec.rotation_axis = bundle.rotation_axis;
  for (size_t b = 0; b < bundle.models.size(); ++b)
    model.spec.branches.push_back({bundle.models[b].config, bundle.rotations[b]});
  model.models = bundle.models;
  model.branch_classifiers = bundle.branch_classifiers;
  return model;
}

}  // namespace

Eigen::VectorXd RunBundle::features_of(const PointCloud& cloud,
                                       std::optional<int> input_override) const {
  if (!is_ensemble()) return extract_features(models[0], cloud, input_override);
  const EnsembleModel ensemble = as_ensemble(*this);
  return fusion == Fusion::feature ? ensemble.ensemble_features(cloud, input_override)
                                   : ensemble.decision_features(cloud, input_override);
}

int RunBundle::predict(const PointCloud& cloud, std::optional<int> input_override) const {
  return classifier.predict(features_of(cloud, input_override));
}

std::string RunBundle::serialize() const {
  BinaryWriter w;
  w.bytes(kMagic.data(), kMagic.size());
  w.u16(format_version);
  w.str(config_text);
  w.u32(uint32_t(class_names.size()));
  for (const auto& name : class_names) w.str(name);
  w.u8(uint8_t(fusion));
  w.u8(uint8_t(rotation_axis));
  w.u32(uint32_t(models.size()));
  for (size_t b = 0; b < models.size(); ++b) {
    w.f64(rotations[b]);
    w.str(save_model(models[b]));
  }
  w.u32(uint32_t(branch_classifiers.size()));
  for (const auto& c : branch_classifiers) w.str(save_classifier(c));
  w.str(save_classifier(classifier));
  write_report(w, train_report);
  w.u32(uint32_t(timings.size()));
  for (const auto& [stage, seconds] : timings) {
    w.str(stage);
    w.f64(seconds);
  }
  std::string bytes = w.take();
  BinaryWriter trailer;
  trailer.u32(crc32(bytes.data(), bytes.size()));
  return bytes + trailer.take();
}

RunBundle RunBundle::deserialize(std::string_view bytes) {
  if (bytes.size() < 8 || bytes.substr(0, 4) != kMagic)
    raise(errc::unknown_magic, "not a run bundle");
  const std::string_view payload = bytes.substr(0, bytes.size() - 4);
  BinaryReader crc_reader(bytes.substr(bytes.size() - 4));
  if (crc32(payload.data(), payload.size()) != crc_reader.u32())
    raise(errc::checksum_failure, "bundle CRC mismatch");

  BinaryReader r(payload.substr(4));
  const uint16_t version = r.u16();
  if (version != format_version)
    raise(errc::version_mismatch, "bundle format version " + std::to_string(version));

  RunBundle bundle;
  bundle.config_text = r.str();
  const uint32_t n_classes = r.u32();
  for (uint32_t i = 0; i < n_classes; ++i) bundle.class_names.push_back(r.str());
  bundle.fusion = Fusion(r.u8());
  bundle.rotation_axis = int(r.u8());
  const uint32_t n_models = r.u32();
  for (uint32_t b = 0; b < n_models; ++b) {
    bundle.rotations.push_back(r.f64());
    bundle.models.push_back(load_model(r.str()));
  }
  const uint32_t n_branch = r.u32();
  for (uint32_t b = 0; b < n_branch; ++b)
    bundle.branch_classifiers.push_back(load_classifier(r.str()));
  bundle.classifier = load_classifier(r.str());
  bundle.train_report = read_report(r);
  const uint32_t n_timings = r.u32();
  for (uint32_t i = 0; i < n_timings; ++i) {
    std::string stage = r.str();
    const double seconds = r.f64();
    bundle.timings.emplace_back(std::move(stage), seconds);
  }
  return bundle;
}

void RunBundle::save(const std::filesystem::path& path) const {
  write_file(path.string(), serialize());
}

RunBundle RunBundle::load(const std::filesystem::path& path) {
  return deserialize(read_file(path.string()));
}

}  // namespace pointhop::cli
