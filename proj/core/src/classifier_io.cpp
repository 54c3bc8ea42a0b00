#include "pointhop/classifier.hpp"

#include "pointhop/error.hpp"
#include "pointhop/serialize.hpp"

namespace pointhop {
namespace {

constexpr std::string_view kMagic = "PHC1";
constexpr uint16_t kVersion = 1;

void write_forest(BinaryWriter& w, const RandomForestModel& rf) {
  w.u32(uint32_t(rf.n_features()));
  w.u32(uint32_t(rf.n_classes()));
  w.u32(uint32_t(rf.params().n_trees));
  w.u32(uint32_t(rf.params().max_depth));
  w.u32(uint32_t(rf.params().min_leaf));
  w.u32(uint32_t(rf.params().max_features));
  w.u32(uint32_t(rf.trees().size()));
  for (const auto& tree : rf.trees()) {
    w.u32(uint32_t(tree.nodes.size()));
    for (const auto& node : tree.nodes) {
      w.u32(uint32_t(node.feature + 1));  // store feature+1 so -1 packs as 0
      w.f64(node.threshold);
      w.u32(uint32_t(node.left + 1));
      w.u32(uint32_t(node.right + 1));
      w.u32(uint32_t(node.leaf + 1));
    }
    w.matrix(tree.leaf_probs);
  }
}

RandomForestModel read_forest(BinaryReader& r) {
  const int n_features = int(r.u32());
  const int n_classes = int(r.u32());
  RandomForestParams params;
  params.n_trees = int(r.u32());
  params.max_depth = int(r.u32());
  params.min_leaf = int(r.u32());
  params.max_features = int(r.u32());
  const uint32_t n_trees = r.u32();
  std::vector<RandomForestModel::Tree> trees(n_trees);
  for (auto& tree : trees) {
    const uint32_t n_nodes = r.u32();
    tree.nodes.resize(n_nodes);
    for (auto& node : tree.nodes) {
      node.feature = int(r.u32()) - 1;
      node.threshold = r.f64();
      node.left = int(r.u32()) - 1;
      node.right = int(r.u32()) - 1;
      node.leaf = int(r.u32()) - 1;
    }
    tree.leaf_probs = r.matrix();
  }
  return RandomForestModel(n_features, n_classes, params, std::move(trees));
}

void write_linear(BinaryWriter& w, const LinearClassifierModel& lin) {
  w.f64(lin.params().reg);
  w.f64(lin.params().tol);
  w.u32(uint32_t(lin.params().max_epochs));
  w.matrix(lin.weights());
  w.vector(lin.intercepts());
  w.vector(lin.mean());
  w.vector(lin.inv_scale());
}

LinearClassifierModel read_linear(BinaryReader& r) {
  LinearParams params;
  params.reg = r.f64();
  params.tol = r.f64();
  params.max_epochs = int(r.u32());
  Eigen::MatrixXd weights = r.matrix();
  Eigen::VectorXd intercepts = r.vector();
  Eigen::VectorXd mean = r.vector();
  Eigen::VectorXd inv_scale = r.vector();
  return LinearClassifierModel(std::move(weights), std::move(intercepts), std::move(mean),
                               std::move(inv_scale), params);
}

}  // namespace

const char* to_string(ClassifierKind kind) {
  return kind == ClassifierKind::random_forest ? "rf" : "linear";
}

Eigen::VectorXd Classifier::predict_proba(const Eigen::VectorXd& feature) const {
  return std::visit([&](const auto& m) { return m.predict_proba(feature); }, model);
}

int Classifier::predict(const Eigen::VectorXd& feature) const {
  return std::visit([&](const auto& m) { return m.predict(feature); }, model);
}

int Classifier::n_classes() const {
  return std::visit([](const auto& m) { return m.n_classes(); }, model);
}

std::string save_classifier(const Classifier& classifier) {
  BinaryWriter w;
  w.bytes(kMagic.data(), kMagic.size());
  w.u16(kVersion);
  w.u8(uint8_t(classifier.kind()));
  if (classifier.kind() == ClassifierKind::random_forest)
    write_forest(w, std::get<RandomForestModel>(classifier.model));
  else
    write_linear(w, std::get<LinearClassifierModel>(classifier.model));
  std::string bytes = w.take();
  BinaryWriter trailer;
  trailer.u32(crc32(bytes.data(), bytes.size()));
  return bytes + trailer.take();
}

Classifier load_classifier(std::string_view bytes) {
  if (bytes.size() < 8 || bytes.substr(0, 4) != kMagic)
    raise(errc::unknown_magic, "not a classifier blob");
  const std::string_view payload = bytes.substr(0, bytes.size() - 4);
  BinaryReader crc_reader(bytes.substr(bytes.size() - 4));
  if (crc32(payload.data(), payload.size()) != crc_reader.u32())
    raise(errc::checksum_failure, "classifier blob CRC mismatch");
  BinaryReader r(payload.substr(4));
  const uint16_t version = r.u16();
  if (version != kVersion)
    raise(errc::version_mismatch, "classifier format version " + std::to_string(version));
  const ClassifierKind kind = ClassifierKind(r.u8());
  Classifier classifier;
  if (kind == ClassifierKind::random_forest)
    classifier.model = read_forest(r);
  else
    classifier.model = read_linear(r);
  return classifier;
}

}  // namespace pointhop
