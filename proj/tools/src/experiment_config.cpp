#include "experiment_config.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <vector>

#include "pointhop/error.hpp"
#include "pointhop/serialize.hpp"

namespace pointhop::cli {
namespace {

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

std::vector<std::string> split_on(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

long parse_int(const std::string& key, std::string_view value) {
  long out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    raise(errc::bad_config, key + ": expected an integer, got '" + std::string(value) + "'");
  return out;
}

double parse_real(const std::string& key, std::string_view value) {
  double out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    raise(errc::bad_config, key + ": expected a number, got '" + std::string(value) + "'");
  return out;
}

bool parse_bool(const std::string& key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  raise(errc::bad_config, key + ": expected true/false, got '" + std::string(value) + "'");
}

template <size_t N>
void parse_int_array(const std::string& key, std::string_view value, std::array<int, N>& out,
                     char sep = ' ') {
  const auto parts = sep == ' ' ? split_ws(value) : split_on(value, sep);
  if (parts.size() != N)
    raise(errc::bad_config, key + ": expected " + std::to_string(N) + " integers");
  for (size_t i = 0; i < N; ++i) out[i] = int(parse_int(key, parts[i]));
}

std::vector<Pooling> parse_poolings(const std::string& key, std::string_view value) {
  std::vector<Pooling> out;
  for (const auto& name : split_ws(value)) {
    const auto p = pooling_from_string(name);
    if (!p) raise(errc::bad_config, key + ": unknown pooling '" + name + "'");
    out.push_back(*p);
  }
  return out;
}

// `rotation=45 n_ac=15,25,35,50 k=... unit_points=... input_points=...`
EnsembleBranch parse_branch(const PointHopConfig& base, std::string_view value) {
  EnsembleBranch branch{base, 0.0};
  for (const auto& field : split_ws(value)) {
    const size_t eq = field.find('=');
    if (eq == std::string::npos)
      raise(errc::bad_config, "ensemble.branch: field '" + field + "' is not key=value");
    const std::string key = field.substr(0, eq);
    const std::string val = field.substr(eq + 1);
    if (key == "rotation") {
      branch.rotation_degrees = parse_real("ensemble.branch.rotation", val);
    } else if (key == "n_ac") {
      parse_int_array("ensemble.branch.n_ac", val, branch.config.n_ac, ',');
    } else if (key == "k") {
      parse_int_array("ensemble.branch.k", val, branch.config.k_values, ',');
    } else if (key == "unit_points") {
      parse_int_array("ensemble.branch.unit_points", val, branch.config.unit_points, ',');
    } else if (key == "input_points") {
      branch.config.input_points = int(parse_int("ensemble.branch.input_points", val));
    } else {
      raise(errc::bad_config, "ensemble.branch: unknown field '" + key + "'");
    }
  }
  return branch;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  ExperimentConfig config;
  bool saw_schema = false;
  std::vector<std::string> branch_lines;

  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (const size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      if (line.find_first_not_of(" \t\r") != std::string_view::npos)
        raise(errc::bad_config, "config line without '=': " + std::string(line));
      if (end == text.size()) break;
      continue;
    }
    auto trim = [](std::string_view s) {
      const size_t a = s.find_first_not_of(" \t\r");
      const size_t b = s.find_last_not_of(" \t\r");
      return a == std::string_view::npos ? std::string() : std::string(s.substr(a, b - a + 1));
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "schema_version") {
      if (parse_int(key, value) != 1)
        raise(errc::bad_config, "unsupported schema_version " + value);
      saw_schema = true;
    } else if (key == "pipeline.input_points") {
      config.pipeline.input_points = int(parse_int(key, value));
    } else if (key == "pipeline.unit_points") {
      parse_int_array(key, value, config.pipeline.unit_points);
    } else if (key == "pipeline.k") {
      parse_int_array(key, value, config.pipeline.k_values);
    } else if (key == "pipeline.n_ac") {
      parse_int_array(key, value, config.pipeline.n_ac);
    } else if (key == "pipeline.poolings") {
      config.pipeline.poolings = parse_poolings(key, value);
    } else if (key == "pipeline.initial_attributes") {
      if (value == "xyz")
        config.pipeline.color_attributes = false;
      else if (value == "xyzrgb")
        config.pipeline.color_attributes = true;
      else
        raise(errc::bad_config, key + ": expected xyz or xyzrgb");
    } else if (key == "pipeline.use_fps") {
      config.pipeline.use_fps = parse_bool(key, value);
    } else if (key == "pipeline.last_stage_only") {
      config.pipeline.last_stage_only = parse_bool(key, value);
    } else if (key == "pipeline.reduction") {
      if (value == "saab")
        config.pipeline.pca_reduction = false;
      else if (value == "pca")
        config.pipeline.pca_reduction = true;
      else
        raise(errc::bad_config, key + ": expected saab or pca");
    } else if (key == "pipeline.center_ac") {
      config.pipeline.center_ac = parse_bool(key, value);
    } else if (key == "pipeline.seed") {
      config.pipeline.seed = uint64_t(parse_int(key, value));
    } else if (key == "classifier.kind") {
      if (value == "rf")
        config.classifier_kind = ClassifierKind::random_forest;
      else if (value == "linear")
        config.classifier_kind = ClassifierKind::linear;
      else
        raise(errc::bad_config, key + ": expected rf or linear");
    } else if (key == "classifier.trees") {
      config.forest.n_trees = int(parse_int(key, value));
    } else if (key == "classifier.max_depth") {
      config.forest.max_depth = int(parse_int(key, value));
    } else if (key == "classifier.min_leaf") {
      config.forest.min_leaf = int(parse_int(key, value));
    } else if (key == "classifier.max_features") {
      config.forest.max_features = int(parse_int(key, value));
    } else if (key == "classifier.reg") {
      config.linear.reg = parse_real(key, value);
    } else if (key == "classifier.tol") {
      config.linear.tol = parse_real(key, value);
    } else if (key == "classifier.max_epochs") {
      config.linear.max_epochs = int(parse_int(key, value));
    } else if (key == "ensemble.fusion") {
      if (value == "feature")
        config.ensemble.fusion = Fusion::feature;
      else if (value == "decision")
        config.ensemble.fusion = Fusion::decision;
      else
        raise(errc::bad_config, key + ": expected feature or decision");
    } else if (key == "ensemble.rotation_axis") {
      if (value == "x")
        config.ensemble.rotation_axis = 0;
      else if (value == "y")
        config.ensemble.rotation_axis = 1;
      else if (value == "z")
        config.ensemble.rotation_axis = 2;
      else
        raise(errc::bad_config, key + ": expected x, y or z");
    } else if (key == "ensemble.branch") {
      branch_lines.push_back(value);
    } else {
      raise(errc::bad_config, "unknown config key '" + key + "'");
    }
    if (end == text.size()) break;
  }

  if (!saw_schema) raise(errc::bad_config, "config is missing schema_version");
  for (const auto& line : branch_lines)
    config.ensemble.branches.push_back(parse_branch(config.pipeline, line));
  return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  return parse(read_file(path.string()));
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream out;
  auto join = [](const auto& values, const char* sep) {
    std::string s;
    for (size_t i = 0; i < values.size(); ++i) {
      if (i) s += sep;
      s += std::to_string(values[i]);
    }
    return s;
  };
  out << "schema_version = 1\n";
  out << "pipeline.input_points = " << pipeline.input_points << "\n";
  out << "pipeline.unit_points = " << join(pipeline.unit_points, " ") << "\n";
  out << "pipeline.k = " << join(pipeline.k_values, " ") << "\n";
  out << "pipeline.n_ac = " << join(pipeline.n_ac, " ") << "\n";
  out << "pipeline.poolings =";
  for (const Pooling p : pipeline.poolings) out << " " << to_string(p);
  out << "\n";
  out << "pipeline.initial_attributes = " << (pipeline.color_attributes ? "xyzrgb" : "xyz") << "\n";
  out << "pipeline.use_fps = " << (pipeline.use_fps ? "true" : "false") << "\n";
  out << "pipeline.last_stage_only = " << (pipeline.last_stage_only ? "true" : "false") << "\n";
  out << "pipeline.reduction = " << (pipeline.pca_reduction ? "pca" : "saab") << "\n";
  out << "pipeline.center_ac = " << (pipeline.center_ac ? "true" : "false") << "\n";
  out << "pipeline.seed = " << pipeline.seed << "\n";
  out << "classifier.kind = " << to_string(classifier_kind) << "\n";
  out << "classifier.trees = " << forest.n_trees << "\n";
  out << "classifier.max_depth = " << forest.max_depth << "\n";
  out << "classifier.min_leaf = " << forest.min_leaf << "\n";
  out << "classifier.max_features = " << forest.max_features << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", linear.reg);
  out << "classifier.reg = " << buf << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", linear.tol);
  out << "classifier.tol = " << buf << "\n";
  out << "classifier.max_epochs = " << linear.max_epochs << "\n";
  if (!ensemble.branches.empty()) {
    out << "ensemble.fusion = " << (ensemble.fusion == Fusion::feature ? "feature" : "decision")
        << "\n";
    out << "ensemble.rotation_axis = " << "xyz"[ensemble.rotation_axis] << "\n";
    for (const auto& branch : ensemble.branches) {
      std::snprintf(buf, sizeof buf, "%.17g", branch.rotation_degrees);
      out << "ensemble.branch = rotation=" << buf;
      out << " input_points=" << branch.config.input_points;
      out << " unit_points=" << join(branch.config.unit_points, ",");
      out << " k=" << join(branch.config.k_values, ",");
      out << " n_ac=" << join(branch.config.n_ac, ",");
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace pointhop::cli
