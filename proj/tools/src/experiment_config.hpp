#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "pointhop/ensemble.hpp"
#include "pointhop/pipeline.hpp"

namespace pointhop::cli {

/// Everything a fit/eval run needs, parsed from the key-value config text
/// (schema_version 1). Unknown keys are rejected.
struct ExperimentConfig {
  PointHopConfig pipeline;
  ClassifierKind classifier_kind = ClassifierKind::random_forest;
  RandomForestParams forest;
  LinearParams linear;
  EnsembleSpec ensemble;  // branches empty for single-pipeline runs

  bool is_ensemble() const { return !ensemble.branches.empty(); }

  static ExperimentConfig parse(std::string_view text);
  static ExperimentConfig from_file(const std::filesystem::path& path);

  /// Round-trippable snapshot (parse(to_text()) == *this).
  std::string to_text() const;
};

}  // namespace pointhop::cli
