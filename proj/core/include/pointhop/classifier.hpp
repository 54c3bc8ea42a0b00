#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "pointhop/linear.hpp"
#include "pointhop/random_forest.hpp"

namespace pointhop {

enum class ClassifierKind : uint8_t { random_forest = 0, linear = 1 };

const char* to_string(ClassifierKind kind);

/// Either trained classifier behind one predict surface.
struct Classifier {
  std::variant<RandomForestModel, LinearClassifierModel> model;

  ClassifierKind kind() const {
    return std::holds_alternative<RandomForestModel>(model) ? ClassifierKind::random_forest
                                                            : ClassifierKind::linear;
  }
  Eigen::VectorXd predict_proba(const Eigen::VectorXd& feature) const;
  int predict(const Eigen::VectorXd& feature) const;
  int n_classes() const;
};

/// Classifier blob: "PHC1", u16 version, kind, payload, trailing CRC32 —
/// the same discipline as the model file.
std::string save_classifier(const Classifier& classifier);
Classifier load_classifier(std::string_view bytes);

}  // namespace pointhop
