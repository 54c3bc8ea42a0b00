#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace pointhop {

/// Classification quality summary. overall is trace(confusion)/total;
/// average_per_class is the unweighted mean of per-class accuracies over
/// classes with at least one test sample. Confusion rows are true classes,
/// columns predicted.
struct EvalReport {
  double overall = 0.0;
  double average_per_class = 0.0;
  Eigen::MatrixXi confusion;
  std::vector<double> per_class;  // -1 for classes with no test samples
  std::vector<std::string> class_names;

  bool operator==(const EvalReport& other) const;

  std::string summary() const;       // two-line human summary
  std::string full_report() const;   // summary + per-class table
  std::string confusion_tsv() const;
};

/// Throws EmptyTestSet on an empty label list.
EvalReport evaluate(const std::function<int(const Eigen::VectorXd&)>& predict,
                    const Eigen::MatrixXd& features, const std::vector<int>& labels,
                    const std::vector<std::string>& class_names);

EvalReport evaluate_predictions(const std::vector<int>& predictions, const std::vector<int>& labels,
                                const std::vector<std::string>& class_names);

}  // namespace pointhop
