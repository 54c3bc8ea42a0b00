#include "pointhop/metrics.hpp"

#include <cstdio>

#include "pointhop/error.hpp"

namespace pointhop {

bool EvalReport::operator==(const EvalReport& other) const {
  return overall == other.overall && average_per_class == other.average_per_class &&
         confusion.rows() == other.confusion.rows() &&
         confusion.cols() == other.confusion.cols() && confusion == other.confusion &&
         per_class == other.per_class && class_names == other.class_names;
}

EvalReport evaluate_predictions(const std::vector<int>& predictions, const std::vector<int>& labels,
                                const std::vector<std::string>& class_names) {
  if (labels.empty()) raise(errc::empty_test_set, "no test samples");
  if (predictions.size() != labels.size())
    raise(errc::dimension_mismatch, "prediction and label counts differ");

  const int n_classes = int(class_names.size());
  EvalReport report;
  report.class_names = class_names;
  report.confusion = Eigen::MatrixXi::Zero(n_classes, n_classes);
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= n_classes)
      raise(errc::unknown_class_name, "label " + std::to_string(labels[i]) + " out of range");
    report.confusion(labels[i], predictions[i]) += 1;
  }

  long correct = 0;
  double class_acc_sum = 0.0;
  int classes_seen = 0;
  report.per_class.resize(size_t(n_classes), -1.0);
  for (int c = 0; c < n_classes; ++c) {
    const long row_total = report.confusion.row(c).sum();
    correct += report.confusion(c, c);
    if (row_total > 0) {
      report.per_class[size_t(c)] = double(report.confusion(c, c)) / double(row_total);
      class_acc_sum += report.per_class[size_t(c)];
      ++classes_seen;
    }
  }
  report.overall = double(correct) / double(labels.size());
  report.average_per_class = classes_seen > 0 ? class_acc_sum / double(classes_seen) : 0.0;
  return report;
}

EvalReport evaluate(const std::function<int(const Eigen::VectorXd&)>& predict,
                    const Eigen::MatrixXd& features, const std::vector<int>& labels,
                    const std::vector<std::string>& class_names) {
  if (labels.empty()) raise(errc::empty_test_set, "no test samples");
  std::vector<int> predictions(labels.size());
  for (size_t i = 0; i < labels.size(); ++i)
    predictions[i] = predict(features.row(Eigen::Index(i)).transpose());
  return evaluate_predictions(predictions, labels, class_names);
}

std::string EvalReport::summary() const {
  char buf[160];
  const long total = confusion.sum();
  long correct = 0;
  for (int c = 0; c < confusion.rows(); ++c) correct += confusion(c, c);
  std::snprintf(buf, sizeof buf,
                "overall accuracy: %.2f%% (%ld/%ld)\naverage per-class accuracy: %.2f%%\n",
                100.0 * overall, correct, total, 100.0 * average_per_class);
  return buf;
}

std::string EvalReport::full_report() const {
  std::string out = summary();
  out += "per-class accuracy:\n";
  char buf[160];
  for (size_t c = 0; c < class_names.size(); ++c) {
    if (per_class[c] < 0.0) continue;
    const long row_total = confusion.row(int(c)).sum();
    std::snprintf(buf, sizeof buf, "  %-16s %6.2f%% (%d/%ld)\n", class_names[c].c_str(),
                  100.0 * per_class[c], confusion(int(c), int(c)), row_total);
    out += buf;
  }
  return out;
}

std::string EvalReport::confusion_tsv() const {
  std::string out = "true\\pred";
  for (const auto& name : class_names) out += "\t" + name;
  out += "\n";
  for (int r = 0; r < confusion.rows(); ++r) {
    out += class_names[size_t(r)];
    for (int c = 0; c < confusion.cols(); ++c) out += "\t" + std::to_string(confusion(r, c));
    out += "\n";
  }
  return out;
}

}  // namespace pointhop
