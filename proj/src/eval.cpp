#include "ega/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "ega/error.hpp"

using nlohmann::json;

namespace ega {

json EvalReport::to_json() const {
  json doc;
  doc["overall_accuracy"] = overall_accuracy;
  doc["per_class_accuracy"] = per_class_accuracy;
  doc["classes"] = classes;
  doc["confusion"] = confusion;
  doc["split_descriptor"] = split_descriptor;
  return doc;
}

EvalReport EvalReport::from_json(const json& doc) {
  EvalReport r;
  r.overall_accuracy = doc.at("overall_accuracy").get<double>();
  r.per_class_accuracy = doc.at("per_class_accuracy").get<std::vector<double>>();
  r.classes = doc.at("classes").get<std::vector<int>>();
  r.confusion = doc.at("confusion").get<std::vector<std::vector<long>>>();
  r.split_descriptor = doc.value("split_descriptor", json::object());
  return r;
}

std::string EvalReport::to_text_table(const std::string& method_name) const {
  std::ostringstream out;
  out << "Method     | Accuracy\n";
  out << "-----------+---------\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%-10s | %.2f%%\n", method_name.c_str(),
                100.0 * overall_accuracy);
  out << buf;
  return out.str();
}

std::string EvalReport::confusion_csv() const {
  std::ostringstream out;
  out << "true_label";
  for (int c : classes) out << ",pred_" << c;
  out << "\n";
  for (size_t r = 0; r < confusion.size(); ++r) {
    out << classes[r];
    for (long v : confusion[r]) out << "," << v;
    out << "\n";
  }
  return out.str();
}

std::vector<int> stratified_folds(const std::vector<int>& labels, int folds, uint64_t seed) {
  if (folds < 2) throw ValidationError("fold count must be >= 2");
  std::map<int, std::vector<size_t>> by_class;
  for (size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  std::mt19937_64 rng(seed);
  std::vector<int> fold_of(labels.size(), -1);
  for (auto& [label, indices] : by_class) {
    if (static_cast<int>(indices.size()) < folds) {
      throw ValidationError("class " + std::to_string(label) + " has fewer clips (" +
                            std::to_string(indices.size()) + ") than folds");
    }
    std::shuffle(indices.begin(), indices.end(), rng);
    for (size_t i = 0; i < indices.size(); ++i) {
      fold_of[indices[i]] = static_cast<int>(i % folds);
    }
  }
  return fold_of;
}

Vector stat_features(const SensorStream& stream) {
  const long length = stream.length();
  if (length < 2) throw ValidationError("stat features need at least two samples");
  const long channels = stream.channels();
  Vector out(4 * channels);
  for (long c = 0; c < channels; ++c) {
    const auto col = stream.samples.col(c);
    const double mean = col.mean();
    const double stddev = std::sqrt((col.array() - mean).square().mean());
    const double mad = (col.array() - mean).abs().mean();

    const double threshold = mean + 0.5 * stddev;
    std::vector<long> peaks;
    for (long t = 1; t + 1 < length; ++t) {
      if (col[t] > threshold && col[t] > col[t - 1] && col[t] > col[t + 1]) peaks.push_back(t);
    }
    double peak_gap = static_cast<double>(length);  // sentinel
    if (peaks.size() >= 2) {
      double acc = 0.0;
      for (size_t i = 1; i < peaks.size(); ++i) acc += static_cast<double>(peaks[i] - peaks[i - 1]);
      peak_gap = acc / static_cast<double>(peaks.size() - 1);
    }
    out[4 * c + 0] = mean;
    out[4 * c + 1] = stddev;
    out[4 * c + 2] = mad;
    out[4 * c + 3] = peak_gap;
  }
  return out;
}

EvalReport make_report(const std::vector<int>& truth, const std::vector<int>& predicted,
                       const std::vector<int>& classes) {
  EvalReport report;
  report.classes = classes;
  std::map<int, size_t> index_of;
  for (size_t i = 0; i < classes.size(); ++i) index_of[classes[i]] = i;

  report.confusion.assign(classes.size(), std::vector<long>(classes.size(), 0));
  for (size_t i = 0; i < truth.size(); ++i) {
    report.confusion[index_of.at(truth[i])][index_of.at(predicted[i])] += 1;
  }
  long correct = 0;
  report.per_class_accuracy.resize(classes.size(), 0.0);
  for (size_t r = 0; r < classes.size(); ++r) {
    long row_total = 0;
    for (long v : report.confusion[r]) row_total += v;
    correct += report.confusion[r][r];
    report.per_class_accuracy[r] =
        row_total > 0 ? static_cast<double>(report.confusion[r][r]) / row_total : 0.0;
  }
  report.overall_accuracy =
      truth.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(truth.size());
  return report;
}

EvalReport cross_validate_encoded(const Matrix& features, const std::vector<int>& labels,
                                  int folds, uint64_t seed, double cost) {
  if (features.rows() != static_cast<long>(labels.size())) {
    throw ValidationError("feature/label count mismatch");
  }
  const auto fold_of = stratified_folds(labels, folds, seed);
  std::set<int> class_set(labels.begin(), labels.end());
  std::vector<int> classes(class_set.begin(), class_set.end());

  std::vector<int> truth, predicted;
  for (int fold = 0; fold < folds; ++fold) {
    std::vector<long> train_idx, test_idx;
    for (size_t i = 0; i < labels.size(); ++i) {
      (fold_of[i] == fold ? test_idx : train_idx).push_back(static_cast<long>(i));
    }
    Matrix train_x(static_cast<long>(train_idx.size()), features.cols());
    std::vector<int> train_y(train_idx.size());
    for (size_t i = 0; i < train_idx.size(); ++i) {
      train_x.row(static_cast<long>(i)) = features.row(train_idx[i]);
      train_y[i] = labels[static_cast<size_t>(train_idx[i])];
    }
    const LinearOvrModel model = train_ovr(train_x, train_y, cost, seed);
    for (long idx : test_idx) {
      truth.push_back(labels[static_cast<size_t>(idx)]);
      predicted.push_back(predict(model, features.row(idx)).first);
    }
  }
  EvalReport report = make_report(truth, predicted, classes);
  report.split_descriptor = {{"folds", folds},
                             {"seed", seed},
                             {"cost", cost},
                             {"mode", "fast-preencoded"}};
  return report;
}

}  // namespace ega
