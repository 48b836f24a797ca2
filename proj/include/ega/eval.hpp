#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ega/linear_svm.hpp"
#include "ega/types.hpp"

namespace ega {

struct EvalReport {
  double overall_accuracy = 0.0;
  std::vector<double> per_class_accuracy;  // indexed by class order
  std::vector<int> classes;                // category ids, ascending
  std::vector<std::vector<long>> confusion;  // rows true, columns predicted
  nlohmann::json split_descriptor;

  nlohmann::json to_json() const;
  static EvalReport from_json(const nlohmann::json& doc);
  // Table mirroring the report format: method name -> accuracy percentage.
  std::string to_text_table(const std::string& method_name) const;
  std::string confusion_csv() const;
};

// Stratified fold assignment: returns fold index per sample. Every class must
// have at least `folds` members.
std::vector<int> stratified_folds(const std::vector<int>& labels, int folds, uint64_t seed);

// Per channel: mean, standard deviation, mean absolute deviation, mean time
// between peaks (peak = local maximum above mean + 0.5*std; fewer than two
// peaks -> sentinel L). Output length 4*C.
Vector stat_features(const SensorStream& stream);

// Cross-validation over pre-encoded feature vectors (fast mode: codebooks are
// not refit per fold; the split descriptor records this).
EvalReport cross_validate_encoded(const Matrix& features, const std::vector<int>& labels,
                                  int folds, uint64_t seed, double cost);

// Assembles a report from per-sample truth/prediction pairs.
EvalReport make_report(const std::vector<int>& truth, const std::vector<int>& predicted,
                       const std::vector<int>& classes);

}  // namespace ega
