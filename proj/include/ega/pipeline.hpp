#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ega/eval.hpp"
#include "ega/gmm.hpp"
#include "ega/manifest.hpp"
#include "ega/mfv.hpp"
#include "ega/pca.hpp"
#include "ega/sensor_features.hpp"

namespace ega {

enum class Method {
  fvs,
  tfvs,
  fvv,
  fvv_plus_fvs,
  fvv_plus_tfvs,
  mfv,
  stat_baseline,
};

Method method_from_string(const std::string& name);
std::string to_string(Method method);
bool method_needs_video(Method method);
bool method_needs_sensor(Method method);

struct RunConfig {
  std::string manifest_path;
  std::string out_dir = "out";
  std::string method = "mfv";

  // Video side defaults: K=25, PCA to half,
  // GMM estimated on a 1% subsample.
  int video_gaussians = 25;
  int video_pca_dim = 0;  // 0 -> ceil(raw/2)
  double video_subsample = 0.01;

  // Sensor side: w=3 windows, 4 temporal segments, k=4 clusters.
  int window = 3;
  int stages = 4;
  int sensor_clusters = 4;
  std::string window_mode = "displacement";
  int sensor_pca_dim = 0;  // 0 -> ceil(raw/2)
  bool sensor_pca_bypass = false;

  double cost = 10.0;
  int folds = 10;
  uint64_t seed = 0;

  int em_max_iters = 200;
  double em_tol = 1e-6;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& doc);
  // Hash over the model-relevant fields; ties encoded outputs to the
  // codebook artifact that produced them.
  std::string model_hash() const;
  // Hash over the full config, embedded in every report.
  std::string config_hash() const;

  WindowMode mode() const { return window_mode_from_string(window_mode); }
  EmOptions em_options(double subsample = 1.0) const;
};

// Frozen per-fold (or whole-dataset) models for one method.
struct FittedModels {
  std::optional<PcaModel> video_pca;
  std::optional<GmmCodebook> video_gmm;
  std::optional<PcaModel> fvs_pca;
  std::optional<GmmCodebook> fvs_gmm;
  std::optional<PcaModel> tfvs_pca;
  std::optional<GmmCodebook> tfvs_gmm;
  std::optional<SensorCodebook> mfv_sensor;

  nlohmann::json to_json() const;
  static FittedModels from_json(const nlohmann::json& doc);
};

FittedModels fit_models(const std::vector<const ClipRecord*>& train, Method method,
                        const RunConfig& config);

Vector encode_clip(const ClipRecord& clip, const FittedModels& models, Method method,
                   const RunConfig& config);

// Leakage-free stratified CV: codebooks and PCA are refit on the training
// folds only. Clips lacking trajectories are excluded from video-dependent
// methods and listed in the split descriptor.
EvalReport run_method(const Dataset& dataset, const RunConfig& config);

// FVS/TFVS accuracy over a (window x clusters) grid.
nlohmann::json sweep_grid(const Dataset& dataset, const RunConfig& config,
                          const std::vector<int>& windows, const std::vector<int>& clusters);

// Codebook artifact: models fit on the whole dataset, tied to the config's
// model hash.
struct CodebookArtifact {
  std::string method;
  std::string model_hash;
  FittedModels models;

  nlohmann::json to_json() const;
  static CodebookArtifact from_json(const nlohmann::json& doc);
};

CodebookArtifact fit_codebooks(const Dataset& dataset, const RunConfig& config);
void save_codebooks(const std::string& path, const CodebookArtifact& artifact);
CodebookArtifact load_codebooks(const std::string& path);

// Encodes every (eligible) clip with a frozen artifact; refuses to run when
// the artifact's model hash does not match the config.
struct EncodedMatrix {
  std::vector<std::string> clip_ids;
  std::vector<int> labels;
  Matrix features;
};
EncodedMatrix encode_dataset(const Dataset& dataset, const CodebookArtifact& artifact,
                             const RunConfig& config);
void write_encoded_csv(const std::string& path, const EncodedMatrix& matrix);

}  // namespace ega
