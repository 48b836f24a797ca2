#include "ega/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "ega/error.hpp"
#include "ega/json_util.hpp"

using nlohmann::json;

namespace ega {

Method method_from_string(const std::string& name) {
  if (name == "fvs") return Method::fvs;
  if (name == "tfvs") return Method::tfvs;
  if (name == "fvv") return Method::fvv;
  if (name == "fvv+fvs") return Method::fvv_plus_fvs;
  if (name == "fvv+tfvs") return Method::fvv_plus_tfvs;
  if (name == "mfv") return Method::mfv;
  if (name == "stat-baseline") return Method::stat_baseline;
  throw ValidationError("unknown method: " + name);
}

std::string to_string(Method method) {
  switch (method) {
    case Method::fvs: return "fvs";
    case Method::tfvs: return "tfvs";
    case Method::fvv: return "fvv";
    case Method::fvv_plus_fvs: return "fvv+fvs";
    case Method::fvv_plus_tfvs: return "fvv+tfvs";
    case Method::mfv: return "mfv";
    case Method::stat_baseline: return "stat-baseline";
  }
  throw ValidationError("invalid method enum");
}

bool method_needs_video(Method method) {
  return method == Method::fvv || method == Method::fvv_plus_fvs ||
         method == Method::fvv_plus_tfvs || method == Method::mfv;
}

bool method_needs_sensor(Method method) { return method != Method::fvv; }

json RunConfig::to_json() const {
  return {{"manifest", manifest_path},
          {"out_dir", out_dir},
          {"method", method},
          {"video",
           {{"gaussians", video_gaussians},
            {"pca_dim", video_pca_dim},
            {"subsample", video_subsample}}},
          {"sensor",
           {{"window", window},
            {"stages", stages},
            {"clusters", sensor_clusters},
            {"mode", window_mode},
            {"pca_dim", sensor_pca_dim},
            {"pca_bypass", sensor_pca_bypass}}},
          {"classifier", {{"cost", cost}, {"folds", folds}}},
          {"seed", seed},
          {"em", {{"max_iters", em_max_iters}, {"tol", em_tol}}}};
}

RunConfig RunConfig::from_json(const json& doc) {
  RunConfig c;
  c.manifest_path = doc.value("manifest", c.manifest_path);
  c.out_dir = doc.value("out_dir", c.out_dir);
  c.method = doc.value("method", c.method);
  if (doc.contains("video")) {
    const auto& v = doc["video"];
    c.video_gaussians = v.value("gaussians", c.video_gaussians);
    c.video_pca_dim = v.value("pca_dim", c.video_pca_dim);
    c.video_subsample = v.value("subsample", c.video_subsample);
  }
  if (doc.contains("sensor")) {
    const auto& s = doc["sensor"];
    c.window = s.value("window", c.window);
    c.stages = s.value("stages", c.stages);
    c.sensor_clusters = s.value("clusters", c.sensor_clusters);
    c.window_mode = s.value("mode", c.window_mode);
    c.sensor_pca_dim = s.value("pca_dim", c.sensor_pca_dim);
    c.sensor_pca_bypass = s.value("pca_bypass", c.sensor_pca_bypass);
  }
  if (doc.contains("classifier")) {
    const auto& cl = doc["classifier"];
    c.cost = cl.value("cost", c.cost);
    c.folds = cl.value("folds", c.folds);
  }
  c.seed = doc.value("seed", c.seed);
  if (doc.contains("em")) {
    c.em_max_iters = doc["em"].value("max_iters", c.em_max_iters);
    c.em_tol = doc["em"].value("tol", c.em_tol);
  }
  (void)method_from_string(c.method);
  (void)c.mode();
  return c;
}

std::string RunConfig::model_hash() const {
  json model = to_json();
  model.erase("manifest");
  model.erase("out_dir");
  model.erase("classifier");
  return fnv1a_hex(model.dump());
}

std::string RunConfig::config_hash() const { return fnv1a_hex(to_json().dump()); }

EmOptions RunConfig::em_options(double subsample) const {
  EmOptions opts;
  opts.max_iters = em_max_iters;
  opts.tol = em_tol;
  opts.subsample_fraction = subsample;
  return opts;
}

namespace {

json optional_pca(const std::optional<PcaModel>& m) {
  return m ? m->to_json() : json();
}
json optional_gmm(const std::optional<GmmCodebook>& m) {
  return m ? m->to_json() : json();
}

int half_dim(long raw) { return static_cast<int>((raw + 1) / 2); }

Matrix descriptor_matrix(const std::vector<const ClipRecord*>& clips) {
  long total = 0, dim = -1;
  for (const auto* clip : clips) {
    total += static_cast<long>(clip->trajectories.size());
    for (const auto& t : clip->trajectories) {
      if (dim < 0) dim = t.values.size();
      if (t.values.size() != dim) {
        throw ValidationError("inconsistent descriptor dimensionality across clips");
      }
    }
  }
  if (total == 0) throw ValidationError("no video descriptors in the training clips");
  Matrix out(total, dim);
  long r = 0;
  for (const auto* clip : clips) {
    for (const auto& t : clip->trajectories) out.row(r++) = t.values;
  }
  return out;
}

PcaModel fit_sensor_pca(const Matrix& windows, const RunConfig& config) {
  if (config.sensor_pca_bypass) return identity_pca(static_cast<int>(windows.cols()));
  int target = config.sensor_pca_dim > 0 ? config.sensor_pca_dim : half_dim(windows.cols());
  target = std::min<long>(target, std::min(windows.rows(), windows.cols()));
  return fit_pca(windows, target);
}

std::vector<ReducedSensorWindow> reduced_enhanced_windows(const SensorStream& stream,
                                                          const PcaModel& pca,
                                                          const RunConfig& config) {
  const auto windows = extract_windows(stream, config.window, config.mode());
  const auto enhanced = enhance(windows, stream.length(), config.window, config.stages);
  std::vector<ReducedSensorWindow> out;
  out.reserve(enhanced.size());
  for (const auto& e : enhanced) {
    ReducedSensorWindow r;
    r.start_index = e.base.start_index;
    r.values.resize(pca.output_dim() + 1);
    r.values.head(pca.output_dim()) = pca.project(e.base.values);
    r.values[pca.output_dim()] = e.order;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<PairedFeature> clip_pairs(const ClipRecord& clip, const FittedModels& models,
                                      const RunConfig& config) {
  std::vector<TrajectoryDescriptor> reduced;
  reduced.reserve(clip.trajectories.size());
  for (const auto& t : clip.trajectories) {
    reduced.push_back({t.start_frame, models.video_pca->project(t.values)});
  }
  return pair_features(reduced, reduced_enhanced_windows(clip.sensor, *models.tfvs_pca, config));
}

}  // namespace

json FittedModels::to_json() const {
  json doc;
  doc["video_pca"] = optional_pca(video_pca);
  doc["video_gmm"] = optional_gmm(video_gmm);
  doc["fvs_pca"] = optional_pca(fvs_pca);
  doc["fvs_gmm"] = optional_gmm(fvs_gmm);
  doc["tfvs_pca"] = optional_pca(tfvs_pca);
  doc["tfvs_gmm"] = optional_gmm(tfvs_gmm);
  doc["mfv_sensor"] = mfv_sensor ? mfv_sensor->to_json() : json();
  return doc;
}

FittedModels FittedModels::from_json(const json& doc) {
  FittedModels m;
  if (!doc.at("video_pca").is_null()) m.video_pca = PcaModel::from_json(doc["video_pca"]);
  if (!doc.at("video_gmm").is_null()) m.video_gmm = GmmCodebook::from_json(doc["video_gmm"]);
  if (!doc.at("fvs_pca").is_null()) m.fvs_pca = PcaModel::from_json(doc["fvs_pca"]);
  if (!doc.at("fvs_gmm").is_null()) m.fvs_gmm = GmmCodebook::from_json(doc["fvs_gmm"]);
  if (!doc.at("tfvs_pca").is_null()) m.tfvs_pca = PcaModel::from_json(doc["tfvs_pca"]);
  if (!doc.at("tfvs_gmm").is_null()) m.tfvs_gmm = GmmCodebook::from_json(doc["tfvs_gmm"]);
  if (!doc.at("mfv_sensor").is_null()) m.mfv_sensor = SensorCodebook::from_json(doc["mfv_sensor"]);
  return m;
}

FittedModels fit_models(const std::vector<const ClipRecord*>& train, Method method,
                        const RunConfig& config) {
  if (train.empty()) throw ValidationError("no training clips");
  FittedModels models;

  const bool want_fvs = method == Method::fvs || method == Method::fvv_plus_fvs;
  const bool want_tfvs =
      method == Method::tfvs || method == Method::fvv_plus_tfvs || method == Method::mfv;

  if (method_needs_video(method)) {
    const Matrix raw = descriptor_matrix(train);
    int target = config.video_pca_dim > 0 ? config.video_pca_dim : half_dim(raw.cols());
    target = std::min<long>(target, std::min(raw.rows(), raw.cols()));
    models.video_pca = fit_pca(raw, target);
    const Matrix reduced = models.video_pca->project(raw);
    models.video_gmm = fit_gmm(reduced, config.video_gaussians, config.seed,
                               config.em_options(config.video_subsample));
  }

  if (want_fvs) {
    std::vector<Matrix> per_clip;
    long total = 0;
    for (const auto* clip : train) {
      per_clip.push_back(window_matrix(extract_windows(clip->sensor, config.window, config.mode())));
      total += per_clip.back().rows();
    }
    Matrix all(total, per_clip.front().cols());
    long r = 0;
    for (const auto& m : per_clip) {
      all.middleRows(r, m.rows()) = m;
      r += m.rows();
    }
    models.fvs_pca = fit_sensor_pca(all, config);
    models.fvs_gmm = fit_gmm(models.fvs_pca->project(all), config.sensor_clusters, config.seed,
                             config.em_options());
  }

  if (want_tfvs) {
    std::vector<Matrix> per_clip;
    long total = 0;
    for (const auto* clip : train) {
      per_clip.push_back(window_matrix(extract_windows(clip->sensor, config.window, config.mode())));
      total += per_clip.back().rows();
    }
    Matrix all(total, per_clip.front().cols());
    long r = 0;
    for (const auto& m : per_clip) {
      all.middleRows(r, m.rows()) = m;
      r += m.rows();
    }
    models.tfvs_pca = fit_sensor_pca(all, config);
    // Enhanced feature matrix over all training clips.
    long row = 0;
    Matrix enhanced(total, models.tfvs_pca->output_dim() + 1);
    for (const auto* clip : train) {
      for (const auto& w : reduced_enhanced_windows(clip->sensor, *models.tfvs_pca, config)) {
        enhanced.row(row++) = w.values;
      }
    }
    if (method != Method::mfv) {
      models.tfvs_gmm = fit_gmm(enhanced, config.sensor_clusters, config.seed,
                                config.em_options());
    }
  }

  if (method == Method::mfv) {
    std::vector<std::vector<PairedFeature>> pairs;
    for (const auto* clip : train) {
      if (clip->trajectories.empty()) continue;
      pairs.push_back(clip_pairs(*clip, models, config));
    }
    models.mfv_sensor = build_sensor_codebook(*models.video_gmm, pairs);
  }
  return models;
}

Vector encode_clip(const ClipRecord& clip, const FittedModels& models, Method method,
                   const RunConfig& config) {
  switch (method) {
    case Method::fvs:
      return encode_fvs(clip.sensor, *models.fvs_pca, *models.fvs_gmm, config.window,
                        config.mode())
          .values;
    case Method::tfvs:
      return encode_tfvs(clip.sensor, *models.tfvs_pca, *models.tfvs_gmm, config.window,
                         config.stages, config.mode())
          .values;
    case Method::fvv: {
      Matrix raw(static_cast<long>(clip.trajectories.size()),
                 models.video_pca->input_dim());
      for (size_t i = 0; i < clip.trajectories.size(); ++i) {
        raw.row(static_cast<long>(i)) = clip.trajectories[i].values;
      }
      return normalize_fv(encode_fv(*models.video_gmm, models.video_pca->project(raw))).values;
    }
    case Method::fvv_plus_fvs: {
      FisherVector video{encode_clip(clip, models, Method::fvv, config), 0, 0, true};
      FisherVector sensor{encode_clip(clip, models, Method::fvs, config), 0, 0, true};
      return concat_fv(video, sensor).values;
    }
    case Method::fvv_plus_tfvs: {
      FisherVector video{encode_clip(clip, models, Method::fvv, config), 0, 0, true};
      FisherVector sensor{encode_clip(clip, models, Method::tfvs, config), 0, 0, true};
      return concat_fv(video, sensor).values;
    }
    case Method::mfv:
      return encode_mfv(*models.video_gmm, *models.mfv_sensor, clip_pairs(clip, models, config))
          .values;
    case Method::stat_baseline:
      return stat_features(clip.sensor);
  }
  throw ValidationError("invalid method enum");
}

EvalReport run_method(const Dataset& dataset, const RunConfig& config) {
  const Method method = method_from_string(config.method);

  std::vector<const ClipRecord*> clips;
  std::vector<std::string> excluded;
  for (const auto& clip : dataset.clips) {
    if (method_needs_video(method) && clip.trajectories.empty()) {
      excluded.push_back(clip.clip_id);
      continue;
    }
    clips.push_back(&clip);
  }
  if (clips.empty()) throw ValidationError("no clips eligible for method " + config.method);

  std::vector<int> labels;
  for (const auto* clip : clips) labels.push_back(clip->label);
  const auto fold_of = stratified_folds(labels, config.folds, config.seed);

  std::set<int> class_set(labels.begin(), labels.end());
  std::vector<int> classes(class_set.begin(), class_set.end());

  std::vector<int> truth, predicted;
  for (int fold = 0; fold < config.folds; ++fold) {
    std::vector<const ClipRecord*> train;
    std::vector<size_t> test;
    for (size_t i = 0; i < clips.size(); ++i) {
      if (fold_of[i] == fold) test.push_back(i);
      else train.push_back(clips[i]);
    }
    const FittedModels models = fit_models(train, method, config);

    std::vector<Vector> encoded;
    std::vector<int> train_labels;
    for (const auto* clip : train) {
      encoded.push_back(encode_clip(*clip, models, method, config));
      train_labels.push_back(clip->label);
    }
    Matrix train_x(static_cast<long>(encoded.size()), encoded.front().size());
    for (size_t i = 0; i < encoded.size(); ++i) train_x.row(static_cast<long>(i)) = encoded[i];

    const LinearOvrModel classifier = train_ovr(train_x, train_labels, config.cost, config.seed);
    for (size_t idx : test) {
      truth.push_back(clips[idx]->label);
      predicted.push_back(
          predict(classifier, encode_clip(*clips[idx], models, method, config)).first);
    }
  }

  EvalReport report = make_report(truth, predicted, classes);
  report.split_descriptor = {{"folds", config.folds},
                             {"seed", config.seed},
                             {"cost", config.cost},
                             {"method", config.method},
                             {"config_hash", config.config_hash()},
                             {"mode", "leakage-free-refit"},
                             {"excluded_clips", excluded}};
  return report;
}

json sweep_grid(const Dataset& dataset, const RunConfig& config, const std::vector<int>& windows,
                const std::vector<int>& clusters) {
  json grid;
  grid["windows"] = windows;
  grid["clusters"] = clusters;
  grid["stages"] = config.stages;
  grid["config_hash"] = config.config_hash();
  grid["cells"] = json::array();
  for (int w : windows) {
    for (int k : clusters) {
      RunConfig cell = config;
      cell.window = w;
      cell.sensor_clusters = k;
      // Displacement windows need w >= 2; a w=1 sweep cell runs on raw
      // windows, mirroring how a single-sample "trajectory" must be read.
      if (w < 2 && cell.mode() == WindowMode::displacement) cell.window_mode = "raw";
      json entry = {{"window", w}, {"clusters", k}, {"window_mode", cell.window_mode}};
      cell.method = "fvs";
      entry["fvs_accuracy"] = run_method(dataset, cell).overall_accuracy;
      cell.method = "tfvs";
      entry["tfvs_accuracy"] = run_method(dataset, cell).overall_accuracy;
      grid["cells"].push_back(std::move(entry));
    }
  }
  return grid;
}

json CodebookArtifact::to_json() const {
  return {{"artifact_version", 1},
          {"method", method},
          {"model_hash", model_hash},
          {"models", models.to_json()}};
}

CodebookArtifact CodebookArtifact::from_json(const json& doc) {
  if (doc.value("artifact_version", 0) != 1) {
    throw ValidationError("unsupported codebook artifact version");
  }
  CodebookArtifact a;
  a.method = doc.at("method").get<std::string>();
  a.model_hash = doc.at("model_hash").get<std::string>();
  a.models = FittedModels::from_json(doc.at("models"));
  return a;
}

CodebookArtifact fit_codebooks(const Dataset& dataset, const RunConfig& config) {
  const Method method = method_from_string(config.method);
  std::vector<const ClipRecord*> clips;
  for (const auto& clip : dataset.clips) {
    if (method_needs_video(method) && clip.trajectories.empty()) continue;
    clips.push_back(&clip);
  }
  CodebookArtifact artifact;
  artifact.method = config.method;
  artifact.model_hash = config.model_hash();
  artifact.models = fit_models(clips, method, config);
  return artifact;
}

void save_codebooks(const std::string& path, const CodebookArtifact& artifact) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write codebook artifact: " + path);
  out << artifact.to_json().dump(2) << "\n";
}

CodebookArtifact load_codebooks(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open codebook artifact: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ValidationError("codebook artifact: invalid JSON: " + std::string(e.what()));
  }
  return CodebookArtifact::from_json(doc);
}

EncodedMatrix encode_dataset(const Dataset& dataset, const CodebookArtifact& artifact,
                             const RunConfig& config) {
  if (artifact.model_hash != config.model_hash()) {
    throw ValidationError("codebook artifact hash " + artifact.model_hash +
                          " does not match config hash " + config.model_hash());
  }
  if (artifact.method != config.method) {
    throw ValidationError("codebook artifact was fit for method " + artifact.method);
  }
  const Method method = method_from_string(config.method);

  EncodedMatrix out;
  std::vector<Vector> rows;
  for (const auto& clip : dataset.clips) {
    if (method_needs_video(method) && clip.trajectories.empty()) continue;
    rows.push_back(encode_clip(clip, artifact.models, method, config));
    out.clip_ids.push_back(clip.clip_id);
    out.labels.push_back(clip.label);
  }
  if (rows.empty()) throw ValidationError("no clips eligible for encoding");
  out.features.resize(static_cast<long>(rows.size()), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i) out.features.row(static_cast<long>(i)) = rows[i];
  return out;
}

void write_encoded_csv(const std::string& path, const EncodedMatrix& matrix) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("cannot write encoded matrix: " + path);
  std::fprintf(f, "clip_id,label");
  for (long c = 0; c < matrix.features.cols(); ++c) std::fprintf(f, ",v%ld", c);
  std::fprintf(f, "\n");
  for (size_t r = 0; r < matrix.clip_ids.size(); ++r) {
    std::fprintf(f, "%s,%d", matrix.clip_ids[r].c_str(), matrix.labels[r]);
    for (long c = 0; c < matrix.features.cols(); ++c) {
      std::fprintf(f, ",%.17g", matrix.features(static_cast<long>(r), c));
    }
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

}  // namespace ega
