#include "ega/ega_c.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include <json.hpp>

#include "ega/error.hpp"
#include "ega/pipeline.hpp"
#include "ega/synthetic.hpp"

using nlohmann::json;

struct ega_dataset {
  ega::Dataset data;
};

struct ega_codebook {
  ega::CodebookArtifact artifact;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
ega_status guarded(Fn&& fn) {
  try {
    fn();
    return EGA_OK;
  } catch (const ega::ValidationError& e) {
    g_last_error = e.what();
    return EGA_ERR_VALIDATION;
  } catch (const ega::IoError& e) {
    g_last_error = e.what();
    return EGA_ERR_IO;
  } catch (const ega::NumericError& e) {
    g_last_error = e.what();
    return EGA_ERR_NUMERIC;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EGA_ERR_NUMERIC;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ega::SyntheticSpec spec_from_preset(const std::string& preset, const json& overrides) {
  ega::SyntheticSpec spec;
  const int num_classes = overrides.value("num_classes", preset == "chance" ? 20 : 2);
  if (preset == "order-distinct") spec = ega::order_distinct_spec();
  else if (preset == "fusion") spec = ega::joint_fusion_spec();
  else if (preset == "separable")
    spec = ega::separable_spec(num_classes, overrides.value("separation", 4.0));
  else if (preset == "chance") spec = ega::chance_spec(num_classes);
  else throw ega::ValidationError("unknown synthetic preset: " + preset);

  spec.clips_per_class = overrides.value("clips_per_class", spec.clips_per_class);
  spec.length = overrides.value("length", spec.length);
  spec.channels = overrides.value("channels", spec.channels);
  spec.video_dim = overrides.value("video_dim", spec.video_dim);
  spec.descriptors_per_clip = overrides.value("descriptors_per_clip", spec.descriptors_per_clip);
  spec.sensor_noise_std = overrides.value("sensor_noise_std", spec.sensor_noise_std);
  spec.blob_noise_std = overrides.value("blob_noise_std", spec.blob_noise_std);
  spec.blob_separation = overrides.value("blob_separation", spec.blob_separation);
  return spec;
}

ega::RunConfig parse_config(const char* config_json) {
  if (!config_json || !*config_json) return ega::RunConfig{};
  json doc;
  try {
    doc = json::parse(config_json);
  } catch (const json::exception& e) {
    throw ega::ValidationError("invalid config JSON: " + std::string(e.what()));
  }
  return ega::RunConfig::from_json(doc);
}

}  // namespace

extern "C" {

const char* ega_last_error(void) { return g_last_error.c_str(); }

void ega_string_free(char* s) { std::free(s); }

ega_status ega_default_config(char** config_json_out) {
  return guarded([&] { *config_json_out = dup_string(ega::RunConfig{}.to_json().dump(2)); });
}

ega_status ega_dataset_open(const char* manifest_path, ega_dataset** out) {
  return guarded([&] {
    auto handle = std::make_unique<ega_dataset>();
    handle->data = ega::load_dataset(manifest_path);
    *out = handle.release();
  });
}

ega_status ega_dataset_synth(const char* preset, const char* spec_json, const char* out_dir,
                             ega_dataset** out) {
  return guarded([&] {
    json overrides = json::object();
    if (spec_json && *spec_json) {
      try {
        overrides = json::parse(spec_json);
      } catch (const json::exception& e) {
        throw ega::ValidationError("invalid synthetic spec JSON: " + std::string(e.what()));
      }
    }
    const auto spec = spec_from_preset(preset ? preset : "separable", overrides);
    const uint64_t seed = overrides.value("seed", 0ull);
    auto clips = ega::generate_synthetic(spec, seed);

    std::string note = "synthetic preset=" + std::string(preset) +
                       " seed=" + std::to_string(seed);
    if (spec.order_only_distinct) note += " order_only_distinct=true";
    ega::save_dataset(out_dir, clips, ega::synthetic_categories(spec), note);

    auto handle = std::make_unique<ega_dataset>();
    handle->data =
        ega::load_dataset((std::filesystem::path(out_dir) / "manifest.json").string());
    *out = handle.release();
  });
}

int ega_dataset_clip_count(const ega_dataset* dataset) {
  return dataset ? static_cast<int>(dataset->data.clips.size()) : 0;
}

void ega_dataset_close(ega_dataset* dataset) { delete dataset; }

ega_status ega_codebook_fit(const ega_dataset* dataset, const char* config_json,
                            ega_codebook** out) {
  return guarded([&] {
    auto handle = std::make_unique<ega_codebook>();
    handle->artifact = ega::fit_codebooks(dataset->data, parse_config(config_json));
    *out = handle.release();
  });
}

ega_status ega_codebook_save(const ega_codebook* codebook, const char* path) {
  return guarded([&] { ega::save_codebooks(path, codebook->artifact); });
}

ega_status ega_codebook_open(const char* path, ega_codebook** out) {
  return guarded([&] {
    auto handle = std::make_unique<ega_codebook>();
    handle->artifact = ega::load_codebooks(path);
    *out = handle.release();
  });
}

void ega_codebook_close(ega_codebook* codebook) { delete codebook; }

ega_status ega_encode_dataset(const ega_dataset* dataset, const ega_codebook* codebook,
                              const char* config_json, const char* out_csv_path) {
  return guarded([&] {
    const auto config = parse_config(config_json);
    const auto matrix = ega::encode_dataset(dataset->data, codebook->artifact, config);
    ega::write_encoded_csv(out_csv_path, matrix);
    json meta = {{"codebook_hash", codebook->artifact.model_hash},
                 {"config_hash", config.config_hash()},
                 {"method", config.method},
                 {"rows", matrix.clip_ids.size()},
                 {"columns", matrix.features.cols()}};
    std::ofstream meta_out(std::string(out_csv_path) + ".meta.json");
    if (!meta_out) throw ega::IoError("cannot write encode metadata");
    meta_out << meta.dump(2) << "\n";
  });
}

ega_status ega_run_eval(const ega_dataset* dataset, const char* config_json, char** report_json) {
  return guarded([&] {
    const auto config = parse_config(config_json);
    const auto report = ega::run_method(dataset->data, config);
    json doc = report.to_json();
    doc["method"] = config.method;
    doc["text_table"] = report.to_text_table(config.method);
    doc["confusion_csv"] = report.confusion_csv();
    *report_json = dup_string(doc.dump(2));
  });
}

ega_status ega_sweep(const ega_dataset* dataset, const char* config_json, const int* windows,
                     int num_windows, const int* clusters, int num_clusters, char** grid_json) {
  return guarded([&] {
    if (num_windows < 1 || num_clusters < 1) {
      throw ega::ValidationError("sweep needs at least one window and one cluster value");
    }
    const auto config = parse_config(config_json);
    std::vector<int> ws(windows, windows + num_windows);
    std::vector<int> ks(clusters, clusters + num_clusters);
    *grid_json = dup_string(ega::sweep_grid(dataset->data, config, ws, ks).dump(2));
  });
}

}  // extern "C"
