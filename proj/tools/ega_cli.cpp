// Command-line front end. Talks to the pipeline exclusively through the
// C API in ega/ega_c.h; JSON handling here is only for assembling configs
// and writing report files.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ega/ega_c.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int fail(ega_status status) {
  std::fprintf(stderr, "error: %s\n", ega_last_error());
  return static_cast<int>(status);
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  ega_string_free(s);
  return out;
}

// Guards an output directory against concurrent invocations.
class DirLock {
 public:
  explicit DirLock(const std::string& dir) {
    fs::create_directories(dir);
    path_ = (fs::path(dir) / ".ega.lock").string();
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (!f) {
      throw std::runtime_error("output dir is locked by another run (remove " + path_ +
                               " if stale)");
    }
    std::fclose(f);
  }
  ~DirLock() { std::remove(path_.c_str()); }

 private:
  std::string path_;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

// "2..6" or "2,3,4" or "3" -> list of ints.
std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  size_t pos = 0;
  while (pos < text.size()) {
    const auto comma = text.find(',', pos);
    out.push_back(std::stoi(text.substr(pos, comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

struct ConfigFlags {
  std::string config_file;
  std::string manifest;
  std::string method;
  std::string window_mode;
  std::string out_dir = "out";
  int window = 0, stages = 0, clusters = 0, gaussians = 0, folds = 0;
  double cost = -1.0;
  long seed = -1;

  void add_to(CLI::App* cmd, bool grid_axes_elsewhere = false) {
    cmd->add_option("--config", config_file, "JSON config file (flags override it)");
    cmd->add_option("--manifest", manifest, "dataset manifest.json");
    cmd->add_option("--method", method,
                    "fvs|tfvs|fvv|fvv+fvs|fvv+tfvs|mfv|stat-baseline");
    if (!grid_axes_elsewhere) {
      cmd->add_option("--window", window, "sensor window length w");
      cmd->add_option("--clusters", clusters, "sensor GMM cluster count k");
    }
    cmd->add_option("--stages", stages, "temporal segment count S");
    cmd->add_option("--gaussians", gaussians, "video GMM component count K");
    cmd->add_option("--window-mode", window_mode, "displacement|raw");
    cmd->add_option("--cost", cost, "SVM cost C");
    cmd->add_option("--folds", folds, "cross-validation folds");
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_option("--out", out_dir, "output directory");
  }

  json build() const {
    char* raw = nullptr;
    if (ega_default_config(&raw) != EGA_OK) throw std::runtime_error(ega_last_error());
    json config = json::parse(take_string(raw));
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw std::runtime_error("cannot open config file: " + config_file);
      json file_config;
      in >> file_config;
      config.merge_patch(file_config);
    }
    if (!manifest.empty()) config["manifest"] = manifest;
    if (!method.empty()) config["method"] = method;
    if (!window_mode.empty()) config["sensor"]["mode"] = window_mode;
    if (window > 0) config["sensor"]["window"] = window;
    if (stages > 0) config["sensor"]["stages"] = stages;
    if (clusters > 0) config["sensor"]["clusters"] = clusters;
    if (gaussians > 0) config["video"]["gaussians"] = gaussians;
    if (folds > 0) config["classifier"]["folds"] = folds;
    if (cost >= 0) config["classifier"]["cost"] = cost;
    if (seed >= 0) config["seed"] = seed;
    config["out_dir"] = out_dir;
    return config;
  }
};

struct DatasetHandle {
  ega_dataset* ptr = nullptr;
  ~DatasetHandle() { ega_dataset_close(ptr); }
};

struct CodebookHandle {
  ega_codebook* ptr = nullptr;
  ~CodebookHandle() { ega_codebook_close(ptr); }
};

int open_dataset(const json& config, DatasetHandle& dataset) {
  const std::string manifest = config.value("manifest", "");
  if (manifest.empty()) {
    std::fprintf(stderr, "error: --manifest (or config manifest field) is required\n");
    return 1;
  }
  if (auto status = ega_dataset_open(manifest.c_str(), &dataset.ptr); status != EGA_OK) {
    return fail(status);
  }
  return 0;
}

int cmd_synth(const std::string& preset, const std::string& spec_file, const std::string& out_dir,
              long seed, int classes, int clips) {
  json spec = json::object();
  if (!spec_file.empty()) {
    std::ifstream in(spec_file);
    if (!in) {
      std::fprintf(stderr, "error: cannot open spec file %s\n", spec_file.c_str());
      return 2;
    }
    in >> spec;
  }
  if (seed >= 0) spec["seed"] = seed;
  if (classes > 0) spec["num_classes"] = classes;
  if (clips > 0) spec["clips_per_class"] = clips;

  DirLock lock(out_dir);
  DatasetHandle dataset;
  if (auto status = ega_dataset_synth(preset.c_str(), spec.dump().c_str(), out_dir.c_str(),
                                      &dataset.ptr);
      status != EGA_OK) {
    return fail(status);
  }
  std::printf("wrote %d clips to %s (preset %s)\n", ega_dataset_clip_count(dataset.ptr),
              out_dir.c_str(), preset.c_str());
  return 0;
}

int cmd_fit(const ConfigFlags& flags) {
  const json config = flags.build();
  DatasetHandle dataset;
  if (int rc = open_dataset(config, dataset); rc != 0) return rc;

  DirLock lock(flags.out_dir);
  CodebookHandle codebook;
  const std::string config_str = config.dump();
  if (auto status = ega_codebook_fit(dataset.ptr, config_str.c_str(), &codebook.ptr);
      status != EGA_OK) {
    return fail(status);
  }
  const std::string path = (fs::path(flags.out_dir) / "codebook.json").string();
  if (auto status = ega_codebook_save(codebook.ptr, path.c_str()); status != EGA_OK) {
    return fail(status);
  }
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_encode(const ConfigFlags& flags, const std::string& codebook_path) {
  const json config = flags.build();
  DatasetHandle dataset;
  if (int rc = open_dataset(config, dataset); rc != 0) return rc;

  DirLock lock(flags.out_dir);
  CodebookHandle codebook;
  if (auto status = ega_codebook_open(codebook_path.c_str(), &codebook.ptr); status != EGA_OK) {
    return fail(status);
  }
  const std::string out_csv = (fs::path(flags.out_dir) / "encoded.csv").string();
  const std::string config_str = config.dump();
  if (auto status =
          ega_encode_dataset(dataset.ptr, codebook.ptr, config_str.c_str(), out_csv.c_str());
      status != EGA_OK) {
    return fail(status);
  }
  std::printf("wrote %s\n", out_csv.c_str());
  return 0;
}

int cmd_run(const ConfigFlags& flags) {
  const json config = flags.build();
  DatasetHandle dataset;
  if (int rc = open_dataset(config, dataset); rc != 0) return rc;

  DirLock lock(flags.out_dir);
  char* raw = nullptr;
  const std::string config_str = config.dump();
  if (auto status = ega_run_eval(dataset.ptr, config_str.c_str(), &raw); status != EGA_OK) {
    return fail(status);
  }
  json report = json::parse(take_string(raw));
  for (const auto& clip : report["split_descriptor"].value("excluded_clips", json::array())) {
    std::fprintf(stderr, "warning: clip %s lacks trajectories, excluded\n",
                 clip.get<std::string>().c_str());
  }
  const std::string table = report["text_table"].get<std::string>();
  const std::string confusion = report["confusion_csv"].get<std::string>();
  report.erase("text_table");
  report.erase("confusion_csv");
  report["config"] = config;

  const fs::path out(flags.out_dir);
  write_file((out / "report.json").string(), report.dump(2) + "\n");
  write_file((out / "report.txt").string(), table);
  write_file((out / "confusion.csv").string(), confusion);
  std::printf("%s", table.c_str());
  return 0;
}

int cmd_sweep(const ConfigFlags& flags, const std::string& windows_arg,
              const std::string& clusters_arg) {
  const json config = flags.build();
  DatasetHandle dataset;
  if (int rc = open_dataset(config, dataset); rc != 0) return rc;

  const auto windows = parse_int_list(windows_arg);
  const auto clusters = parse_int_list(clusters_arg);

  DirLock lock(flags.out_dir);
  char* raw = nullptr;
  const std::string config_str = config.dump();
  if (auto status =
          ega_sweep(dataset.ptr, config_str.c_str(), windows.data(),
                    static_cast<int>(windows.size()), clusters.data(),
                    static_cast<int>(clusters.size()), &raw);
      status != EGA_OK) {
    return fail(status);
  }
  json grid = json::parse(take_string(raw));
  grid["config"] = config;

  std::string csv = "window,clusters,fvs_accuracy,tfvs_accuracy\n";
  for (const auto& cell : grid["cells"]) {
    csv += std::to_string(cell["window"].get<int>()) + "," +
           std::to_string(cell["clusters"].get<int>()) + "," +
           std::to_string(cell["fvs_accuracy"].get<double>()) + "," +
           std::to_string(cell["tfvs_accuracy"].get<double>()) + "\n";
  }
  const fs::path out(flags.out_dir);
  write_file((out / "grid.json").string(), grid.dump(2) + "\n");
  write_file((out / "grid.csv").string(), csv);
  std::printf("wrote %zu sweep cells to %s\n", grid["cells"].size(), flags.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multimodal egocentric activity recognition pipeline"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  std::string preset = "separable", spec_file, synth_out = "out";
  long synth_seed = -1;
  int synth_classes = 0, synth_clips = 0;
  synth->add_option("--preset", preset, "order-distinct|fusion|separable|chance");
  synth->add_option("--spec", spec_file, "JSON file overriding preset fields");
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--classes", synth_classes, "class count (separable/chance presets)");
  synth->add_option("--clips", synth_clips, "clips per class");

  // fit / encode / run / sweep share config flags
  auto* fit = app.add_subcommand("fit", "fit codebooks on the whole dataset");
  ConfigFlags fit_flags;
  fit_flags.add_to(fit);

  auto* encode = app.add_subcommand("encode", "encode clips with a frozen codebook");
  ConfigFlags encode_flags;
  std::string codebook_path;
  encode_flags.add_to(encode);
  encode->add_option("--codebook", codebook_path, "codebook.json artifact")->required();

  auto* run = app.add_subcommand("run", "cross-validated evaluation of one method");
  ConfigFlags run_flags;
  run_flags.add_to(run);

  auto* sweep = app.add_subcommand("sweep", "FVS/TFVS grid over window and cluster counts");
  ConfigFlags sweep_flags;
  std::string windows_arg = "1..5", clusters_arg = "2..6";
  sweep_flags.add_to(sweep, /*grid_axes_elsewhere=*/true);
  sweep->add_option("--window", windows_arg, "window values, e.g. 1..5 or 1,3,5");
  sweep->add_option("--clusters", clusters_arg, "cluster values, e.g. 2..6");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      return cmd_synth(preset, spec_file, synth_out, synth_seed, synth_classes, synth_clips);
    }
    if (fit->parsed()) return cmd_fit(fit_flags);
    if (encode->parsed()) return cmd_encode(encode_flags, codebook_path);
    if (run->parsed()) return cmd_run(run_flags);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, windows_arg, clusters_arg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
