#include "ega/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "ega/csv_io.hpp"
#include "ega/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ega {
namespace {

void validate_manifest(const DatasetManifest& m) {
  std::set<int> ids;
  for (const auto& cat : m.categories) ids.insert(cat.id);
  if (ids.size() != m.categories.size()) throw ValidationError("manifest: duplicate category ids");
  for (size_t i = 0; i < m.categories.size(); ++i) {
    if (!ids.count(static_cast<int>(i) + 1)) {
      throw ValidationError("manifest: category ids must be contiguous from 1");
    }
  }
  for (const auto& clip : m.clips) {
    if (!ids.count(clip.label)) {
      throw ValidationError("manifest: clip '" + clip.clip_id + "' has unknown label " +
                            std::to_string(clip.label));
    }
  }
}

}  // namespace

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ValidationError("manifest: invalid JSON: " + std::string(e.what()));
  }
  if (doc.value("manifest_version", 0) != 1) {
    throw ValidationError("manifest: unsupported manifest_version");
  }
  DatasetManifest m;
  m.note = doc.value("note", "");
  for (const auto& c : doc.at("categories")) {
    m.categories.push_back({c.at("id").get<int>(), c.at("name").get<std::string>(),
                            c.value("top_level_type", "")});
  }
  for (const auto& c : doc.at("clips")) {
    m.clips.push_back({c.at("clip_id").get<std::string>(), c.at("label").get<int>(),
                       c.at("sensor_path").get<std::string>(),
                       c.value("trajectory_path", "")});
  }
  validate_manifest(m);
  return m;
}

void save_manifest(const std::string& path, const DatasetManifest& manifest) {
  json doc;
  doc["manifest_version"] = 1;
  if (!manifest.note.empty()) doc["note"] = manifest.note;
  doc["categories"] = json::array();
  for (const auto& c : manifest.categories) {
    doc["categories"].push_back(
        {{"id", c.id}, {"name", c.name}, {"top_level_type", c.top_level_type}});
  }
  doc["clips"] = json::array();
  for (const auto& c : manifest.clips) {
    doc["clips"].push_back({{"clip_id", c.clip_id},
                            {"label", c.label},
                            {"sensor_path", c.sensor_path},
                            {"trajectory_path", c.trajectory_path}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest: " + path);
  out << doc.dump(2) << "\n";
}

Dataset load_dataset(const std::string& manifest_path) {
  Dataset ds;
  ds.manifest = load_manifest(manifest_path);
  const fs::path base = fs::path(manifest_path).parent_path();

  std::vector<std::string> missing;
  for (const auto& clip : ds.manifest.clips) {
    const fs::path sensor = base / clip.sensor_path;
    if (!fs::exists(sensor)) missing.push_back(sensor.string());
    if (!clip.trajectory_path.empty()) {
      const fs::path traj = base / clip.trajectory_path;
      if (!fs::exists(traj)) missing.push_back(traj.string());
    }
  }
  if (!missing.empty()) {
    std::string msg = "manifest references missing files:";
    for (const auto& p : missing) msg += "\n  " + p;
    throw IoError(msg);
  }

  for (const auto& clip : ds.manifest.clips) {
    ClipRecord rec;
    rec.clip_id = clip.clip_id;
    rec.label = clip.label;
    rec.sensor = load_sensor_csv((base / clip.sensor_path).string());
    rec.sensor.clip_id = clip.clip_id;
    if (!clip.trajectory_path.empty()) {
      rec.trajectories = load_trajectories((base / clip.trajectory_path).string());
    }
    ds.clips.push_back(std::move(rec));
  }
  return ds;
}

void save_dataset(const std::string& out_dir, const std::vector<ClipRecord>& clips,
                  const std::vector<Category>& categories, const std::string& note) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output dir: " + out_dir);

  DatasetManifest manifest;
  manifest.categories = categories;
  manifest.note = note;
  for (const auto& clip : clips) {
    const std::string sensor_rel = clip.clip_id + "_sensor.csv";
    const std::string traj_rel = clip.trajectories.empty() ? "" : clip.clip_id + "_traj.csv";
    write_sensor_csv((fs::path(out_dir) / sensor_rel).string(), clip.sensor);
    if (!traj_rel.empty()) {
      write_trajectories((fs::path(out_dir) / traj_rel).string(), clip.trajectories);
    }
    manifest.clips.push_back({clip.clip_id, clip.label, sensor_rel, traj_rel});
  }
  save_manifest((fs::path(out_dir) / "manifest.json").string(), manifest);
}

}  // namespace ega
