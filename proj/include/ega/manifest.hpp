#pragma once

#include <string>
#include <vector>

#include "ega/types.hpp"

namespace ega {

// Manifest JSON with `manifest_version: 1`, `categories` and `clips` arrays.
DatasetManifest load_manifest(const std::string& path);
void save_manifest(const std::string& path, const DatasetManifest& manifest);

struct Dataset {
  DatasetManifest manifest;
  std::vector<ClipRecord> clips;
};

// Loads every clip referenced by the manifest. Paths are resolved relative to
// the manifest file. If any referenced file is missing, loading fails
// atomically with the full list of missing paths.
Dataset load_dataset(const std::string& manifest_path);

// Writes sensor/trajectory CSVs plus manifest.json under out_dir.
void save_dataset(const std::string& out_dir, const std::vector<ClipRecord>& clips,
                  const std::vector<Category>& categories, const std::string& note = "");

}  // namespace ega
