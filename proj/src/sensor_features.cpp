#include "ega/sensor_features.hpp"

#include <algorithm>

#include "ega/error.hpp"

namespace ega {

WindowMode window_mode_from_string(const std::string& name) {
  if (name == "displacement") return WindowMode::displacement;
  if (name == "raw") return WindowMode::raw;
  throw ValidationError("unknown window mode: " + name);
}

std::string to_string(WindowMode mode) {
  return mode == WindowMode::displacement ? "displacement" : "raw";
}

std::vector<SensorWindowFeature> extract_windows(const SensorStream& stream, int window,
                                                 WindowMode mode) {
  const long length = stream.length();
  const long channels = stream.channels();
  if (window > length) {
    throw ValidationError("window length " + std::to_string(window) + " exceeds stream length " +
                          std::to_string(length));
  }
  const int min_window = mode == WindowMode::displacement ? 2 : 1;
  if (window < min_window) {
    throw ValidationError("window length must be >= " + std::to_string(min_window) + " in " +
                          to_string(mode) + " mode");
  }

  const long per_channel = mode == WindowMode::displacement ? window - 1 : window;
  std::vector<SensorWindowFeature> out;
  out.reserve(length - window + 1);
  for (long start = 0; start + window <= length; ++start) {
    SensorWindowFeature f;
    f.start_index = start;
    f.values.resize(per_channel * channels);
    long k = 0;
    for (long c = 0; c < channels; ++c) {
      for (long j = 0; j < per_channel; ++j) {
        if (mode == WindowMode::displacement) {
          f.values[k++] = stream.samples(start + j + 1, c) - stream.samples(start + j, c);
        } else {
          f.values[k++] = stream.samples(start + j, c);
        }
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

StageAssignment assign_stage(long start_index, long length, int window, int segments) {
  if (segments < 1) throw ValidationError("segment count must be >= 1");
  const long window_count = length - window + 1;
  if (start_index < 0 || start_index >= window_count) {
    throw ValidationError("window start index out of range");
  }
  long stage = start_index * segments / window_count + 1;
  stage = std::clamp<long>(stage, 1, segments);
  return {static_cast<int>(stage), static_cast<double>(stage) / segments};
}

std::vector<TemporalEnhancedFeature> enhance(const std::vector<SensorWindowFeature>& windows,
                                             long length, int window, int segments) {
  std::vector<TemporalEnhancedFeature> out;
  out.reserve(windows.size());
  for (const auto& w : windows) {
    const auto stage = assign_stage(w.start_index, length, window, segments);
    out.push_back({w, stage.stage, stage.order});
  }
  return out;
}

}  // namespace ega
