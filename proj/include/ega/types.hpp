#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace ega {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Multichannel time series for one clip, rows are samples.
struct SensorStream {
  std::string clip_id;
  double sample_rate_hz = 10.0;
  Matrix samples;  // L x C
  std::vector<std::string> channel_names;

  long length() const { return samples.rows(); }
  long channels() const { return samples.cols(); }
};

// One precomputed video dense-trajectory descriptor. start_frame indexes
// video frames, which share the 10 Hz clock with sensor samples.
struct TrajectoryDescriptor {
  long start_frame = 0;
  Vector values;
};

struct ClipRecord {
  std::string clip_id;
  int label = 0;  // category id, 1-based
  SensorStream sensor;
  std::vector<TrajectoryDescriptor> trajectories;
};

struct Category {
  int id = 0;
  std::string name;
  std::string top_level_type;
};

struct ManifestClip {
  std::string clip_id;
  int label = 0;
  std::string sensor_path;
  std::string trajectory_path;  // empty for sensor-only clips
};

struct DatasetManifest {
  std::vector<Category> categories;
  std::vector<ManifestClip> clips;
  std::string note;
};

}  // namespace ega
