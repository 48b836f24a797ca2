#pragma once

#include <vector>

#include <json.hpp>

#include "ega/fisher.hpp"
#include "ega/gmm.hpp"
#include "ega/pca.hpp"
#include "ega/sensor_features.hpp"
#include "ega/types.hpp"

namespace ega {

// One sensor window after PCA reduction with the order scalar appended,
// indexed by its window start.
struct ReducedSensorWindow {
  long start_index = 0;
  Vector values;  // d+1 dims
};

// Video descriptor (reduced) paired with the sensor window sharing its start
// time. Many descriptors may map to one window.
struct PairedFeature {
  Vector video;   // D dims
  Vector sensor;  // d+1 dims
  long start_frame = 0;
  long window_index = 0;  // clamped sensor window start
};

struct MultimodalCodebook {
  GmmCodebook video;
  SensorCodebook sensor;
  PcaModel video_pca;
  PcaModel sensor_pca;
  int window = 3;
  int segments = 4;
  WindowMode mode = WindowMode::displacement;

  nlohmann::json to_json() const;
  static MultimodalCodebook from_json(const nlohmann::json& doc);
};

// Each descriptor pairs with the window whose start index equals its start
// frame, clamped to the last valid window. Output follows descriptor order.
std::vector<PairedFeature> pair_features(const std::vector<TrajectoryDescriptor>& video_reduced,
                                         const std::vector<ReducedSensorWindow>& sensor);

// Labels each distinct sensor window with the hard assignment of the paired
// descriptor whose peak responsibility is largest (max pooling), then fits one
// Gaussian per video cluster. Pairs are grouped per clip so windows from
// different clips stay distinct. Clusters with no sensor feature get a
// fallback Gaussian over all sensor features and occupancy 0.
SensorCodebook build_sensor_codebook(const GmmCodebook& video,
                                     const std::vector<std::vector<PairedFeature>>& clip_pairs,
                                     double floor_scale = 1e-4, double abs_floor = 1e-10);

// Unnormalized multimodal Fisher vector under the joint model
// p(f) = sum_i theta_i p(x|i) p(s|i). Block layout: [alpha (K) | video mu
// (K*D) | video inv-variance (K*D) | sensor mu (K*(d+1)) | sensor
// inv-variance (K*(d+1))], total (2D + 2d + 3) * K.
FisherVector encode_mfv_raw(const GmmCodebook& video, const SensorCodebook& sensor,
                            const std::vector<PairedFeature>& pairs);

// encode_mfv_raw followed by power and L2 normalization.
FisherVector encode_mfv(const GmmCodebook& video, const SensorCodebook& sensor,
                        const std::vector<PairedFeature>& pairs);

// Concatenation of two normalized Fisher vectors, re-normalized in L2.
FisherVector concat_fv(const FisherVector& a, const FisherVector& b);

}  // namespace ega
