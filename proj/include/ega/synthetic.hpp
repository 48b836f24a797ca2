#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ega/types.hpp"

namespace ega {

// One synthetic class: a motif id per temporal segment of the sensor signal
// and a video blob id per segment (descriptors starting inside a segment are
// drawn around that blob's center).
struct SyntheticClassSpec {
  std::string name;
  std::vector<int> motif_order;
  std::vector<int> blob_schedule;
};

struct SyntheticSpec {
  int clips_per_class = 10;
  int length = 150;  // sensor samples per clip
  int channels = 19;
  double sample_rate_hz = 10.0;
  int video_dim = 30;
  int descriptors_per_clip = 60;
  double sensor_noise_std = 0.05;
  double blob_noise_std = 0.3;
  double blob_separation = 4.0;
  double motif_amplitude = 1.0;
  bool order_only_distinct = false;  // recorded into the manifest note
  std::vector<SyntheticClassSpec> classes;

  int segments() const {
    return classes.empty() ? 0 : static_cast<int>(classes.front().motif_order.size());
  }
};

// Deterministic given (spec, seed). Clip ordering and labels are balanced:
// class 1 clips first, then class 2, etc.
std::vector<ClipRecord> generate_synthetic(const SyntheticSpec& spec, uint64_t seed);

std::vector<Category> synthetic_categories(const SyntheticSpec& spec);

// Canned specs used by the CLI presets and the verification suites.

// Two classes sharing the same motif multiset in reversed temporal order and
// identical video statistics; only temporal order separates them.
SyntheticSpec order_distinct_spec();

// Two classes whose video blob mixtures and sensor motif layouts are
// marginally identical; class identity lives only in which blob co-occurs
// with which motif at the same start time.
SyntheticSpec joint_fusion_spec();

// n well-separated classes (distinct motif and distinct blob per class);
// separation scales both blob distance and motif amplitude contrast.
SyntheticSpec separable_spec(int num_classes, double separation = 4.0);

// Small 20-class set for chance-level checks (labels get shuffled by tests).
SyntheticSpec chance_spec(int num_classes = 20);

}  // namespace ega
