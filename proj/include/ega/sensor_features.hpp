#pragma once

#include <string>
#include <vector>

#include "ega/types.hpp"

namespace ega {

enum class WindowMode { displacement, raw };

WindowMode window_mode_from_string(const std::string& name);
std::string to_string(WindowMode mode);

// Sliding-window feature over the multichannel stream. Displacement mode
// concatenates first differences inside the window across channels
// ((w-1)*C dims); raw mode concatenates the samples themselves (w*C dims).
struct SensorWindowFeature {
  long start_index = 0;
  Vector values;
};

struct StageAssignment {
  int stage = 1;       // 1-based segment index
  double order = 1.0;  // stage / segments, in (0, 1]
};

struct TemporalEnhancedFeature {
  SensorWindowFeature base;
  int stage = 1;
  double order = 1.0;
};

// Stride-1 windows ordered by start index; exactly L-w+1 of them.
std::vector<SensorWindowFeature> extract_windows(const SensorStream& stream, int window,
                                                 WindowMode mode);

// stage = floor(start * S / (L-w+1)) + 1, clamped to [1, S]; order = stage/S.
StageAssignment assign_stage(long start_index, long length, int window, int segments);

std::vector<TemporalEnhancedFeature> enhance(const std::vector<SensorWindowFeature>& windows,
                                             long length, int window, int segments);

}  // namespace ega
