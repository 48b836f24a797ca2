#pragma once

#include <string>
#include <vector>

#include "ega/types.hpp"

namespace ega {

// Sensor CSV: header `timestamp_ms,ch0,...`, UTF-8, LF endings.
// Timestamps must be strictly increasing; the sample rate is inferred from
// the median timestamp delta (single-row files fall back to 10 Hz). A gap
// larger than 1.5x the median period fails validation rather than being
// silently interpolated.
SensorStream load_sensor_csv(const std::string& path, int expected_channels = -1);
void write_sensor_csv(const std::string& path, const SensorStream& stream);

// Trajectory CSV: header `start_frame,f0,...,f{D-1}`, one descriptor per row.
// A header-only (or empty) file yields an empty list; ragged rows are errors.
std::vector<TrajectoryDescriptor> load_trajectories(const std::string& path);
void write_trajectories(const std::string& path,
                        const std::vector<TrajectoryDescriptor>& trajectories);

}  // namespace ega
