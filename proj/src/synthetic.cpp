#include "ega/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "ega/error.hpp"

namespace ega {
namespace {

// Motif geometry is a pure function of the motif id so that the same motif
// means the same signal across classes, clips and seeds.
struct Motif {
  double frequency_hz;
  std::vector<double> amplitude;  // per channel
  std::vector<double> phase;      // per channel
};

Motif make_motif(int id, int channels, double base_amplitude) {
  std::mt19937_64 rng(0x5EED0000u + static_cast<uint64_t>(id));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Motif m;
  m.frequency_hz = 0.5 + 0.45 * id;
  m.amplitude.resize(channels);
  m.phase.resize(channels);
  for (int c = 0; c < channels; ++c) {
    m.amplitude[c] = base_amplitude * (0.5 + unit(rng));
    m.phase[c] = 2.0 * std::numbers::pi * unit(rng);
  }
  return m;
}

Vector make_blob_center(int id, int dim, double separation) {
  std::mt19937_64 rng(0xB10B0000u + static_cast<uint64_t>(id));
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = normal(rng);
  const double norm = v.norm();
  if (norm > 0) v *= separation / norm;
  return v;
}

int segment_of(long t, long length, int segments) {
  long s = t * segments / length;
  if (s >= segments) s = segments - 1;
  return static_cast<int>(s);
}

void validate_spec(const SyntheticSpec& spec) {
  if (spec.classes.size() < 2) throw ValidationError("synthetic spec needs >= 2 classes");
  const size_t segments = spec.classes.front().motif_order.size();
  if (segments == 0) throw ValidationError("synthetic spec: empty motif order");
  for (const auto& cls : spec.classes) {
    if (cls.motif_order.size() != segments || cls.blob_schedule.size() != segments) {
      throw ValidationError("synthetic spec: all classes must use the same segment count");
    }
  }
  if (spec.length < 2 || spec.channels < 1 || spec.clips_per_class < 1) {
    throw ValidationError("synthetic spec: degenerate dimensions");
  }
}

}  // namespace

std::vector<ClipRecord> generate_synthetic(const SyntheticSpec& spec, uint64_t seed) {
  validate_spec(spec);
  const int segments = spec.segments();

  int max_motif = 0, max_blob = 0;
  for (const auto& cls : spec.classes) {
    for (int m : cls.motif_order) max_motif = std::max(max_motif, m);
    for (int b : cls.blob_schedule) max_blob = std::max(max_blob, b);
  }
  std::vector<Motif> motifs;
  for (int m = 0; m <= max_motif; ++m) {
    motifs.push_back(make_motif(m, spec.channels, spec.motif_amplitude));
  }
  std::vector<Vector> blobs;
  for (int b = 0; b <= max_blob; ++b) {
    blobs.push_back(make_blob_center(b, spec.video_dim, spec.blob_separation));
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<ClipRecord> clips;
  for (size_t cls_idx = 0; cls_idx < spec.classes.size(); ++cls_idx) {
    const auto& cls = spec.classes[cls_idx];
    for (int rep = 0; rep < spec.clips_per_class; ++rep) {
      ClipRecord clip;
      clip.label = static_cast<int>(cls_idx) + 1;
      clip.clip_id = "c" + std::to_string(clip.label) + "_" + std::to_string(rep);

      clip.sensor.clip_id = clip.clip_id;
      clip.sensor.sample_rate_hz = spec.sample_rate_hz;
      clip.sensor.samples.resize(spec.length, spec.channels);
      clip.sensor.channel_names.resize(spec.channels);
      for (int c = 0; c < spec.channels; ++c) {
        clip.sensor.channel_names[c] = "ch" + std::to_string(c);
      }
      // Small random phase offset per clip so clips of one class are not
      // sample-identical.
      std::uniform_real_distribution<double> jitter(0.0, 2.0 * std::numbers::pi);
      const double clip_phase = jitter(rng);
      for (long t = 0; t < spec.length; ++t) {
        const Motif& motif = motifs[cls.motif_order[segment_of(t, spec.length, segments)]];
        const double time_s = static_cast<double>(t) / spec.sample_rate_hz;
        for (int c = 0; c < spec.channels; ++c) {
          const double base =
              motif.amplitude[c] *
              std::sin(2.0 * std::numbers::pi * motif.frequency_hz * time_s + motif.phase[c] +
                       clip_phase);
          clip.sensor.samples(t, c) = base + spec.sensor_noise_std * normal(rng);
        }
      }

      const int n = spec.descriptors_per_clip;
      for (int j = 0; j < n; ++j) {
        TrajectoryDescriptor d;
        d.start_frame =
            (n == 1) ? 0 : static_cast<long>(j) * (spec.length - 1) / (n - 1);
        const int blob = cls.blob_schedule[segment_of(d.start_frame, spec.length, segments)];
        d.values = blobs[blob];
        for (int i = 0; i < spec.video_dim; ++i) {
          d.values[i] += spec.blob_noise_std * normal(rng);
        }
        clip.trajectories.push_back(std::move(d));
      }
      clips.push_back(std::move(clip));
    }
  }
  return clips;
}

std::vector<Category> synthetic_categories(const SyntheticSpec& spec) {
  static const char* kTypes[4] = {"Ambulation", "Daily Activities", "Office Work", "Exercise"};
  std::vector<Category> cats;
  for (size_t i = 0; i < spec.classes.size(); ++i) {
    const std::string name =
        spec.classes[i].name.empty() ? "class_" + std::to_string(i + 1) : spec.classes[i].name;
    cats.push_back({static_cast<int>(i) + 1, name, kTypes[i % 4]});
  }
  return cats;
}

SyntheticSpec order_distinct_spec() {
  SyntheticSpec spec;
  spec.channels = 6;
  spec.length = 120;
  spec.video_dim = 10;
  spec.descriptors_per_clip = 40;
  spec.sensor_noise_std = 0.05;
  spec.order_only_distinct = true;
  spec.classes = {
      {"forward", {0, 1, 2, 3}, {0, 0, 0, 0}},
      {"reversed", {3, 2, 1, 0}, {0, 0, 0, 0}},
  };
  return spec;
}

SyntheticSpec joint_fusion_spec() {
  SyntheticSpec spec;
  spec.channels = 6;
  spec.length = 120;
  spec.video_dim = 10;
  spec.descriptors_per_clip = 40;
  spec.sensor_noise_std = 0.05;
  spec.blob_noise_std = 0.3;
  spec.blob_separation = 4.0;
  // Identical sensor layout and identical blob mixture in both classes; the
  // classes differ only in which blob starts at the same time as which motif.
  spec.classes = {
      {"aligned", {0, 0, 1, 1}, {0, 0, 1, 1}},
      {"crossed", {0, 0, 1, 1}, {1, 1, 0, 0}},
  };
  return spec;
}

SyntheticSpec separable_spec(int num_classes, double separation) {
  SyntheticSpec spec;
  spec.channels = 6;
  spec.length = 80;
  spec.video_dim = 8;
  spec.descriptors_per_clip = 20;
  spec.blob_separation = separation;
  spec.sensor_noise_std = 0.6 / std::max(separation, 1e-6);
  for (int c = 0; c < num_classes; ++c) {
    spec.classes.push_back({"class_" + std::to_string(c + 1), {c}, {c}});
  }
  return spec;
}

SyntheticSpec chance_spec(int num_classes) {
  SyntheticSpec spec;
  spec.channels = 6;
  spec.length = 60;
  spec.video_dim = 8;
  spec.descriptors_per_clip = 15;
  spec.sensor_noise_std = 0.1;
  for (int c = 0; c < num_classes; ++c) {
    spec.classes.push_back({"class_" + std::to_string(c + 1),
                            {c % 6, (c / 2) % 6},
                            {c % 4, (c + 1) % 4}});
  }
  return spec;
}

}  // namespace ega
