#include "ega/mfv.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ega/error.hpp"

using nlohmann::json;

namespace ega {
namespace {

double logsumexp(const Vector& v) {
  const double m = v.maxCoeff();
  double acc = 0.0;
  for (long i = 0; i < v.size(); ++i) acc += std::exp(v[i] - m);
  return m + std::log(acc);
}

// log theta_i + log p(x|i) + log p(s|i) per cluster.
Vector joint_weighted_log_densities(const GmmCodebook& video, const SensorCodebook& sensor,
                                    const PairedFeature& pair) {
  Vector logp = video.weighted_log_densities(pair.video);
  for (int i = 0; i < video.components(); ++i) {
    logp[i] += sensor.per_cluster[i].log_density(pair.sensor);
  }
  return logp;
}

}  // namespace

json MultimodalCodebook::to_json() const {
  return {{"video_gmm", video.to_json()},
          {"sensor_codebook", sensor.to_json()},
          {"video_pca", video_pca.to_json()},
          {"sensor_pca", sensor_pca.to_json()},
          {"window", window},
          {"segments", segments},
          {"window_mode", to_string(mode)}};
}

MultimodalCodebook MultimodalCodebook::from_json(const json& doc) {
  MultimodalCodebook cb;
  cb.video = GmmCodebook::from_json(doc.at("video_gmm"));
  cb.sensor = SensorCodebook::from_json(doc.at("sensor_codebook"));
  cb.video_pca = PcaModel::from_json(doc.at("video_pca"));
  cb.sensor_pca = PcaModel::from_json(doc.at("sensor_pca"));
  cb.window = doc.at("window").get<int>();
  cb.segments = doc.at("segments").get<int>();
  cb.mode = window_mode_from_string(doc.at("window_mode").get<std::string>());
  return cb;
}

std::vector<PairedFeature> pair_features(const std::vector<TrajectoryDescriptor>& video_reduced,
                                         const std::vector<ReducedSensorWindow>& sensor) {
  if (video_reduced.empty()) return {};
  if (sensor.empty()) throw ValidationError("cannot pair features without sensor windows");

  const long max_start = sensor.back().start_index;
  std::map<long, size_t> by_start;
  for (size_t i = 0; i < sensor.size(); ++i) by_start[sensor[i].start_index] = i;

  std::vector<PairedFeature> out;
  out.reserve(video_reduced.size());
  for (const auto& traj : video_reduced) {
    const long idx = std::min(traj.start_frame, max_start);
    const auto it = by_start.find(idx);
    if (it == by_start.end()) {
      throw ValidationError("no sensor window at start index " + std::to_string(idx));
    }
    PairedFeature p;
    p.video = traj.values;
    p.sensor = sensor[it->second].values;
    p.start_frame = traj.start_frame;
    p.window_index = idx;
    out.push_back(std::move(p));
  }
  return out;
}

SensorCodebook build_sensor_codebook(const GmmCodebook& video,
                                     const std::vector<std::vector<PairedFeature>>& clip_pairs,
                                     double floor_scale, double abs_floor) {
  const int k = video.components();
  std::vector<std::vector<Vector>> per_cluster(k);
  std::vector<Vector> all_features;

  size_t total_pairs = 0;
  for (const auto& pairs : clip_pairs) total_pairs += pairs.size();
  if (total_pairs == 0) throw ValidationError("cannot build a sensor codebook without pairs");

  for (const auto& pairs : clip_pairs) {
    // Group by sensor window so each distinct sensor feature is labeled once.
    std::map<long, std::pair<double, int>> best;  // window -> (peak resp, label)
    std::map<long, const Vector*> feature_of;
    for (const auto& p : pairs) {
      const Vector q = video.responsibilities(p.video);
      int label = 0;
      for (int i = 1; i < k; ++i) {
        if (q[i] > q[label]) label = i;
      }
      const double peak = q[label];
      auto it = best.find(p.window_index);
      // Ties on the pooled peak break to the smallest cluster label.
      if (it == best.end() || peak > it->second.first ||
          (peak == it->second.first && label < it->second.second)) {
        best[p.window_index] = {peak, label};
        feature_of[p.window_index] = &p.sensor;
      }
    }
    for (const auto& [window, entry] : best) {
      per_cluster[entry.second].push_back(*feature_of.at(window));
      all_features.push_back(*feature_of.at(window));
    }
  }

  const long dims = all_features.front().size();
  Matrix all(static_cast<long>(all_features.size()), dims);
  for (size_t i = 0; i < all_features.size(); ++i) all.row(static_cast<long>(i)) = all_features[i];

  Vector floor(dims);
  const Vector mean = all.colwise().mean();
  for (long d = 0; d < dims; ++d) {
    const double var = (all.col(d).array() - mean[d]).square().mean();
    floor[d] = std::max(abs_floor, floor_scale * var);
  }
  const SingleGaussian fallback = fit_single_gaussian(all, floor);

  SensorCodebook out;
  for (int i = 0; i < k; ++i) {
    out.occupancy.push_back(static_cast<long>(per_cluster[i].size()));
    if (per_cluster[i].empty()) {
      out.per_cluster.push_back(fallback);
      continue;
    }
    Matrix cluster(static_cast<long>(per_cluster[i].size()), dims);
    for (size_t r = 0; r < per_cluster[i].size(); ++r) {
      cluster.row(static_cast<long>(r)) = per_cluster[i][r];
    }
    out.per_cluster.push_back(fit_single_gaussian(cluster, floor));
  }
  return out;
}

FisherVector encode_mfv_raw(const GmmCodebook& video, const SensorCodebook& sensor,
                            const std::vector<PairedFeature>& pairs) {
  if (pairs.empty()) throw ValidationError("cannot encode an empty pair list");
  if (video.components() != sensor.components()) {
    throw ValidationError("video and sensor codebooks disagree on cluster count");
  }
  const int k = video.components();
  const int vdim = video.dim();
  const int sdim = sensor.dim();
  for (const auto& p : pairs) {
    if (p.video.size() != vdim || p.sensor.size() != sdim) {
      throw ValidationError("paired feature dimension mismatch");
    }
  }

  FisherVector fv;
  fv.components = k;
  fv.dim = vdim + sdim;
  fv.values = Vector::Zero((1 + 2 * (vdim + sdim)) * k);
  auto alpha = fv.values.head(k);
  const long video_mu_off = k;
  const long video_sig_off = k + static_cast<long>(k) * vdim;
  const long sensor_mu_off = video_sig_off + static_cast<long>(k) * vdim;
  const long sensor_sig_off = sensor_mu_off + static_cast<long>(k) * sdim;

  for (const auto& p : pairs) {
    Vector logp = joint_weighted_log_densities(video, sensor, p);
    const double lse = logsumexp(logp);
    for (int i = 0; i < k; ++i) {
      const double q = std::exp(logp[i] - lse);
      alpha[i] += q - video.weights[i];
      auto vmu = fv.values.segment(video_mu_off + static_cast<long>(i) * vdim, vdim);
      auto vsig = fv.values.segment(video_sig_off + static_cast<long>(i) * vdim, vdim);
      for (int d = 0; d < vdim; ++d) {
        const double var = video.variances(i, d);
        const double xd = p.video[d] - video.means(i, d);
        vmu[d] += q * xd / var;
        vsig[d] += q * (var - xd * xd) / 2.0;
      }
      const SingleGaussian& g = sensor.per_cluster[i];
      auto smu = fv.values.segment(sensor_mu_off + static_cast<long>(i) * sdim, sdim);
      auto ssig = fv.values.segment(sensor_sig_off + static_cast<long>(i) * sdim, sdim);
      for (int d = 0; d < sdim; ++d) {
        const double var = g.variances[d];
        const double sd = p.sensor[d] - g.mean[d];
        smu[d] += q * sd / var;
        ssig[d] += q * (var - sd * sd) / 2.0;
      }
    }
  }
  fv.values /= static_cast<double>(pairs.size());
  return fv;
}

FisherVector encode_mfv(const GmmCodebook& video, const SensorCodebook& sensor,
                        const std::vector<PairedFeature>& pairs) {
  return normalize_fv(encode_mfv_raw(video, sensor, pairs));
}

FisherVector concat_fv(const FisherVector& a, const FisherVector& b) {
  if (!a.normalized || !b.normalized) {
    throw ValidationError("concat_fv expects normalized inputs");
  }
  FisherVector out;
  out.components = a.components;
  out.dim = a.dim + b.dim;
  out.values.resize(a.size() + b.size());
  out.values << a.values, b.values;
  const double norm = out.values.norm();
  if (norm > 0) out.values /= norm;
  out.normalized = true;
  return out;
}

}  // namespace ega
