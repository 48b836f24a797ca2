#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "ega/types.hpp"

namespace ega {

struct EmOptions {
  int max_iters = 200;
  double tol = 1e-6;  // relative log-likelihood change
  // Per-dimension variance floor = max(abs_floor, floor_scale * data variance).
  double floor_scale = 1e-4;
  double abs_floor = 1e-10;
  double subsample_fraction = 1.0;  // applied to the training rows
  int kmeans_iters = 10;
};

struct FitDiagnostics {
  std::vector<double> log_likelihood;  // mean log-likelihood per EM iteration
  int iterations = 0;
};

// Diagonal-covariance Gaussian mixture. Weights are kept consistent with the
// softmax parameterization theta_i = exp(alpha_i) / sum_j exp(alpha_j).
struct GmmCodebook {
  Vector weights;    // K
  Vector alphas;     // K
  Matrix means;      // K x D
  Matrix variances;  // K x D

  int components() const { return static_cast<int>(weights.size()); }
  int dim() const { return static_cast<int>(means.cols()); }

  // log(theta_i) + log N(x; mu_i, Sigma_i) per component.
  Vector weighted_log_densities(const Vector& x) const;
  double log_likelihood(const Vector& x) const;
  // Posterior p(component | x), computed in log space.
  Vector responsibilities(const Vector& x) const;
  // Argmax responsibility, 0-based; ties break to the smallest index.
  int hard_assign(const Vector& x) const;

  // Draws n samples; deterministic given seed.
  Matrix sample(long n, uint64_t seed) const;

  nlohmann::json to_json() const;
  static GmmCodebook from_json(const nlohmann::json& doc);
};

GmmCodebook fit_gmm(const Matrix& data, int components, uint64_t seed,
                    const EmOptions& opts = {}, FitDiagnostics* diag = nullptr);

struct SingleGaussian {
  Vector mean;
  Vector variances;

  double log_density(const Vector& x) const;

  nlohmann::json to_json() const;
  static SingleGaussian from_json(const nlohmann::json& doc);
};

// mean = sample mean, variance = max(biased sample variance, floor).
SingleGaussian fit_single_gaussian(const Matrix& data, const Vector& floor);

// One Gaussian per video-GMM cluster; occupancy 0 marks clusters that
// received no sensor feature and carry the all-data fallback Gaussian.
struct SensorCodebook {
  std::vector<SingleGaussian> per_cluster;
  std::vector<long> occupancy;

  int components() const { return static_cast<int>(per_cluster.size()); }
  int dim() const { return per_cluster.empty() ? 0 : static_cast<int>(per_cluster[0].mean.size()); }

  nlohmann::json to_json() const;
  static SensorCodebook from_json(const nlohmann::json& doc);
};

}  // namespace ega
