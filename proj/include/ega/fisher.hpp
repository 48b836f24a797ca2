#pragma once

#include "ega/gmm.hpp"
#include "ega/pca.hpp"
#include "ega/sensor_features.hpp"
#include "ega/types.hpp"

namespace ega {

// Layout: [alpha block (K) | mean blocks (K x dim, cluster-major) |
// inverse-variance blocks (K x dim, cluster-major)], length (1 + 2*dim) * K.
struct FisherVector {
  Vector values;
  int components = 0;
  int dim = 0;
  bool normalized = false;

  long size() const { return values.size(); }
};

// Mean over features of the per-feature score gradients:
//   d/d alpha_i       = q_i - theta_i
//   d/d mu_i          = q_i * (x - mu_i) / var_i
//   d/d inv(Sigma_i)  = q_i * (var_i - (x - mu_i)^2) / 2
FisherVector encode_fv(const GmmCodebook& codebook, const Matrix& features);

// Signed square root followed by L2 normalization; the zero vector is
// preserved as zero with the normalized flag set.
FisherVector normalize_fv(const FisherVector& fv);

// Sensor windows -> PCA -> order scalar appended -> FV -> power/L2.
// The GMM must be trained over (pca output dim + 1)-dimensional features.
FisherVector encode_tfvs(const SensorStream& stream, const PcaModel& pca,
                         const GmmCodebook& sensor_gmm, int window, int segments,
                         WindowMode mode = WindowMode::displacement);

// Same pipeline without the order scalar (plain sensor Fisher vector).
FisherVector encode_fvs(const SensorStream& stream, const PcaModel& pca,
                        const GmmCodebook& sensor_gmm, int window,
                        WindowMode mode = WindowMode::displacement);

// Windows -> PCA -> append normalized temporal order, as a feature matrix.
Matrix enhanced_sensor_matrix(const SensorStream& stream, const PcaModel& pca, int window,
                              int segments, WindowMode mode);
Matrix window_matrix(const std::vector<SensorWindowFeature>& windows);

}  // namespace ega
