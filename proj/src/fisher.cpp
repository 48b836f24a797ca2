#include "ega/fisher.hpp"

#include <cmath>

#include "ega/error.hpp"

namespace ega {

FisherVector encode_fv(const GmmCodebook& codebook, const Matrix& features) {
  const long n = features.rows();
  if (n < 1) throw ValidationError("cannot encode an empty feature set");
  if (features.cols() != codebook.dim()) {
    throw ValidationError("feature dimension does not match codebook");
  }

  const int k = codebook.components();
  const int dim = codebook.dim();
  FisherVector fv;
  fv.components = k;
  fv.dim = dim;
  fv.values = Vector::Zero((1 + 2 * dim) * k);

  auto alpha = fv.values.head(k);
  for (long r = 0; r < n; ++r) {
    const Vector x = features.row(r);
    const Vector q = codebook.responsibilities(x);
    alpha += q - codebook.weights;
    for (int i = 0; i < k; ++i) {
      auto mu = fv.values.segment(k + i * dim, dim);
      auto sigma = fv.values.segment(k + k * dim + i * dim, dim);
      for (int d = 0; d < dim; ++d) {
        const double var = codebook.variances(i, d);
        const double xd = x[d] - codebook.means(i, d);
        mu[d] += q[i] * xd / var;
        sigma[d] += q[i] * (var - xd * xd) / 2.0;
      }
    }
  }
  fv.values /= static_cast<double>(n);
  return fv;
}

FisherVector normalize_fv(const FisherVector& fv) {
  if (fv.normalized) throw ValidationError("Fisher vector is already normalized");
  if (!fv.values.allFinite()) throw ValidationError("non-finite Fisher vector");
  FisherVector out = fv;
  for (long i = 0; i < out.values.size(); ++i) {
    const double z = out.values[i];
    out.values[i] = std::copysign(std::sqrt(std::abs(z)), z);
  }
  const double norm = out.values.norm();
  if (norm > 0) out.values /= norm;
  out.normalized = true;
  return out;
}

Matrix window_matrix(const std::vector<SensorWindowFeature>& windows) {
  if (windows.empty()) return Matrix(0, 0);
  Matrix m(static_cast<long>(windows.size()), windows.front().values.size());
  for (size_t i = 0; i < windows.size(); ++i) m.row(static_cast<long>(i)) = windows[i].values;
  return m;
}

Matrix enhanced_sensor_matrix(const SensorStream& stream, const PcaModel& pca, int window,
                              int segments, WindowMode mode) {
  const auto windows = extract_windows(stream, window, mode);
  const auto enhanced = enhance(windows, stream.length(), window, segments);
  Matrix out(static_cast<long>(enhanced.size()), pca.output_dim() + 1);
  for (size_t i = 0; i < enhanced.size(); ++i) {
    out.row(static_cast<long>(i)).head(pca.output_dim()) =
        pca.project(enhanced[i].base.values).transpose();
    out(static_cast<long>(i), pca.output_dim()) = enhanced[i].order;
  }
  return out;
}

FisherVector encode_tfvs(const SensorStream& stream, const PcaModel& pca,
                         const GmmCodebook& sensor_gmm, int window, int segments,
                         WindowMode mode) {
  return normalize_fv(
      encode_fv(sensor_gmm, enhanced_sensor_matrix(stream, pca, window, segments, mode)));
}

FisherVector encode_fvs(const SensorStream& stream, const PcaModel& pca,
                        const GmmCodebook& sensor_gmm, int window, WindowMode mode) {
  const auto windows = extract_windows(stream, window, mode);
  return normalize_fv(encode_fv(sensor_gmm, pca.project(window_matrix(windows))));
}

}  // namespace ega
