#pragma once

#include <json.hpp>

#include "ega/types.hpp"

namespace ega {

struct PcaModel {
  Vector mean;               // input dim
  Matrix basis;              // input dim x output dim, orthonormal columns
  Vector explained_variance; // output dim

  long input_dim() const { return basis.rows(); }
  long output_dim() const { return basis.cols(); }

  Vector project(const Vector& x) const;
  Matrix project(const Matrix& rows) const;

  nlohmann::json to_json() const;
  static PcaModel from_json(const nlohmann::json& doc);
};

// Top eigenvectors of the sample covariance; each column is sign-fixed so its
// largest-magnitude entry is positive. target_dim above the data rank is
// allowed (trailing variances near zero), above the input dim is not.
PcaModel fit_pca(const Matrix& data, int target_dim);

// Identity "PCA" used when reduction is bypassed.
PcaModel identity_pca(int dim);

}  // namespace ega
