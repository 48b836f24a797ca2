#include "ega/pca.hpp"

#include <Eigen/Dense>

#include "ega/error.hpp"
#include "ega/json_util.hpp"

using nlohmann::json;

namespace ega {

Vector PcaModel::project(const Vector& x) const {
  if (x.size() != basis.rows()) throw ValidationError("PCA input dimension mismatch");
  return basis.transpose() * (x - mean);
}

Matrix PcaModel::project(const Matrix& rows) const {
  if (rows.cols() != basis.rows()) throw ValidationError("PCA input dimension mismatch");
  return (rows.rowwise() - mean.transpose()) * basis;
}

json PcaModel::to_json() const {
  return {{"mean", vector_to_json(mean)},
          {"basis", matrix_to_json(basis)},
          {"explained_variance", vector_to_json(explained_variance)}};
}

PcaModel PcaModel::from_json(const json& doc) {
  PcaModel m;
  m.mean = vector_from_json(doc.at("mean"));
  m.basis = matrix_from_json(doc.at("basis"));
  m.explained_variance = vector_from_json(doc.at("explained_variance"));
  return m;
}

PcaModel fit_pca(const Matrix& data, int target_dim) {
  const long n = data.rows();
  const long dims = data.cols();
  if (n < 1) throw ValidationError("PCA needs at least one row");
  if (target_dim < 1 || target_dim > dims) {
    throw ValidationError("PCA target dimension out of range");
  }
  if (!data.allFinite()) throw ValidationError("non-finite PCA input");

  PcaModel model;
  model.mean = data.colwise().mean();
  Matrix centered = data.rowwise() - model.mean.transpose();
  Matrix cov = centered.transpose() * centered / static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  if (eig.info() != Eigen::Success) throw NumericError("PCA eigendecomposition failed");

  // Eigen returns ascending eigenvalues; take the top target_dim in
  // descending order.
  model.basis.resize(dims, target_dim);
  model.explained_variance.resize(target_dim);
  for (int k = 0; k < target_dim; ++k) {
    const long src = dims - 1 - k;
    Vector col = eig.eigenvectors().col(src);
    long max_idx = 0;
    col.cwiseAbs().maxCoeff(&max_idx);
    if (col[max_idx] < 0) col = -col;
    model.basis.col(k) = col;
    model.explained_variance[k] = std::max(eig.eigenvalues()[src], 0.0);
  }
  return model;
}

PcaModel identity_pca(int dim) {
  PcaModel model;
  model.mean = Vector::Zero(dim);
  model.basis = Matrix::Identity(dim, dim);
  model.explained_variance = Vector::Zero(dim);
  return model;
}

}  // namespace ega
