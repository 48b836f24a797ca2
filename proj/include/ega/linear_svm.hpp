#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ega/types.hpp"

namespace ega {

struct SvmOptions {
  double cost = 10.0;
  double kkt_tol = 1e-6;   // max violating-pair gap at which to stop
  long max_iters = 1000000;
};

struct BinarySvm {
  Vector weights;
  double bias = 0.0;
};

// L2-regularized hinge-loss SVM with an unregularized bias, solved in the
// dual by maximal-violating-pair updates under the equality constraint.
// A precomputed Gram matrix may be shared across one-vs-rest problems.
BinarySvm train_binary_svm(const Matrix& X, const std::vector<int>& y, const SvmOptions& opts,
                           const Matrix* gram = nullptr);

// (1/2)||w||^2 + C * sum hinge at the given (w, b).
double svm_primal_objective(const Matrix& X, const std::vector<int>& y, double cost,
                            const Vector& w, double bias);

// Best achievable primal objective for a fixed w, minimizing over the bias
// (exact: the hinge sum is piecewise linear in b).
double svm_primal_objective_opt_bias(const Matrix& X, const std::vector<int>& y, double cost,
                                     const Vector& w);

struct LinearOvrModel {
  std::vector<int> classes;  // category ids, ascending
  Matrix weights;            // classes x dim
  Vector bias;               // classes
  double cost = 10.0;
};

LinearOvrModel train_ovr(const Matrix& X, const std::vector<int>& labels, double cost,
                         uint64_t seed = 0);

// Returns (predicted class id, per-class scores); score ties break to the
// smallest class id.
std::pair<int, Vector> predict(const LinearOvrModel& model, const Vector& x);

}  // namespace ega
