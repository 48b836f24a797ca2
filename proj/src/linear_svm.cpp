#include "ega/linear_svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "ega/error.hpp"

namespace ega {

BinarySvm train_binary_svm(const Matrix& X, const std::vector<int>& y, const SvmOptions& opts,
                           const Matrix* gram) {
  const long n = X.rows();
  if (n < 2 || static_cast<long>(y.size()) != n) {
    throw ValidationError("binary SVM needs matching X rows and labels");
  }
  bool has_pos = false, has_neg = false;
  for (int label : y) {
    if (label == 1) has_pos = true;
    else if (label == -1) has_neg = true;
    else throw ValidationError("binary labels must be +/-1");
  }
  if (!has_pos || !has_neg) throw ValidationError("binary SVM needs both classes present");

  Matrix owned_gram;
  if (!gram) {
    owned_gram = X * X.transpose();
    gram = &owned_gram;
  }
  const double c = opts.cost;

  Vector alpha = Vector::Zero(n);
  // grad_i = d/d alpha_i of (1/2 a'Qa - e'a) = y_i * (w . x_i) - 1, tracked
  // through Qa so no feature-space products are needed per iteration.
  Vector grad = Vector::Constant(n, -1.0);

  double m_up = 0.0, m_low = 0.0;
  for (long iter = 0; iter < opts.max_iters; ++iter) {
    // Maximal violating pair over the feasible ascent/descent sets.
    long i = -1, j = -1;
    m_up = -std::numeric_limits<double>::infinity();
    m_low = std::numeric_limits<double>::infinity();
    for (long t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      const bool in_up = (y[t] == 1 && alpha[t] < c) || (y[t] == -1 && alpha[t] > 0);
      const bool in_low = (y[t] == -1 && alpha[t] < c) || (y[t] == 1 && alpha[t] > 0);
      if (in_up && v > m_up) {
        m_up = v;
        i = t;
      }
      if (in_low && v < m_low) {
        m_low = v;
        j = t;
      }
    }
    if (i < 0 || j < 0 || m_up - m_low < opts.kkt_tol) break;

    // Direction alpha_i += y_i*d, alpha_j -= y_j*d keeps sum(alpha*y) fixed;
    // curvature along it is |x_i - x_j|^2.
    const double eta =
        std::max((*gram)(i, i) + (*gram)(j, j) - 2.0 * (*gram)(i, j), 1e-12);
    double d = (m_up - m_low) / eta;
    // Box clipping.
    if (y[i] == 1) d = std::min(d, c - alpha[i]);
    else d = std::min(d, alpha[i]);
    if (y[j] == -1) d = std::min(d, c - alpha[j]);
    else d = std::min(d, alpha[j]);
    if (d <= 0) break;

    alpha[i] += y[i] * d;
    alpha[j] -= y[j] * d;
    for (long t = 0; t < n; ++t) {
      grad[t] += y[t] * d * ((*gram)(t, i) - (*gram)(t, j));
    }
  }

  BinarySvm model;
  model.weights = Vector::Zero(X.cols());
  for (long t = 0; t < n; ++t) {
    if (alpha[t] != 0.0) model.weights += alpha[t] * y[t] * X.row(t).transpose();
  }
  model.bias = (m_up + m_low) / 2.0;
  if (!std::isfinite(model.bias)) model.bias = 0.0;
  return model;
}

double svm_primal_objective(const Matrix& X, const std::vector<int>& y, double cost,
                            const Vector& w, double bias) {
  double hinge = 0.0;
  for (long t = 0; t < X.rows(); ++t) {
    hinge += std::max(0.0, 1.0 - y[t] * (X.row(t).dot(w) + bias));
  }
  return 0.5 * w.squaredNorm() + cost * hinge;
}

double svm_primal_objective_opt_bias(const Matrix& X, const std::vector<int>& y, double cost,
                                     const Vector& w) {
  // The hinge sum is piecewise linear in b with breakpoints y_t - w.x_t;
  // a minimizer lies at one of them.
  double best = std::numeric_limits<double>::infinity();
  for (long t = 0; t < X.rows(); ++t) {
    const double b = y[t] - X.row(t).dot(w);
    best = std::min(best, svm_primal_objective(X, y, cost, w, b));
  }
  best = std::min(best, svm_primal_objective(X, y, cost, w, 0.0));
  return best;
}

LinearOvrModel train_ovr(const Matrix& X, const std::vector<int>& labels, double cost,
                         uint64_t seed) {
  (void)seed;  // the solver is deterministic; kept for interface stability
  const long n = X.rows();
  if (static_cast<long>(labels.size()) != n) throw ValidationError("label count mismatch");
  std::set<int> class_set(labels.begin(), labels.end());
  if (class_set.size() < 2) throw ValidationError("one-vs-rest needs at least two classes");
  if (n < static_cast<long>(class_set.size())) {
    throw ValidationError("fewer samples than classes");
  }

  LinearOvrModel model;
  model.classes.assign(class_set.begin(), class_set.end());
  model.cost = cost;
  model.weights.resize(static_cast<long>(model.classes.size()), X.cols());
  model.bias.resize(static_cast<long>(model.classes.size()));

  const Matrix gram = X * X.transpose();
  SvmOptions opts;
  opts.cost = cost;
  for (size_t c = 0; c < model.classes.size(); ++c) {
    std::vector<int> y(n);
    for (long t = 0; t < n; ++t) y[t] = labels[t] == model.classes[c] ? 1 : -1;
    const BinarySvm svm = train_binary_svm(X, y, opts, &gram);
    model.weights.row(static_cast<long>(c)) = svm.weights.transpose();
    model.bias[static_cast<long>(c)] = svm.bias;
  }
  return model;
}

std::pair<int, Vector> predict(const LinearOvrModel& model, const Vector& x) {
  if (x.size() != model.weights.cols()) throw ValidationError("feature dimension mismatch");
  Vector scores = model.weights * x + model.bias;
  long best = 0;
  for (long c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return {model.classes[static_cast<size_t>(best)], scores};
}

}  // namespace ega
