// Test-only oracles, independent of the implementation paths they check.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "ega/gmm.hpp"
#include "ega/linear_svm.hpp"
#include "ega/mfv.hpp"
#include "ega/types.hpp"

namespace oracle {

inline ega::Matrix random_matrix(long rows, long cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  ega::Matrix m(rows, cols);
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c) m(r, c) = normal(rng);
  return m;
}

inline ega::GmmCodebook random_codebook(int k, int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.2, 1.0);
  ega::GmmCodebook cb;
  cb.alphas.resize(k);
  for (int i = 0; i < k; ++i) cb.alphas[i] = unit(rng);
  ega::Vector expv = cb.alphas.array().exp();
  cb.weights = expv / expv.sum();
  cb.means = random_matrix(k, dim, rng, 2.0);
  cb.variances.resize(k, dim);
  for (int i = 0; i < k; ++i)
    for (int d = 0; d < dim; ++d) cb.variances(i, d) = unit(rng) + 0.3;
  return cb;
}

inline ega::SensorCodebook random_sensor_codebook(int k, int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.2, 1.0);
  ega::SensorCodebook cb;
  for (int i = 0; i < k; ++i) {
    ega::SingleGaussian g;
    g.mean = random_matrix(1, dim, rng, 2.0).row(0);
    g.variances.resize(dim);
    for (int d = 0; d < dim; ++d) g.variances[d] = unit(rng) + 0.3;
    cb.per_cluster.push_back(g);
    cb.occupancy.push_back(1);
  }
  return cb;
}

// Mean log-likelihood computed from raw parameter blocks; weights are derived
// from alphas via softmax so alpha perturbations renormalize naturally.
inline double gmm_mean_loglik(const ega::Vector& alphas, const ega::Matrix& means,
                              const ega::Matrix& variances, const ega::Matrix& features) {
  const int k = static_cast<int>(alphas.size());
  const long dim = means.cols();
  ega::Vector expv = alphas.array().exp();
  ega::Vector theta = expv / expv.sum();
  double total = 0.0;
  for (long n = 0; n < features.rows(); ++n) {
    double best = -1e300;
    ega::Vector logp(k);
    for (int i = 0; i < k; ++i) {
      double quad = 0.0, logdet = 0.0;
      for (long d = 0; d < dim; ++d) {
        const double z = features(n, d) - means(i, d);
        quad += z * z / variances(i, d);
        logdet += std::log(2.0 * M_PI * variances(i, d));
      }
      logp[i] = std::log(theta[i]) - 0.5 * (logdet + quad);
      best = std::max(best, logp[i]);
    }
    double acc = 0.0;
    for (int i = 0; i < k; ++i) acc += std::exp(logp[i] - best);
    total += best + std::log(acc);
  }
  return total / features.rows();
}

// Central finite differences of the mean log-likelihood w.r.t. (alpha, mu,
// inverse variances), laid out to match encode_fv's block order.
inline ega::Vector fd_fisher_gradient(const ega::GmmCodebook& cb, const ega::Matrix& features,
                                      double h = 1e-5) {
  const int k = cb.components();
  const int dim = cb.dim();
  ega::Vector grad((1 + 2 * dim) * k);
  long idx = 0;
  for (int i = 0; i < k; ++i) {
    ega::Vector a_plus = cb.alphas, a_minus = cb.alphas;
    a_plus[i] += h;
    a_minus[i] -= h;
    grad[idx++] = (gmm_mean_loglik(a_plus, cb.means, cb.variances, features) -
                   gmm_mean_loglik(a_minus, cb.means, cb.variances, features)) /
                  (2 * h);
  }
  for (int i = 0; i < k; ++i) {
    for (int d = 0; d < dim; ++d) {
      ega::Matrix m_plus = cb.means, m_minus = cb.means;
      m_plus(i, d) += h;
      m_minus(i, d) -= h;
      grad[idx++] = (gmm_mean_loglik(cb.alphas, m_plus, cb.variances, features) -
                     gmm_mean_loglik(cb.alphas, m_minus, cb.variances, features)) /
                    (2 * h);
    }
  }
  for (int i = 0; i < k; ++i) {
    for (int d = 0; d < dim; ++d) {
      // Perturb the inverse variance lambda = 1/var.
      ega::Matrix v_plus = cb.variances, v_minus = cb.variances;
      const double lambda = 1.0 / cb.variances(i, d);
      v_plus(i, d) = 1.0 / (lambda + h);
      v_minus(i, d) = 1.0 / (lambda - h);
      grad[idx++] = (gmm_mean_loglik(cb.alphas, cb.means, v_plus, features) -
                     gmm_mean_loglik(cb.alphas, cb.means, v_minus, features)) /
                    (2 * h);
    }
  }
  return grad;
}

// Mean log-likelihood under the joint tuple model
// p(f) = sum_i theta_i N(x; mu_xi, var_xi) N(s; mu_si, var_si).
inline double joint_mean_loglik(const ega::Vector& alphas, const ega::Matrix& vmeans,
                                const ega::Matrix& vvars, const ega::Matrix& smeans,
                                const ega::Matrix& svars,
                                const std::vector<ega::PairedFeature>& pairs) {
  const int k = static_cast<int>(alphas.size());
  ega::Vector expv = alphas.array().exp();
  ega::Vector theta = expv / expv.sum();
  double total = 0.0;
  for (const auto& p : pairs) {
    ega::Vector logp(k);
    double best = -1e300;
    for (int i = 0; i < k; ++i) {
      double acc = 0.0;
      for (long d = 0; d < p.video.size(); ++d) {
        const double z = p.video[d] - vmeans(i, d);
        acc += std::log(2.0 * M_PI * vvars(i, d)) + z * z / vvars(i, d);
      }
      for (long d = 0; d < p.sensor.size(); ++d) {
        const double z = p.sensor[d] - smeans(i, d);
        acc += std::log(2.0 * M_PI * svars(i, d)) + z * z / svars(i, d);
      }
      logp[i] = std::log(theta[i]) - 0.5 * acc;
      best = std::max(best, logp[i]);
    }
    double sum = 0.0;
    for (int i = 0; i < k; ++i) sum += std::exp(logp[i] - best);
    total += best + std::log(sum);
  }
  return total / static_cast<double>(pairs.size());
}

// FD gradient of the joint model matching encode_mfv_raw's five-block layout.
inline ega::Vector fd_mfv_gradient(const ega::GmmCodebook& video,
                                   const ega::SensorCodebook& sensor,
                                   const std::vector<ega::PairedFeature>& pairs,
                                   double h = 1e-5) {
  const int k = video.components();
  const int vdim = video.dim();
  const int sdim = sensor.dim();
  ega::Matrix smeans(k, sdim), svars(k, sdim);
  for (int i = 0; i < k; ++i) {
    smeans.row(i) = sensor.per_cluster[i].mean.transpose();
    svars.row(i) = sensor.per_cluster[i].variances.transpose();
  }
  auto eval = [&](const ega::Vector& a, const ega::Matrix& vm, const ega::Matrix& vv,
                  const ega::Matrix& sm, const ega::Matrix& sv) {
    return joint_mean_loglik(a, vm, vv, sm, sv, pairs);
  };

  ega::Vector grad((1 + 2 * (vdim + sdim)) * k);
  long idx = 0;
  for (int i = 0; i < k; ++i) {
    ega::Vector ap = video.alphas, am = video.alphas;
    ap[i] += h;
    am[i] -= h;
    grad[idx++] = (eval(ap, video.means, video.variances, smeans, svars) -
                   eval(am, video.means, video.variances, smeans, svars)) /
                  (2 * h);
  }
  for (int i = 0; i < k; ++i)
    for (int d = 0; d < vdim; ++d) {
      ega::Matrix mp = video.means, mm = video.means;
      mp(i, d) += h;
      mm(i, d) -= h;
      grad[idx++] = (eval(video.alphas, mp, video.variances, smeans, svars) -
                     eval(video.alphas, mm, video.variances, smeans, svars)) /
                    (2 * h);
    }
  for (int i = 0; i < k; ++i)
    for (int d = 0; d < vdim; ++d) {
      ega::Matrix vp = video.variances, vm = video.variances;
      const double lambda = 1.0 / video.variances(i, d);
      vp(i, d) = 1.0 / (lambda + h);
      vm(i, d) = 1.0 / (lambda - h);
      grad[idx++] = (eval(video.alphas, video.means, vp, smeans, svars) -
                     eval(video.alphas, video.means, vm, smeans, svars)) /
                    (2 * h);
    }
  for (int i = 0; i < k; ++i)
    for (int d = 0; d < sdim; ++d) {
      ega::Matrix sp = smeans, sm = smeans;
      sp(i, d) += h;
      sm(i, d) -= h;
      grad[idx++] = (eval(video.alphas, video.means, video.variances, sp, svars) -
                     eval(video.alphas, video.means, video.variances, sm, svars)) /
                    (2 * h);
    }
  for (int i = 0; i < k; ++i)
    for (int d = 0; d < sdim; ++d) {
      ega::Matrix sp = svars, sm = svars;
      const double lambda = 1.0 / svars(i, d);
      sp(i, d) = 1.0 / (lambda + h);
      sm(i, d) = 1.0 / (lambda - h);
      grad[idx++] = (eval(video.alphas, video.means, video.variances, smeans, sp) -
                     eval(video.alphas, video.means, video.variances, smeans, sm)) /
                    (2 * h);
    }
  return grad;
}

inline bool close_rel(const ega::Vector& a, const ega::Vector& b, double rel, double abs_tol) {
  if (a.size() != b.size()) return false;
  for (long i = 0; i < a.size(); ++i) {
    const double diff = std::abs(a[i] - b[i]);
    if (diff > abs_tol + rel * std::max(std::abs(a[i]), std::abs(b[i]))) return false;
  }
  return true;
}

// Projected gradient on the SVM dual with the box + hyperplane constraint
// set. Projection solves sum_i y_i clip(v_i - lambda y_i, 0, C) = 0 by
// bisection (the left side is monotone in lambda).
inline ega::Vector dual_pg_svm(const ega::Matrix& X, const std::vector<int>& y, double cost,
                               int iters = 20000) {
  const long n = X.rows();
  ega::Matrix Q(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) Q(i, j) = y[i] * y[j] * X.row(i).dot(X.row(j));

  auto project = [&](ega::Vector v) {
    double lo = -1e6, hi = 1e6;
    auto constraint = [&](double lambda) {
      double acc = 0.0;
      for (long i = 0; i < n; ++i) {
        const double a = std::clamp(v[i] - lambda * y[i], 0.0, cost);
        acc += y[i] * a;
      }
      return acc;
    };
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (constraint(mid) > 0) lo = mid;
      else hi = mid;
    }
    const double lambda = 0.5 * (lo + hi);
    for (long i = 0; i < n; ++i) v[i] = std::clamp(v[i] - lambda * y[i], 0.0, cost);
    return v;
  };

  const double lip = std::max(Q.norm(), 1e-8);
  ega::Vector alpha = project(ega::Vector::Zero(n));
  for (int it = 0; it < iters; ++it) {
    ega::Vector grad = Q * alpha - ega::Vector::Ones(n);
    alpha = project(alpha - grad / lip);
  }
  return alpha;
}

// Best primal objective achieved by the projected-gradient dual solution.
inline double pg_svm_best_objective(const ega::Matrix& X, const std::vector<int>& y, double cost,
                                    int iters = 20000) {
  const ega::Vector alpha = dual_pg_svm(X, y, cost, iters);
  ega::Vector w = ega::Vector::Zero(X.cols());
  for (long i = 0; i < X.rows(); ++i) w += alpha[i] * y[i] * X.row(i).transpose();
  return ega::svm_primal_objective_opt_bias(X, y, cost, w);
}

}  // namespace oracle
