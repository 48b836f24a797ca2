#include "ega/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "ega/error.hpp"
#include "ega/json_util.hpp"

using nlohmann::json;

namespace ega {
namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double log_normal_diag(const Vector& x, const Vector& mean, const Vector& var) {
  double acc = 0.0;
  for (long d = 0; d < x.size(); ++d) {
    const double z = x[d] - mean[d];
    acc += std::log(var[d]) + z * z / var[d];
  }
  return -0.5 * (x.size() * kLog2Pi + acc);
}

double logsumexp(const Vector& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (long i = 0; i < v.size(); ++i) acc += std::exp(v[i] - m);
  return m + std::log(acc);
}

void check_finite(const Vector& x) {
  if (!x.allFinite()) throw ValidationError("non-finite input vector");
}

// k-means++ seeding followed by a few Lloyd iterations; fully sequential so
// results are bit-identical for one seed.
Matrix kmeans_init(const Matrix& data, int k, std::mt19937_64& rng, int iters) {
  const long n = data.rows();
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Matrix centers(k, data.cols());
  centers.row(0) = data.row(static_cast<long>(unit(rng) * n) % n);
  Vector dist2 = (data.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = dist2.sum();
    long pick = 0;
    if (total > 0) {
      double target = unit(rng) * total;
      double acc = 0.0;
      for (long i = 0; i < n; ++i) {
        acc += dist2[i];
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<long>(unit(rng) * n) % n;
    }
    centers.row(c) = data.row(pick);
    dist2 = dist2.cwiseMin((data.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }

  std::vector<int> assign(n, 0);
  for (int it = 0; it < iters; ++it) {
    bool changed = false;
    for (long i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (data.row(i) - centers.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    for (int c = 0; c < k; ++c) {
      Vector sum = Vector::Zero(data.cols());
      long count = 0;
      for (long i = 0; i < n; ++i) {
        if (assign[i] == c) {
          sum += data.row(i).transpose();
          ++count;
        }
      }
      if (count > 0) centers.row(c) = (sum / count).transpose();
    }
    if (!changed) break;
  }
  return centers;
}

}  // namespace

Vector GmmCodebook::weighted_log_densities(const Vector& x) const {
  Vector out(components());
  for (int i = 0; i < components(); ++i) {
    out[i] = std::log(weights[i]) + log_normal_diag(x, means.row(i), variances.row(i));
  }
  return out;
}

double GmmCodebook::log_likelihood(const Vector& x) const {
  return logsumexp(weighted_log_densities(x));
}

Vector GmmCodebook::responsibilities(const Vector& x) const {
  check_finite(x);
  Vector logp = weighted_log_densities(x);
  const double lse = logsumexp(logp);
  Vector q(components());
  for (int i = 0; i < components(); ++i) q[i] = std::exp(logp[i] - lse);
  return q;
}

int GmmCodebook::hard_assign(const Vector& x) const {
  const Vector q = responsibilities(x);
  int best = 0;
  for (int i = 1; i < components(); ++i) {
    if (q[i] > q[best]) best = i;
  }
  return best;
}

Matrix GmmCodebook::sample(long n, uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(n, dim());
  for (long r = 0; r < n; ++r) {
    double u = unit(rng);
    int comp = components() - 1;
    double acc = 0.0;
    for (int i = 0; i < components(); ++i) {
      acc += weights[i];
      if (u <= acc) {
        comp = i;
        break;
      }
    }
    for (int d = 0; d < dim(); ++d) {
      out(r, d) = means(comp, d) + std::sqrt(variances(comp, d)) * normal(rng);
    }
  }
  return out;
}

json GmmCodebook::to_json() const {
  return {{"weights", vector_to_json(weights)},
          {"alphas", vector_to_json(alphas)},
          {"means", matrix_to_json(means)},
          {"variances", matrix_to_json(variances)}};
}

GmmCodebook GmmCodebook::from_json(const json& doc) {
  GmmCodebook cb;
  cb.weights = vector_from_json(doc.at("weights"));
  cb.alphas = vector_from_json(doc.at("alphas"));
  cb.means = matrix_from_json(doc.at("means"));
  cb.variances = matrix_from_json(doc.at("variances"));
  return cb;
}

GmmCodebook fit_gmm(const Matrix& data, int components, uint64_t seed, const EmOptions& opts,
                    FitDiagnostics* diag) {
  if (components < 1) throw ValidationError("component count must be >= 1");
  if (data.rows() < components) {
    throw ValidationError("need at least K=" + std::to_string(components) + " rows, got " +
                          std::to_string(data.rows()));
  }
  if (!data.allFinite()) throw ValidationError("non-finite training data");

  std::mt19937_64 rng(seed);

  // Optional deterministic subsampling of training rows.
  Matrix train;
  if (opts.subsample_fraction < 1.0) {
    long keep = std::lround(opts.subsample_fraction * data.rows());
    keep = std::clamp<long>(keep, components, data.rows());
    std::vector<long> idx(data.rows());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(keep);
    std::sort(idx.begin(), idx.end());
    train.resize(keep, data.cols());
    for (long r = 0; r < keep; ++r) train.row(r) = data.row(idx[r]);
  } else {
    train = data;
  }

  const long n = train.rows();
  const long dims = train.cols();
  const Vector data_mean = train.colwise().mean();
  Vector data_var(dims);
  for (long d = 0; d < dims; ++d) {
    data_var[d] = (train.col(d).array() - data_mean[d]).square().mean();
  }
  Vector floor(dims);
  for (long d = 0; d < dims; ++d) {
    floor[d] = std::max(opts.abs_floor, opts.floor_scale * data_var[d]);
  }

  GmmCodebook cb;
  cb.weights = Vector::Constant(components, 1.0 / components);
  cb.means = kmeans_init(train, components, rng, opts.kmeans_iters);
  cb.variances.resize(components, dims);
  for (int i = 0; i < components; ++i) {
    cb.variances.row(i) = data_var.cwiseMax(floor).transpose();
  }

  Matrix log_q(n, components);
  double prev_ll = -std::numeric_limits<double>::infinity();
  int iters = 0;
  for (int it = 0; it < opts.max_iters; ++it) {
    // E-step in log space.
    double ll = 0.0;
    for (long r = 0; r < n; ++r) {
      Vector logp = cb.weighted_log_densities(train.row(r));
      const double lse = logsumexp(logp);
      ll += lse;
      for (int i = 0; i < components; ++i) log_q(r, i) = logp[i] - lse;
    }
    ll /= n;
    if (diag) diag->log_likelihood.push_back(ll);
    iters = it + 1;
    if (it > 0 && std::abs(ll - prev_ll) <= opts.tol * std::max(1.0, std::abs(prev_ll))) break;
    prev_ll = ll;

    // M-step.
    for (int i = 0; i < components; ++i) {
      double nk = 0.0;
      Vector mean = Vector::Zero(dims);
      Vector sq = Vector::Zero(dims);
      for (long r = 0; r < n; ++r) {
        const double q = std::exp(log_q(r, i));
        nk += q;
        mean += q * train.row(r).transpose();
        sq += q * train.row(r).transpose().cwiseProduct(train.row(r).transpose());
      }
      nk = std::max(nk, 1e-300);
      mean /= nk;
      cb.means.row(i) = mean.transpose();
      for (long d = 0; d < dims; ++d) {
        cb.variances(i, d) = std::max(sq[d] / nk - mean[d] * mean[d], floor[d]);
      }
      cb.weights[i] = std::max(nk / n, 1e-12);
    }
    cb.weights /= cb.weights.sum();
  }

  if (diag) diag->iterations = iters;
  cb.alphas = cb.weights.array().log();
  if (!cb.means.allFinite() || !cb.variances.allFinite()) {
    throw NumericError("EM produced non-finite parameters");
  }
  return cb;
}

double SingleGaussian::log_density(const Vector& x) const {
  return log_normal_diag(x, mean, variances);
}

json SingleGaussian::to_json() const {
  return {{"mean", vector_to_json(mean)}, {"variances", vector_to_json(variances)}};
}

SingleGaussian SingleGaussian::from_json(const json& doc) {
  SingleGaussian g;
  g.mean = vector_from_json(doc.at("mean"));
  g.variances = vector_from_json(doc.at("variances"));
  return g;
}

SingleGaussian fit_single_gaussian(const Matrix& data, const Vector& floor) {
  if (data.rows() < 1) throw ValidationError("cannot fit a Gaussian to an empty cluster");
  if (!data.allFinite()) throw ValidationError("non-finite data");
  SingleGaussian g;
  g.mean = data.colwise().mean();
  g.variances.resize(data.cols());
  for (long d = 0; d < data.cols(); ++d) {
    const double v = (data.col(d).array() - g.mean[d]).square().mean();
    g.variances[d] = std::max(v, floor[d]);
  }
  return g;
}

json SensorCodebook::to_json() const {
  json clusters = json::array();
  for (const auto& g : per_cluster) clusters.push_back(g.to_json());
  return {{"per_cluster", clusters}, {"occupancy", occupancy}};
}

SensorCodebook SensorCodebook::from_json(const json& doc) {
  SensorCodebook cb;
  for (const auto& g : doc.at("per_cluster")) cb.per_cluster.push_back(SingleGaussian::from_json(g));
  cb.occupancy = doc.at("occupancy").get<std::vector<long>>();
  return cb;
}

}  // namespace ega
