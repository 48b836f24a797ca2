// End-to-end verification suite. Each case prints one summary line so the
// criteria can be scanned from the test log.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <random>

#include "ega/eval.hpp"
#include "ega/fisher.hpp"
#include "ega/gmm.hpp"
#include "ega/linear_svm.hpp"
#include "ega/mfv.hpp"
#include "ega/pipeline.hpp"
#include "ega/synthetic.hpp"

#include "oracles.hpp"

using ega::Matrix;
using ega::Vector;

namespace {

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[criterion %2d] %s: %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

ega::Dataset make_dataset(const ega::SyntheticSpec& spec, uint64_t seed) {
  ega::Dataset ds;
  ds.clips = ega::generate_synthetic(spec, seed);
  ds.manifest.categories = ega::synthetic_categories(spec);
  return ds;
}

}  // namespace

TEST_CASE("1: gradient blocks match finite differences") {
  Stopwatch timer;
  bool pass = true;
  std::mt19937_64 rng(100);

  for (int k = 1; k <= 4 && pass; ++k) {
    for (int dim = 1; dim <= 5 && pass; ++dim) {
      const auto cb = oracle::random_codebook(k, dim, rng);
      const Matrix feats = oracle::random_matrix(10, dim, rng, 2.0);
      const auto fv = ega::encode_fv(cb, feats);
      if (!oracle::close_rel(fv.values, oracle::fd_fisher_gradient(cb, feats), 1e-5, 1e-9)) {
        pass = false;
      }
      CHECK(pass);
    }
  }

  // Joint-model gradients: all five blocks, several shapes.
  for (int k = 1; k <= 3 && pass; ++k) {
    for (int vdim : {1, 3}) {
      for (int sdim : {1, 2}) {
        const auto video = oracle::random_codebook(k, vdim, rng);
        const auto sensor = oracle::random_sensor_codebook(k, sdim, rng);
        std::vector<ega::PairedFeature> pairs;
        for (int n = 0; n < 10; ++n) {
          ega::PairedFeature p;
          p.video = oracle::random_matrix(1, vdim, rng, 2.0).row(0);
          p.sensor = oracle::random_matrix(1, sdim, rng, 2.0).row(0);
          pairs.push_back(p);
        }
        const auto fv = ega::encode_mfv_raw(video, sensor, pairs);
        if (!oracle::close_rel(fv.values, oracle::fd_mfv_gradient(video, sensor, pairs), 1e-5,
                               1e-9)) {
          pass = false;
        }
        CHECK(pass);
      }
    }
  }

  const bool in_time = timer.seconds() < 30.0;
  CHECK(in_time);
  report(1, pass && in_time,
         "finite-difference agreement for all gradient blocks, " +
             std::to_string(timer.seconds()) + "s");
}

TEST_CASE("2: score of model-generated samples is near zero") {
  Stopwatch timer;
  std::mt19937_64 rng(200);
  const int k = 3, dim = 4;
  const auto cb = oracle::random_codebook(k, dim, rng);
  const long m = 5000;
  const Matrix samples = cb.sample(m, 42);
  const auto fv = ega::encode_fv(cb, samples);

  const double bound = 5.0 / std::sqrt(static_cast<double>(m));
  const double alpha_mag = fv.values.head(k).cwiseAbs().mean();
  const double mu_mag = fv.values.segment(k, k * dim).cwiseAbs().mean();
  const double var_mag = fv.values.tail(k * dim).cwiseAbs().mean();
  const bool pass = alpha_mag < bound && mu_mag < bound && var_mag < bound;
  CHECK(alpha_mag < bound);
  CHECK(mu_mag < bound);
  CHECK(var_mag < bound);
  const bool in_time = timer.seconds() < 10.0;
  CHECK(in_time);
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "block magnitudes %.4f / %.4f / %.4f < %.4f, %.1fs", alpha_mag, mu_mag,
                var_mag, bound, timer.seconds());
  report(2, pass && in_time, detail);
}

TEST_CASE("3: encoding lengths follow the size formulas") {
  std::mt19937_64 rng(300);
  std::uniform_int_distribution<int> ks(1, 25), dims(1, 12);
  bool pass = true;
  for (int trial = 0; trial < 20; ++trial) {
    const int k = trial == 0 ? 25 : ks(rng);
    const int dim = dims(rng);
    const int sdim = dims(rng);

    const auto cb = oracle::random_codebook(k, dim, rng);
    const auto fv = ega::encode_fv(cb, oracle::random_matrix(4, dim, rng));
    if (fv.size() != (1 + 2 * dim) * k) pass = false;

    const auto sensor = oracle::random_sensor_codebook(k, sdim, rng);
    std::vector<ega::PairedFeature> pairs(3);
    for (auto& p : pairs) {
      p.video = oracle::random_matrix(1, dim, rng).row(0);
      p.sensor = oracle::random_matrix(1, sdim, rng).row(0);
    }
    // d in the (2D+2d+3)K identity counts the pre-enhancement dims.
    const int d = sdim - 1;
    if (ega::encode_mfv(cb, sensor, pairs).size() != (2 * dim + 2 * d + 3) * k) pass = false;
    CHECK(pass);
  }
  report(3, pass, "FV and joint-FV lengths exact over 20 random configurations (incl. K=25)");
}

TEST_CASE("4: normalization yields unit vectors, zero preserved") {
  std::mt19937_64 rng(400);
  bool pass = true;
  for (int trial = 0; trial < 1000; ++trial) {
    ega::FisherVector fv;
    fv.values = oracle::random_matrix(1, 1 + trial % 40, rng, 3.0).row(0);
    if (trial % 50 == 0) fv.values.setZero();
    const auto out = ega::normalize_fv(fv);
    const double norm = out.values.norm();
    const bool ok = (fv.values.cwiseAbs().maxCoeff() == 0.0) ? (norm == 0.0)
                                                             : (std::abs(norm - 1.0) < 1e-9);
    if (!ok) pass = false;
    CHECK(ok);
  }
  report(4, pass, "1000 random vectors normalized to unit norm (zero vector preserved)");
}

TEST_CASE("5: EM is monotone and seed-deterministic") {
  bool pass = true;
  for (int ds = 0; ds < 5; ++ds) {
    std::mt19937_64 rng(500 + ds);
    const Matrix data = oracle::random_matrix(150 + 30 * ds, 2 + ds % 3, rng, 2.0);

    ega::FitDiagnostics diag;
    const auto a = ega::fit_gmm(data, 3 + ds % 2, 7 * ds + 1, {}, &diag);
    for (size_t i = 1; i < diag.log_likelihood.size(); ++i) {
      if (diag.log_likelihood[i] < diag.log_likelihood[i - 1] - 1e-9) pass = false;
    }
    const auto b = ega::fit_gmm(data, 3 + ds % 2, 7 * ds + 1);
    if ((a.means - b.means).cwiseAbs().maxCoeff() != 0.0 ||
        (a.variances - b.variances).cwiseAbs().maxCoeff() != 0.0 ||
        (a.weights - b.weights).cwiseAbs().maxCoeff() != 0.0) {
      pass = false;
    }
    CHECK(pass);
  }
  report(5, pass, "5 datasets: log-likelihood monotone, refits bit-identical");
}

TEST_CASE("6: temporal enhancement separates order-defined classes") {
  Stopwatch timer;
  double fvs_sum = 0.0, tfvs_sum = 0.0;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const auto ds = make_dataset(ega::order_distinct_spec(), seed);
    ega::RunConfig cfg;
    cfg.folds = 5;
    cfg.seed = seed;

    cfg.method = "fvs";
    fvs_sum += ega::run_method(ds, cfg).overall_accuracy;
    cfg.method = "tfvs";
    tfvs_sum += ega::run_method(ds, cfg).overall_accuracy;
  }
  const double fvs_avg = fvs_sum / 5.0, tfvs_avg = tfvs_sum / 5.0;
  const bool margin_ok = (tfvs_avg - fvs_avg) >= 0.20;
  const bool level_ok = tfvs_avg >= 0.90;
  const bool in_time = timer.seconds() < 120.0;
  CHECK(margin_ok);
  CHECK(level_ok);
  CHECK(in_time);
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "plain %.1f%% vs temporal-enhanced %.1f%% (margin %.1f pts), %.1fs",
                100 * fvs_avg, 100 * tfvs_avg, 100 * (tfvs_avg - fvs_avg), timer.seconds());
  report(6, margin_ok && level_ok && in_time, detail);
}

TEST_CASE("7: joint encoding beats the single- and concatenated baselines") {
  Stopwatch timer;
  double fvv_sum = 0.0, concat_sum = 0.0, mfv_sum = 0.0;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const auto ds = make_dataset(ega::joint_fusion_spec(), seed);
    ega::RunConfig cfg;
    cfg.folds = 5;
    cfg.seed = seed;
    cfg.video_gaussians = 4;
    cfg.video_subsample = 1.0;

    cfg.method = "fvv";
    fvv_sum += ega::run_method(ds, cfg).overall_accuracy;
    cfg.method = "fvv+tfvs";
    concat_sum += ega::run_method(ds, cfg).overall_accuracy;
    cfg.method = "mfv";
    mfv_sum += ega::run_method(ds, cfg).overall_accuracy;
  }
  const double fvv = fvv_sum / 5.0, concat = concat_sum / 5.0, mfv = mfv_sum / 5.0;
  const bool beats_fvv = mfv - fvv >= 0.05;
  const bool beats_concat = mfv - concat >= 0.05;
  const bool in_time = timer.seconds() < 300.0;
  CHECK(beats_fvv);
  CHECK(beats_concat);
  CHECK(in_time);
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "video-only %.1f%%, concatenation %.1f%%, joint %.1f%%, %.1fs", 100 * fvv,
                100 * concat, 100 * mfv, timer.seconds());
  report(7, beats_fvv && beats_concat && in_time, detail);
}

TEST_CASE("8: shuffled labels stay at chance for every method") {
  Stopwatch timer;
  auto spec = ega::chance_spec(20);
  spec.clips_per_class = 5;
  auto ds = make_dataset(spec, 0);
  // Break any feature/label association while keeping class counts.
  std::vector<int> labels;
  for (const auto& clip : ds.clips) labels.push_back(clip.label);
  std::mt19937_64 rng(808);
  std::shuffle(labels.begin(), labels.end(), rng);
  for (size_t i = 0; i < ds.clips.size(); ++i) ds.clips[i].label = labels[i];

  bool pass = true;
  std::string worst;
  for (const char* method :
       {"fvs", "tfvs", "fvv", "fvv+fvs", "fvv+tfvs", "mfv", "stat-baseline"}) {
    ega::RunConfig cfg;
    cfg.method = method;
    cfg.folds = 5;
    cfg.video_gaussians = 4;
    cfg.video_subsample = 1.0;
    const double acc = ega::run_method(ds, cfg).overall_accuracy;
    INFO("method ", method, " accuracy ", acc);
    if (acc > 0.15) {
      pass = false;
      worst = method;
    }
    CHECK(acc <= 0.15);
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "20 shuffled classes, every method within [0, 0.15]%s%s, %.1fs",
                pass ? "" : "; failed: ", worst.c_str(), timer.seconds());
  report(8, pass, detail);
}

TEST_CASE("9: max-margin objective matches a slow projected-gradient solver") {
  std::mt19937_64 rng(900);
  bool pass = true;
  for (int trial = 0; trial < 10; ++trial) {
    std::uniform_int_distribution<int> ns(8, 30), ds(1, 5);
    const int n = ns(rng), dim = ds(rng);
    const Matrix X = oracle::random_matrix(n, dim, rng, 2.0);
    std::vector<int> y(n);
    int positives = 0;
    for (int i = 0; i < n; ++i) {
      y[i] = (oracle::random_matrix(1, 1, rng)(0, 0) > 0) ? 1 : -1;
      positives += y[i] > 0;
    }
    if (positives == 0) y[0] = 1;
    if (positives == n) y[0] = -1;

    const auto svm = ega::train_binary_svm(X, y, {});
    const double got = ega::svm_primal_objective_opt_bias(X, y, 10.0, svm.weights);
    const double want = oracle::pg_svm_best_objective(X, y, 10.0, 50000);
    const bool ok = std::abs(got - want) <= 1e-3 * std::max(1.0, std::abs(want));
    INFO("trial ", trial, ": got ", got, " want ", want);
    CHECK(ok);
    if (!ok) pass = false;
  }
  report(9, pass, "10 random instances: objective within 1e-3 of the slow solver");
}

TEST_CASE("10: window/cluster sweep emits the full grid") {
  Stopwatch timer;
  auto spec = ega::separable_spec(2, 5.0);
  spec.clips_per_class = 4;
  spec.length = 60;
  const auto ds = make_dataset(spec, 0);

  ega::RunConfig cfg;
  cfg.folds = 2;

  const std::vector<int> windows = {1, 2, 3, 4, 5};
  const std::vector<int> clusters = {2, 3, 4, 5, 6};
  const auto grid = ega::sweep_grid(ds, cfg, windows, clusters);

  bool pass = grid.at("windows").get<std::vector<int>>() == windows &&
              grid.at("clusters").get<std::vector<int>>() == clusters &&
              grid.at("cells").size() == 25;
  size_t cell_idx = 0;
  for (int w : windows) {
    for (int k : clusters) {
      const auto& cell = grid.at("cells").at(cell_idx++);
      if (cell.at("window").get<int>() != w || cell.at("clusters").get<int>() != k ||
          !cell.contains("fvs_accuracy") || !cell.contains("tfvs_accuracy")) {
        pass = false;
      }
    }
  }
  CHECK(pass);
  char detail[120];
  std::snprintf(detail, sizeof(detail), "5x5 grid with per-cell accuracies, %.1fs",
                timer.seconds());
  report(10, pass, detail);
}
