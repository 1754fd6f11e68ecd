#include "selfcheck.hpp"

#include "oracles.hpp"

#include <intermarket/analysis.hpp>
#include <intermarket/learners.hpp>
#include <intermarket/metrics.hpp>
#include <intermarket/tuning.hpp>

#include <cmath>
#include <functional>
#include <ostream>
#include <random>

namespace im = intermarket;

namespace {

struct Check {
  const char* name;
  std::function<bool(std::mt19937_64&)> trial;
};

std::vector<int> random_labels(std::mt19937_64& rng, std::size_t n) {
  std::vector<int> y(n);
  for (auto& v : y) v = (rng() & 1) ? 1 : -1;
  return y;
}

im::Matrix random_matrix(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d) {
  std::normal_distribution<double> g;
  im::Matrix m(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = g(rng);
  }
  return m;
}

oracle::Rows to_rows(const im::Matrix& m) {
  oracle::Rows r(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) r[static_cast<std::size_t>(i)].assign(m.row(i).data(), m.row(i).data() + m.cols());
  return r;
}

bool metrics_trial(std::mt19937_64& rng) {
  const std::size_t n = 1 + rng() % 200;
  const auto y = random_labels(rng, n), p = random_labels(rng, n);
  const auto f1 = im::f1_scores(y, p);
  return im::accuracy(y, p) == oracle::accuracy(y, p) && std::abs(f1.macro - oracle::macro_f1(y, p)) <= 1e-15 &&
         std::abs(f1.weighted - oracle::weighted_f1(y, p)) <= 1e-15;
}

bool auc_trial(std::mt19937_64& rng) {
  const std::size_t n = 2 + rng() % 199;
  auto y = random_labels(rng, n);
  y[0] = 1;
  y[1] = -1;
  std::vector<double> s(n);
  for (auto& v : s) v = static_cast<double>(rng() % 20) / 7.0;  // many ties
  return std::abs(im::roc_auc(y, s) - oracle::pairwise_auc(y, s)) <= 1e-12;
}

bool ols_trial(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const int reps = 50;
  im::Matrix x(16 * reps, 5);
  im::Vector y(16 * reps);
  for (int r = 0; r < 16 * reps; ++r) {
    const int cell = r % 16;
    x(r, 0) = 1;
    for (int j = 0; j < 4; ++j) x(r, j + 1) = (cell >> j) & 1;
    y[r] = 0.5 + 0.01 * g(rng);
  }
  const auto fit = im::ols(x, y);
  const auto ref = oracle::normal_equations(to_rows(x), std::vector<double>(y.data(), y.data() + y.size()));
  for (std::size_t j = 0; j < 5; ++j) {
    if (std::abs(fit.coef[j] - ref.coef[j]) > 1e-10 || std::abs(fit.se[j] - ref.se[j]) > 1e-10) return false;
  }
  return true;
}

bool t_cdf_trial(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> t(-8, 8), df(1, 60);
  const double tv = t(rng), dv = df(rng);
  return std::abs(im::t_cdf(tv, dv) - oracle::t_cdf_quadrature(tv, dv)) <= 1e-10;
}

bool tree_root_trial(std::mt19937_64& rng) {
  const auto x = random_matrix(rng, 20, 3);
  auto y = random_labels(rng, 20);
  y[0] = 1;
  y[1] = -1;
  const auto tree = im::fit_decision_tree(x, y, {}, rng());
  const auto& root = tree.nodes().front();
  return std::abs(root.split_impurity - oracle::best_gini_split(to_rows(x), y)) <= 1e-12;
}

bool gradient_trial(std::mt19937_64& rng) {
  const auto x = random_matrix(rng, 30, 4);
  const auto y = random_labels(rng, 30);
  std::normal_distribution<double> g;
  im::Vector beta(4);
  for (auto& b : beta) b = g(rng);
  const double b0 = g(rng);
  const double C = std::pow(10.0, static_cast<double>(rng() % 7) - 3.0);
  const auto grad = im::logistic_gradient(x, y, beta, b0, C);
  const auto fd = oracle::logistic_gradient_fd(to_rows(x), y, std::vector<double>(beta.data(), beta.data() + 4), b0, C);
  for (std::size_t j = 0; j < fd.size(); ++j) {
    const double scale = std::max(1.0, std::abs(fd[j]));
    if (std::abs(grad[static_cast<Eigen::Index>(j)] - fd[j]) / scale > 1e-5) return false;
  }
  return true;
}

bool knn_trial(std::mt19937_64& rng) {
  const auto x = random_matrix(rng, 60, 4);
  const auto y = random_labels(rng, 60);
  const auto q = random_matrix(rng, 1, 4);
  const int metric = static_cast<int>(rng() % 3);
  const std::size_t k = 1 + rng() % 20;
  const auto ranked = im::nearest_neighbors(x, q.data(), k, static_cast<im::KnnMetric>(metric));
  const std::vector<double> qv(q.data(), q.data() + 4);
  const auto ref = oracle::knn_indices(to_rows(x), qv, k, static_cast<oracle::Metric>(metric));
  for (std::size_t i = 0; i < k; ++i) {
    if (ranked[i].index != ref[i]) return false;
  }
  const double vote = im::knn_vote(ranked, y, k, im::KnnWeights::Uniform);
  return (vote >= 0.5 ? 1 : -1) == oracle::knn_uniform_vote(y, ref);
}

bool folds_trial(std::mt19937_64& rng) {
  const int k = 2 + static_cast<int>(rng() % 9);
  const std::size_t n = static_cast<std::size_t>(k + 1) + rng() % 500;
  const auto folds = im::make_folds(n, k);
  const auto ref = oracle::expanding_folds(n, k);
  for (int i = 0; i < k; ++i) {
    const auto& f = folds.folds[static_cast<std::size_t>(i)];
    const auto& r = ref[static_cast<std::size_t>(i)];
    if (f.train.begin != 0 || f.train.end != r.train_end || f.test.begin != r.test_begin || f.test.end != r.test_end) {
      return false;
    }
    if (f.train.end == 0 || f.train.end - 1 >= f.test.begin) return false;
  }
  return true;
}

}  // namespace

int run_selfcheck(std::uint64_t seed, int trials, std::ostream& out) {
  const std::vector<Check> checks{
      {"accuracy / macro F1 / weighted F1 vs confusion counting", metrics_trial},
      {"rank AUC vs pairwise count", auc_trial},
      {"OLS coefficients and SEs vs normal equations", ols_trial},
      {"t CDF vs density quadrature", t_cdf_trial},
      {"tree root split vs exhaustive search", tree_root_trial},
      {"logistic gradient vs central differences", gradient_trial},
      {"kNN neighbours vs brute force", knn_trial},
      {"time-series folds vs backward construction", folds_trial},
  };
  std::mt19937_64 rng(seed);
  int passed_checks = 0;
  for (const auto& c : checks) {
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
      try {
        ok += c.trial(rng) ? 1 : 0;
      } catch (const std::exception&) {
      }
    }
    out << (ok == trials ? "PASS " : "FAIL ") << c.name << " (" << ok << "/" << trials << ")\n";
    passed_checks += ok == trials;
  }
  out << passed_checks << " passed, " << (static_cast<int>(checks.size()) - passed_checks) << " failed\n";
  return passed_checks == static_cast<int>(checks.size()) ? 0 : 1;
}
