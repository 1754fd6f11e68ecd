#pragma once

// Reference implementations used to check the library. They share no code
// with it and favour the most direct formulation over speed.

#include <cstddef>
#include <string>
#include <vector>

namespace oracle {

using Rows = std::vector<std::vector<double>>;

// --- metrics -------------------------------------------------------------------

struct Confusion {
  long tp = 0, fp = 0, tn = 0, fn = 0;
};
Confusion count_confusion(const std::vector<int>& y, const std::vector<int>& p);
double accuracy(const std::vector<int>& y, const std::vector<int>& p);
/// F1 of `cls` from precision and recall; undefined ratios count as 0.
double class_f1(const std::vector<int>& y, const std::vector<int>& p, int cls);
double macro_f1(const std::vector<int>& y, const std::vector<int>& p);
double weighted_f1(const std::vector<int>& y, const std::vector<int>& p);
/// All positive/negative pairs, ties counted half.
double pairwise_auc(const std::vector<int>& y, const std::vector<double>& s);

// --- statistics ----------------------------------------------------------------

struct OlsFit {
  std::vector<double> coef;
  std::vector<double> se;
  double sigma2 = 0.0;
};
/// Normal equations with Gauss-Jordan inversion of X'X.
OlsFit normal_equations(const Rows& x, const std::vector<double>& y);
/// Student-t CDF by adaptive Simpson quadrature of the density.
double t_cdf_quadrature(double t, double df);

// --- learners ------------------------------------------------------------------

/// Minimum weighted Gini impurity over every feature and every threshold between
/// consecutive distinct values, subject to a minimum leaf size.
double best_gini_split(const Rows& x, const std::vector<int>& y, int min_leaf = 1);

/// Logistic objective written from its definition: (1/C) R(beta) + sum log(1 + exp(-y f)).
double logistic_objective(const Rows& x, const std::vector<int>& y, const std::vector<double>& beta,
                          double intercept, bool l1, double C);
/// Central differences of logistic_objective (l2) over [beta; intercept].
std::vector<double> logistic_gradient_fd(const Rows& x, const std::vector<int>& y, const std::vector<double>& beta,
                                         double intercept, double C, double h = 1e-6);

enum class Metric { L1, L2, Cosine };
double distance(const std::vector<double>& a, const std::vector<double>& b, Metric m);
/// Indices of the k nearest rows, full stable sort by distance then index.
std::vector<std::size_t> knn_indices(const Rows& train, const std::vector<double>& q, std::size_t k, Metric m);
/// Majority of the neighbours' labels (uniform weights), ties to +1.
int knn_uniform_vote(const std::vector<int>& labels, const std::vector<std::size_t>& idx);

// --- data preparation ----------------------------------------------------------

/// (x_t - x_{t-1}) / x_{t-1}.
std::vector<double> pct_change(const std::vector<double>& x);
/// label[t] = +1 iff r[t+1] > 0.
std::vector<int> next_day_labels(const std::vector<double>& returns);
/// Sorted common elements of every list.
std::vector<long> intersect_all(const std::vector<std::vector<long>>& lists);

// --- folds ---------------------------------------------------------------------

struct SimpleFold {
  std::size_t train_end, test_begin, test_end;
};
/// Expanding-window folds built by counting backwards from the end.
std::vector<SimpleFold> expanding_folds(std::size_t n, int k);

}  // namespace oracle
