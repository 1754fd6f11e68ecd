#include "intermarket/learners/knn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace intermarket {

double knn_distance(const double* a, const double* b, std::size_t d, KnnMetric metric) {
  switch (metric) {
    case KnnMetric::L1: {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += std::abs(a[j] - b[j]);
      return s;
    }
    case KnnMetric::L2: {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
      return std::sqrt(s);
    }
    case KnnMetric::Cosine: {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        dot += a[j] * b[j];
        na += a[j] * a[j];
        nb += b[j] * b[j];
      }
      if (na == 0.0 || nb == 0.0) return knn_distance(a, b, d, KnnMetric::L2);
      // Clamp away rounding below zero so identical directions give d = 0.
      return std::max(0.0, 1.0 - dot / (std::sqrt(na) * std::sqrt(nb)));
    }
  }
  return 0.0;
}

std::vector<Neighbor> nearest_neighbors(const MatrixRef& train, const double* query, std::size_t k,
                                        KnnMetric metric) {
  const auto n = static_cast<std::size_t>(train.rows());
  const auto d = static_cast<std::size_t>(train.cols());
  std::vector<Neighbor> all(n);
  for (std::size_t i = 0; i < n; ++i) {
    all[i] = {knn_distance(train.row(static_cast<Eigen::Index>(i)).data(), query, d, metric), i};
  }
  k = std::min(k, n);
  auto less = [](const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), less);
  all.resize(k);
  return all;
}

double knn_vote(std::span<const Neighbor> ranked, std::span<const int> labels, std::size_t k,
                KnnWeights weights) {
  k = std::min(k, ranked.size());
  double pos = 0.0, total = 0.0;
  if (weights == KnnWeights::Distance) {
    bool exact = false;
    for (std::size_t i = 0; i < k; ++i) {
      if (ranked[i].distance == 0.0) {
        exact = true;
        total += 1.0;
        if (labels[ranked[i].index] > 0) pos += 1.0;
      }
    }
    if (exact) return pos / total;
    for (std::size_t i = 0; i < k; ++i) {
      const double w = 1.0 / ranked[i].distance;
      total += w;
      if (labels[ranked[i].index] > 0) pos += w;
    }
    return pos / total;
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (labels[ranked[i].index] > 0) pos += 1.0;
  }
  return pos / static_cast<double>(k);
}

KnnModel::KnnModel(Matrix train_x, std::vector<int> train_y, KnnParams params)
    : train_x_(std::move(train_x)), train_y_(std::move(train_y)), params_(params) {}

std::vector<double> KnnModel::score(const Samples& x) const {
  if (x.features.cols() != train_x_.cols()) throw Error(ErrorCode::InvalidParameter, "feature count mismatch");
  const auto k = static_cast<std::size_t>(params_.n_neighbors);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto ranked = nearest_neighbors(train_x_, x.features.row(static_cast<Eigen::Index>(i)).data(), k,
                                          params_.metric);
    out[i] = knn_vote(ranked, train_y_, k, params_.weights);
  }
  return out;
}

std::vector<int> KnnModel::predict(const Samples& x) const {
  std::vector<int> out;
  out.reserve(x.size());
  for (double s : score(x)) out.push_back(s >= 0.5 ? 1 : -1);
  return out;
}

std::string KnnModel::dump() const {
  static constexpr const char* kWeights[] = {"uniform", "distance"};
  static constexpr const char* kMetric[] = {"l1", "l2", "cosine"};
  std::ostringstream out;
  out << "intermarket-model v1\nfamily: knn\nn_neighbors: " << params_.n_neighbors
      << "\nweights: " << kWeights[static_cast<int>(params_.weights)]
      << "\nmetric: " << kMetric[static_cast<int>(params_.metric)] << "\ntrain_rows: " << train_x_.rows()
      << "\nfeatures: " << train_x_.cols() << '\n';
  return out.str();
}

KnnModel fit_knn(const MatrixRef& x, std::span<const int> y, const KnnParams& params) {
  check_training_set(x, y);
  if (params.n_neighbors < 1) throw Error(ErrorCode::InvalidParameter, "n_neighbors must be positive");
  if (x.rows() < params.n_neighbors) {
    throw Error(ErrorCode::TooFewSamples, "fewer training rows than n_neighbors");
  }
  return KnnModel(Matrix(x), std::vector<int>(y.begin(), y.end()), params);
}

}  // namespace intermarket
