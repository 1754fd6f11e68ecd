#pragma once

#include "intermarket/learners/classifier.hpp"

#include <utility>
#include <vector>

namespace intermarket {

enum class KnnWeights { Uniform, Distance };
enum class KnnMetric { L1, L2, Cosine };

struct KnnParams {
  int n_neighbors = 5;
  KnnWeights weights = KnnWeights::Uniform;
  KnnMetric metric = KnnMetric::L2;
};

/// Cosine distance is 1 - cos(a, b); when either vector is all zeros it falls
/// back to the l2 distance.
double knn_distance(const double* a, const double* b, std::size_t d, KnnMetric metric);

struct Neighbor {
  double distance;
  std::size_t index;
};

/// The `k` nearest training rows to `query`, ordered by (distance, index).
std::vector<Neighbor> nearest_neighbors(const MatrixRef& train, const double* query, std::size_t k,
                                        KnnMetric metric);

/// Weighted positive-vote fraction of the first `k` entries of `ranked`. With
/// distance weights any exact match (d = 0) takes the whole vote.
double knn_vote(std::span<const Neighbor> ranked, std::span<const int> labels, std::size_t k,
                KnnWeights weights);

class KnnModel final : public Classifier {
 public:
  KnnModel(Matrix train_x, std::vector<int> train_y, KnnParams params);

  Family family() const override { return Family::KNN; }
  std::vector<int> predict(const Samples& x) const override;
  std::vector<double> score(const Samples& x) const override;
  double threshold() const override { return 0.5; }
  std::string dump() const override;

  const KnnParams& params() const { return params_; }

 private:
  Matrix train_x_;
  std::vector<int> train_y_;
  KnnParams params_;
};

/// Throws TooFewSamples when there are fewer rows than n_neighbors.
KnnModel fit_knn(const MatrixRef& x, std::span<const int> y, const KnnParams& params);

}  // namespace intermarket
