#pragma once

#include "intermarket/learners/classifier.hpp"

#include <cstdint>
#include <vector>

namespace intermarket {

struct BaselineConfig {
  int consensus_n = 5;
};

/// Fair coin per sample from a stream seeded by `seed`; every score is 0.5.
class RandomBaseline final : public Classifier {
 public:
  explicit RandomBaseline(std::uint64_t seed) : seed_(seed) {}
  Family family() const override { return Family::RandomBaseline; }
  std::vector<int> predict(const Samples& x) const override;
  std::vector<double> score(const Samples& x) const override;
  double threshold() const override { return 0.5; }
  bool score_determines_prediction() const override { return false; }
  std::string dump() const override;

 private:
  std::uint64_t seed_;
};

/// Predicts the training majority class (ties go to +1); every score is 0.5.
class ConstantBaseline final : public Classifier {
 public:
  explicit ConstantBaseline(int label) : label_(label) {}
  Family family() const override { return Family::ConstantBaseline; }
  std::vector<int> predict(const Samples& x) const override;
  std::vector<double> score(const Samples& x) const override;
  double threshold() const override { return 0.5; }
  bool score_determines_prediction() const override { return false; }
  std::string dump() const override;

  int label() const { return label_; }

 private:
  int label_;
};

/// Majority sign of the last `n` realized target returns before each window
/// end. Zero returns count as -1, ties go to +1 and NaN (unavailable) returns
/// are skipped. With n = 1 this is the previous-value baseline. No scores.
class ConsensusBaseline final : public Classifier {
 public:
  ConsensusBaseline(Family family, int n);
  Family family() const override { return family_; }
  std::vector<int> predict(const Samples& x) const override;
  bool has_scores() const override { return false; }
  std::vector<double> score(const Samples& x) const override;
  std::string dump() const override;

  int window() const { return n_; }

 private:
  Family family_;
  int n_;
};

std::vector<int> baseline_random(std::size_t test_len, std::uint64_t seed);
int majority_label(std::span<const int> labels);
std::vector<int> baseline_constant(std::span<const int> train_labels, std::size_t test_len);
/// Consensus over one sequence of returns, oldest first.
int consensus_sign(std::span<const double> returns, int n);

}  // namespace intermarket
