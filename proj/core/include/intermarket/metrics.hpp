#pragma once

#include "intermarket/common.hpp"

#include <cstddef>
#include <optional>
#include <span>

namespace intermarket {

/// Positive class is +1.
struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::size_t total() const { return tp + fp + tn + fn; }
};

/// Throws InvalidParameter on empty or unequal inputs.
ConfusionCounts confusion(std::span<const int> y_true, std::span<const int> y_pred);

double accuracy(std::span<const int> y_true, std::span<const int> y_pred);

struct F1Scores {
  double positive = 0.0;  // F1 of class +1
  double negative = 0.0;  // F1 of class -1
  double macro = 0.0;
  double weighted = 0.0;
  /// Some precision or recall was 0/0 and was taken as 0.
  bool degenerate = false;
};

/// Per-class F1 = 2PR/(P+R) with undefined ratios taken as 0.
F1Scores f1_scores(std::span<const int> y_true, std::span<const int> y_pred);
double macro_f1(std::span<const int> y_true, std::span<const int> y_pred);

/// Mann-Whitney form: P(s+ > s-) + P(s+ = s-)/2, from sorted mid-ranks.
/// Throws SingleClassPresent when y_true has only one class.
double roc_auc(std::span<const int> y_true, std::span<const double> scores);

struct MetricBundle {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double weighted_f1 = 0.0;
  std::optional<double> auc;  // absent for models without scores
  bool f1_degenerate = false;
};

/// AUC is computed only when `scores` is given; a single-class test set
/// propagates SingleClassPresent.
MetricBundle evaluate(std::span<const int> y_true, std::span<const int> y_pred,
                      std::optional<std::span<const double>> scores);

}  // namespace intermarket
