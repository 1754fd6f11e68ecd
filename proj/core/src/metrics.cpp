#include "intermarket/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace intermarket {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a == 0) throw Error(ErrorCode::InvalidParameter, "metric over an empty sample");
  if (a != b) throw Error(ErrorCode::InvalidParameter, "metric inputs differ in length");
}

struct ClassF1 {
  double f1;
  bool degenerate;
};

ClassF1 class_f1(std::size_t tp, std::size_t fp, std::size_t fn) {
  // F1 = 2tp / (2tp + fp + fn); this equals 2PR/(P+R) whenever both are defined.
  const bool undefined = tp + fp == 0 || tp + fn == 0;
  if (tp == 0) return {0.0, undefined};
  return {2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn), false};
}

}  // namespace

ConfusionCounts confusion(std::span<const int> y_true, std::span<const int> y_pred) {
  check_lengths(y_true.size(), y_pred.size());
  ConfusionCounts c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool t = y_true[i] > 0;
    const bool p = y_pred[i] > 0;
    if (t && p) ++c.tp;
    else if (!t && p) ++c.fp;
    else if (!t && !p) ++c.tn;
    else ++c.fn;
  }
  return c;
}

double accuracy(std::span<const int> y_true, std::span<const int> y_pred) {
  const auto c = confusion(y_true, y_pred);
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

F1Scores f1_scores(std::span<const int> y_true, std::span<const int> y_pred) {
  const auto c = confusion(y_true, y_pred);
  const auto pos = class_f1(c.tp, c.fp, c.fn);
  const auto neg = class_f1(c.tn, c.fn, c.fp);
  const auto n = static_cast<double>(c.total());
  F1Scores out;
  out.positive = pos.f1;
  out.negative = neg.f1;
  out.macro = 0.5 * (pos.f1 + neg.f1);
  out.weighted = (static_cast<double>(c.tp + c.fn) * pos.f1 + static_cast<double>(c.tn + c.fp) * neg.f1) / n;
  out.degenerate = pos.degenerate || neg.degenerate;
  return out;
}

double macro_f1(std::span<const int> y_true, std::span<const int> y_pred) { return f1_scores(y_true, y_pred).macro; }

double roc_auc(std::span<const int> y_true, std::span<const double> scores) {
  check_lengths(y_true.size(), scores.size());
  const std::size_t n = y_true.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (y_true[order[k]] > 0) {
        rank_sum += mid_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw Error(ErrorCode::SingleClassPresent, "AUC needs both classes");
  const auto p = static_cast<double>(n_pos);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(n_neg));
}

MetricBundle evaluate(std::span<const int> y_true, std::span<const int> y_pred,
                      std::optional<std::span<const double>> scores) {
  MetricBundle b;
  b.accuracy = accuracy(y_true, y_pred);
  const auto f1 = f1_scores(y_true, y_pred);
  b.macro_f1 = f1.macro;
  b.weighted_f1 = f1.weighted;
  b.f1_degenerate = f1.degenerate;
  if (scores) b.auc = roc_auc(y_true, *scores);
  return b;
}

}  // namespace intermarket
