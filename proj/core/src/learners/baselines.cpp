#include "intermarket/learners/baselines.hpp"

#include "rng.hpp"

#include <cmath>
#include <sstream>

namespace intermarket {

std::vector<int> baseline_random(std::size_t test_len, std::uint64_t seed) {
  SplitMix rng(seed);
  std::vector<int> out(test_len);
  for (auto& v : out) v = (rng.next() >> 63) != 0 ? 1 : -1;
  return out;
}

int majority_label(std::span<const int> labels) {
  std::size_t pos = 0;
  for (int v : labels) pos += v > 0 ? 1 : 0;
  return 2 * pos >= labels.size() ? 1 : -1;
}

std::vector<int> baseline_constant(std::span<const int> train_labels, std::size_t test_len) {
  return std::vector<int>(test_len, majority_label(train_labels));
}

int consensus_sign(std::span<const double> returns, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidParameter, "consensus window must be at least 1");
  const std::size_t take = std::min(returns.size(), static_cast<std::size_t>(n));
  int up = 0, down = 0;
  for (std::size_t i = returns.size() - take; i < returns.size(); ++i) {
    const double r = returns[i];
    if (std::isnan(r)) continue;
    if (r > 0) ++up;
    else ++down;
  }
  return up >= down ? 1 : -1;
}

std::vector<int> RandomBaseline::predict(const Samples& x) const { return baseline_random(x.size(), seed_); }

std::vector<double> RandomBaseline::score(const Samples& x) const { return std::vector<double>(x.size(), 0.5); }

std::string RandomBaseline::dump() const {
  return "intermarket-model v1\nfamily: random-baseline\nseed: " + std::to_string(seed_) + "\n";
}

std::vector<int> ConstantBaseline::predict(const Samples& x) const { return std::vector<int>(x.size(), label_); }

std::vector<double> ConstantBaseline::score(const Samples& x) const { return std::vector<double>(x.size(), 0.5); }

std::string ConstantBaseline::dump() const {
  return "intermarket-model v1\nfamily: constant-baseline\nlabel: " + std::to_string(label_) + "\n";
}

ConsensusBaseline::ConsensusBaseline(Family family, int n) : family_(family), n_(n) {
  if (n < 1) throw Error(ErrorCode::InvalidParameter, "consensus window must be at least 1");
}

std::vector<int> ConsensusBaseline::predict(const Samples& x) const {
  const auto lags = x.target_lags;
  if (lags.rows() != static_cast<Eigen::Index>(x.size())) {
    throw Error(ErrorCode::InvalidParameter, "target lags missing for naive baseline");
  }
  if (lags.cols() < n_) throw Error(ErrorCode::InvalidParameter, "not enough target lags for consensus window");
  std::vector<int> out(x.size());
  for (Eigen::Index i = 0; i < lags.rows(); ++i) {
    out[static_cast<std::size_t>(i)] =
        consensus_sign(std::span<const double>(lags.row(i).data(), static_cast<std::size_t>(lags.cols())), n_);
  }
  return out;
}

std::vector<double> ConsensusBaseline::score(const Samples&) const {
  throw Error(ErrorCode::InvalidParameter, std::string(family_name(family_)) + " produces no scores");
}

std::string ConsensusBaseline::dump() const {
  return "intermarket-model v1\nfamily: " + std::string(family_name(family_)) + "\nn: " + std::to_string(n_) + "\n";
}

}  // namespace intermarket
