#include "intermarket/learners/tree.hpp"

#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace intermarket {

double node_impurity(Criterion c, double pos, double n) {
  if (n <= 0) return 0.0;
  const double q = pos / n;
  if (c == Criterion::Gini) return 2.0 * q * (1.0 - q);
  double h = 0.0;
  if (q > 0.0) h -= q * std::log2(q);
  if (q < 1.0) h -= (1.0 - q) * std::log2(1.0 - q);
  return h;
}

namespace {

struct Candidate {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;  // weighted child impurity
};

struct ValueLabel {
  double v;
  int pos;  // 1 for +1 labels
};

class TreeBuilder {
 public:
  TreeBuilder(const MatrixRef& x, std::span<const int> y, const TreeParams& params)
      : x_(x), y_(y), params_(params), d_(static_cast<int>(x.cols())) {
    features_.resize(static_cast<std::size_t>(d_));
    buffer_.reserve(static_cast<std::size_t>(x.rows()));
  }

  std::vector<DecisionTree::Node> build(std::vector<std::size_t>& rows, std::uint64_t seed) {
    struct Pending {
      int node;
      std::size_t begin, end;
      std::uint64_t key;
    };
    nodes_.clear();
    nodes_.push_back(make_node(rows, 0, rows.size(), 0));
    std::vector<Pending> stack{{0, 0, rows.size(), splitmix64(seed)}};
    while (!stack.empty()) {
      const Pending p = stack.back();
      stack.pop_back();
      DecisionTree::Node& node = nodes_[static_cast<std::size_t>(p.node)];
      const auto n = static_cast<double>(p.end - p.begin);
      if (params_.max_depth && node.depth >= *params_.max_depth) continue;
      if (n < params_.min_samples_split || n < 2.0 * params_.min_samples_leaf) continue;
      if (node.n_pos == 0 || node.n_pos == node.n) continue;

      SplitMix rng(p.key);
      const Candidate best = find_split(rows, p.begin, p.end, node.n_pos, rng);
      if (!best.found) continue;

      const int f = best.feature;
      const double thr = best.threshold;
      auto mid = std::partition(rows.begin() + static_cast<std::ptrdiff_t>(p.begin),
                                rows.begin() + static_cast<std::ptrdiff_t>(p.end),
                                [&](std::size_t r) { return x_(static_cast<Eigen::Index>(r), f) <= thr; });
      const auto m = static_cast<std::size_t>(mid - rows.begin());
      const int depth = node.depth + 1;
      node.feature = f;
      node.threshold = thr;
      node.split_impurity = best.impurity;
      const int left = static_cast<int>(nodes_.size());
      nodes_.push_back(make_node(rows, p.begin, m, depth));
      const int right = static_cast<int>(nodes_.size());
      nodes_.push_back(make_node(rows, m, p.end, depth));
      // `node` may dangle after push_back.
      nodes_[static_cast<std::size_t>(p.node)].left = left;
      nodes_[static_cast<std::size_t>(p.node)].right = right;
      stack.push_back({right, m, p.end, splitmix64(p.key ^ 0x2545f4914f6cdd1dULL)});
      stack.push_back({left, p.begin, m, splitmix64(p.key ^ 0x9e3779b97f4a7c15ULL)});
    }
    return std::move(nodes_);
  }

 private:
  DecisionTree::Node make_node(const std::vector<std::size_t>& rows, std::size_t b, std::size_t e, int depth) {
    DecisionTree::Node node;
    node.depth = depth;
    node.n = static_cast<double>(e - b);
    double pos = 0;
    for (std::size_t i = b; i < e; ++i) pos += y_[rows[i]] > 0 ? 1.0 : 0.0;
    node.n_pos = pos;
    return node;
  }

  double weighted(double pos_l, double n_l, double pos_r, double n_r) const {
    return (n_l * node_impurity(params_.criterion, pos_l, n_l) +
            n_r * node_impurity(params_.criterion, pos_r, n_r)) /
           (n_l + n_r);
  }

  Candidate find_split(const std::vector<std::size_t>& rows, std::size_t b, std::size_t e, double total_pos,
                       SplitMix& rng) {
    Candidate best;
    const int budget = params_.max_features <= 0 || params_.max_features >= d_ ? d_ : params_.max_features;
    const bool subsample = budget < d_;
    std::iota(features_.begin(), features_.end(), 0);
    int visited_informative = 0;
    for (int k = 0; k < d_ && visited_informative < budget; ++k) {
      if (subsample) {
        const auto j = k + static_cast<int>(rng.below(static_cast<std::uint64_t>(d_ - k)));
        std::swap(features_[static_cast<std::size_t>(k)], features_[static_cast<std::size_t>(j)]);
      }
      const int f = features_[static_cast<std::size_t>(k)];
      const bool informative = params_.splitter == Splitter::Best
                                   ? scan_best(rows, b, e, f, total_pos, best)
                                   : scan_random(rows, b, e, f, total_pos, rng, best);
      if (informative) ++visited_informative;
    }
    return best;
  }

  /// Returns false when the feature is constant on the node.
  bool scan_best(const std::vector<std::size_t>& rows, std::size_t b, std::size_t e, int f, double total_pos,
                 Candidate& best) {
    buffer_.clear();
    for (std::size_t i = b; i < e; ++i) {
      const auto r = rows[i];
      buffer_.push_back({x_(static_cast<Eigen::Index>(r), f), y_[r] > 0 ? 1 : 0});
    }
    std::sort(buffer_.begin(), buffer_.end(), [](const ValueLabel& a, const ValueLabel& c) { return a.v < c.v; });
    if (!(buffer_.front().v < buffer_.back().v)) return false;

    const auto n = static_cast<double>(buffer_.size());
    const double leaf = params_.min_samples_leaf;
    double pos_l = 0;
    for (std::size_t i = 0; i + 1 < buffer_.size(); ++i) {
      pos_l += buffer_[i].pos;
      if (!(buffer_[i].v < buffer_[i + 1].v)) continue;
      const auto n_l = static_cast<double>(i + 1);
      const double n_r = n - n_l;
      if (n_l < leaf) continue;
      if (n_r < leaf) break;
      const double imp = weighted(pos_l, n_l, total_pos - pos_l, n_r);
      if (!best.found || imp < best.impurity) {
        double thr = 0.5 * (buffer_[i].v + buffer_[i + 1].v);
        if (!(thr < buffer_[i + 1].v)) thr = buffer_[i].v;
        best = {true, f, thr, imp};
      }
    }
    return true;
  }

  bool scan_random(const std::vector<std::size_t>& rows, std::size_t b, std::size_t e, int f, double total_pos,
                   SplitMix& rng, Candidate& best) {
    double lo = x_(static_cast<Eigen::Index>(rows[b]), f);
    double hi = lo;
    for (std::size_t i = b + 1; i < e; ++i) {
      const double v = x_(static_cast<Eigen::Index>(rows[i]), f);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (!(lo < hi)) return false;
    double thr = lo + rng.uniform() * (hi - lo);
    if (!(thr < hi)) thr = lo;
    double n_l = 0;
    double pos_l = 0;
    for (std::size_t i = b; i < e; ++i) {
      const auto r = rows[i];
      if (x_(static_cast<Eigen::Index>(r), f) <= thr) {
        n_l += 1;
        pos_l += y_[r] > 0 ? 1 : 0;
      }
    }
    const auto n = static_cast<double>(e - b);
    const double n_r = n - n_l;
    if (n_l < params_.min_samples_leaf || n_r < params_.min_samples_leaf) return true;
    const double imp = weighted(pos_l, n_l, total_pos - pos_l, n_r);
    if (!best.found || imp < best.impurity) best = {true, f, thr, imp};
    return true;
  }

  const MatrixRef& x_;
  std::span<const int> y_;
  const TreeParams& params_;
  int d_;
  std::vector<int> features_;
  std::vector<ValueLabel> buffer_;
  std::vector<DecisionTree::Node> nodes_;
};

const double* row_ptr(const MatrixRef& x, Eigen::Index i) { return x.data() + i * x.outerStride(); }

}  // namespace

DecisionTree::DecisionTree(std::vector<Node> nodes, TreeParams params, std::size_t num_features)
    : nodes_(std::move(nodes)), params_(params), num_features_(num_features) {}

double DecisionTree::leaf_score(const double* row) const {
  int i = 0;
  while (!nodes_[static_cast<std::size_t>(i)].is_leaf()) {
    const Node& nd = nodes_[static_cast<std::size_t>(i)];
    i = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
  }
  return nodes_[static_cast<std::size_t>(i)].positive_fraction();
}

double DecisionTree::leaf_score(const double* row, const Limits& limits) const {
  int i = 0;
  while (true) {
    const Node& nd = nodes_[static_cast<std::size_t>(i)];
    if (nd.is_leaf() || (limits.max_depth && nd.depth >= *limits.max_depth) ||
        nd.n < limits.min_samples_split) {
      return nd.positive_fraction();
    }
    i = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
  }
}

std::vector<double> DecisionTree::score(const Samples& x) const {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = leaf_score(row_ptr(x.features, static_cast<Eigen::Index>(i)));
  return out;
}

std::vector<int> DecisionTree::predict(const Samples& x) const {
  std::vector<int> out;
  out.reserve(x.size());
  for (double s : score(x)) out.push_back(s >= 0.5 ? 1 : -1);
  return out;
}

int DecisionTree::depth() const {
  int d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.depth);
  return d;
}

std::string DecisionTree::dump() const {
  std::ostringstream out;
  out << "intermarket-model v1\nfamily: DecisionTree\nfeatures: " << num_features_ << "\nnodes: " << nodes_.size()
      << '\n';
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    out << i << " depth=" << n.depth << " n=" << n.n << " pos=" << n.n_pos;
    if (n.is_leaf()) {
      out << " leaf\n";
    } else {
      out << " x[" << n.feature << "]<=" << format_double(n.threshold) << " left=" << n.left
          << " right=" << n.right << '\n';
    }
  }
  return out.str();
}

DecisionTree grow_tree(const MatrixRef& x, std::span<const int> y, std::span<const std::size_t> rows,
                       const TreeParams& params, std::uint64_t seed) {
  if (rows.empty() || x.rows() == 0) throw Error(ErrorCode::EmptyTrainingSet, "tree needs samples");
  if (params.min_samples_split < 2 || params.min_samples_leaf < 1) {
    throw Error(ErrorCode::InvalidParameter, "min_samples_split >= 2 and min_samples_leaf >= 1 required");
  }
  std::vector<std::size_t> work(rows.begin(), rows.end());
  TreeBuilder builder(x, y, params);
  return DecisionTree(builder.build(work, seed), params, static_cast<std::size_t>(x.cols()));
}

DecisionTree fit_decision_tree(const MatrixRef& x, std::span<const int> y, const TreeParams& params,
                               std::uint64_t seed) {
  check_training_set(x, y);
  std::vector<std::size_t> rows(static_cast<std::size_t>(x.rows()));
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return grow_tree(x, y, rows, params, seed);
}

int default_max_features(std::size_t num_features) {
  return std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(num_features)))));
}

RandomForest::RandomForest(std::vector<DecisionTree> trees, ForestParams params)
    : trees_(std::move(trees)), params_(params) {}

std::vector<double> RandomForest::score(const Samples& x) const {
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double* row = row_ptr(x.features, static_cast<Eigen::Index>(i));
    double s = 0.0;
    for (const auto& t : trees_) s += t.leaf_score(row);
    out[i] = s / static_cast<double>(trees_.size());
  }
  return out;
}

std::vector<int> RandomForest::predict(const Samples& x) const {
  std::vector<int> out;
  out.reserve(x.size());
  for (double s : score(x)) out.push_back(s >= 0.5 ? 1 : -1);
  return out;
}

std::string RandomForest::dump() const {
  std::ostringstream out;
  out << "intermarket-model v1\nfamily: RandomForest\ntrees: " << trees_.size() << '\n';
  for (std::size_t i = 0; i < trees_.size(); ++i) out << "--- tree " << i << '\n' << trees_[i].dump();
  return out.str();
}

DecisionTree grow_forest_tree(const MatrixRef& x, std::span<const int> y, const ForestParams& params,
                              std::uint64_t forest_seed, int index) {
  const auto i = static_cast<std::uint64_t>(index);
  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<std::size_t> rows(n);
  if (params.bootstrap) {
    SplitMix rng(derive_seed(forest_seed, {i, hash_string("bootstrap")}));
    for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
  } else {
    std::iota(rows.begin(), rows.end(), std::size_t{0});
  }
  TreeParams tp = params.tree;
  if (tp.max_features == 0) tp.max_features = default_max_features(static_cast<std::size_t>(x.cols()));
  // Tree 0 grows from the forest seed itself, so a one-tree forest without
  // bootstrap is the decision tree fitted with that seed.
  return grow_tree(x, y, rows, tp, forest_seed + i * 0x9e3779b97f4a7c15ULL);
}

RandomForest fit_random_forest(const MatrixRef& x, std::span<const int> y, const ForestParams& params,
                               std::uint64_t seed) {
  check_training_set(x, y);
  if (params.n_estimators < 1) throw Error(ErrorCode::InvalidParameter, "n_estimators must be positive");
  std::vector<DecisionTree> trees;
  trees.reserve(static_cast<std::size_t>(params.n_estimators));
  for (int i = 0; i < params.n_estimators; ++i) trees.push_back(grow_forest_tree(x, y, params, seed, i));
  return RandomForest(std::move(trees), params);
}

}  // namespace intermarket
