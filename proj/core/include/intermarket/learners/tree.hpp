#pragma once

#include "intermarket/learners/classifier.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace intermarket {

enum class Criterion { Gini, Entropy };
enum class Splitter { Best, Random };

struct TreeParams {
  Criterion criterion = Criterion::Gini;
  Splitter splitter = Splitter::Best;
  std::optional<int> max_depth;  // nullopt: grow until another rule stops
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  int max_features = 0;          // features examined per split; 0 means all
};

/// Impurity of a node with `pos` positives out of `n` samples.
double node_impurity(Criterion c, double pos, double n);

/// CART classification tree with axis-aligned `x[feature] <= threshold` splits
/// (true goes left).
///
/// Every node keeps its sample counts, and each node draws randomness from a
/// stream keyed by its position in the tree. A node's split therefore does not
/// depend on max_depth or min_samples_split, and a tree grown without those
/// limits can be evaluated as if grown with any tighter limits (see
/// `leaf_score(..., limits)`). Tuning uses this to score depth/split grids
/// without refitting.
class DecisionTree final : public Classifier {
 public:
  struct Node {
    int feature = -1;  // -1 for a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int depth = 0;
    double n = 0;          // samples reaching the node (bootstrap duplicates counted)
    double n_pos = 0;
    double split_impurity = 0.0;  // weighted child impurity of the chosen split

    bool is_leaf() const { return feature < 0; }
    double positive_fraction() const { return n > 0 ? n_pos / n : 0.5; }
  };

  struct Limits {
    std::optional<int> max_depth;
    int min_samples_split = 2;
  };

  DecisionTree() = default;
  DecisionTree(std::vector<Node> nodes, TreeParams params, std::size_t num_features);

  Family family() const override { return Family::DecisionTree; }
  std::vector<int> predict(const Samples& x) const override;
  std::vector<double> score(const Samples& x) const override;
  double threshold() const override { return 0.5; }
  std::string dump() const override;

  double leaf_score(const double* row) const;
  /// Positive fraction of the node where traversal stops under `limits`.
  double leaf_score(const double* row, const Limits& limits) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  const TreeParams& params() const { return params_; }
  int depth() const;

 private:
  std::vector<Node> nodes_;
  TreeParams params_;
  std::size_t num_features_ = 0;
};

/// Grows a tree on the samples listed in `rows` (duplicates allowed, as produced by bootstrap).
DecisionTree grow_tree(const MatrixRef& x, std::span<const int> y, std::span<const std::size_t> rows,
                       const TreeParams& params, std::uint64_t seed);

DecisionTree fit_decision_tree(const MatrixRef& x, std::span<const int> y, const TreeParams& params,
                               std::uint64_t seed);

struct ForestParams {
  int n_estimators = 100;
  TreeParams tree;       // tree.max_features == 0 selects ceil(sqrt(d))
  bool bootstrap = true;
};

/// Bagged trees. The score is the mean of the trees' leaf positive fractions and
/// the prediction is +1 when that score is at least 0.5. Tree i depends only on
/// (seed, i), so the first k trees of a forest equal a k-tree forest with the
/// same seed. Tree 0 grows from `seed` itself.
class RandomForest final : public Classifier {
 public:
  RandomForest(std::vector<DecisionTree> trees, ForestParams params);

  Family family() const override { return Family::RandomForest; }
  std::vector<int> predict(const Samples& x) const override;
  std::vector<double> score(const Samples& x) const override;
  double threshold() const override { return 0.5; }
  std::string dump() const override;

  const std::vector<DecisionTree>& trees() const { return trees_; }
  const ForestParams& params() const { return params_; }

 private:
  std::vector<DecisionTree> trees_;
  ForestParams params_;
};

int default_max_features(std::size_t num_features);

/// Tree i of a forest: its bootstrap draw and growth seed.
DecisionTree grow_forest_tree(const MatrixRef& x, std::span<const int> y, const ForestParams& params,
                              std::uint64_t forest_seed, int index);

RandomForest fit_random_forest(const MatrixRef& x, std::span<const int> y, const ForestParams& params,
                               std::uint64_t seed);

}  // namespace intermarket
