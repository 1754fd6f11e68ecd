#include "intermarket/tuning.hpp"

#include "intermarket/metrics.hpp"

#include <algorithm>
#include <map>
#include <ostream>

namespace intermarket {

TimeSeriesFolds make_folds(std::size_t n_samples, int k) {
  if (k < 2) throw Error(ErrorCode::InvalidParameter, "fold count must be at least 2");
  const auto segments = static_cast<std::size_t>(k) + 1;
  if (n_samples < segments) {
    throw Error(ErrorCode::InsufficientData,
                std::to_string(n_samples) + " samples cannot form " + std::to_string(k) + " time-series folds");
  }
  const std::size_t test_size = n_samples / segments;
  const std::size_t first = n_samples - static_cast<std::size_t>(k) * test_size;
  TimeSeriesFolds out;
  out.k = k;
  for (int i = 0; i < k; ++i) {
    const std::size_t start = first + static_cast<std::size_t>(i) * test_size;
    out.folds.push_back({{0, start}, {start, start + test_size}});
  }
  return out;
}

Samples slice(const Samples& s, IndexRange r) {
  const auto b = static_cast<Eigen::Index>(r.begin);
  const auto len = static_cast<Eigen::Index>(r.size());
  const bool has_lags = s.target_lags.rows() == s.features.rows() && s.target_lags.cols() > 0;
  return Samples{s.features.middleRows(b, len), s.labels.subspan(r.begin, r.size()),
                 has_lags ? MatrixRef(s.target_lags.middleRows(b, len)) : s.target_lags};
}

GridProfile parse_grid_profile(std::string_view name) {
  if (name == "full") return GridProfile::Full;
  if (name == "compact") return GridProfile::Compact;
  throw Error(ErrorCode::ConfigError, "unknown grid profile: " + std::string(name));
}

std::string_view grid_profile_name(GridProfile p) { return p == GridProfile::Full ? "full" : "compact"; }

std::size_t HyperGrid::size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.values.size();
  return n;
}

ModelSpec HyperGrid::at(std::size_t index) const {
  ModelSpec spec{family, {}};
  spec.params.resize(axes.size());
  for (std::size_t a = axes.size(); a-- > 0;) {
    const auto& values = axes[a].values;
    spec.params[a] = {axes[a].name, values[index % values.size()]};
    index /= values.size();
  }
  return spec;
}

std::vector<ModelSpec> HyperGrid::points() const {
  std::vector<ModelSpec> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i));
  return out;
}

namespace {

/// Keeps the listed values of one axis, in domain order.
ParamAxis keep(const ParamAxis& axis, const std::vector<std::string>& values) {
  ParamAxis out{axis.name, {}};
  for (const auto& v : axis.values) {
    if (std::find(values.begin(), values.end(), param_to_string(v)) != values.end()) out.values.push_back(v);
  }
  return out;
}

const std::map<std::string, std::vector<std::string>>& compact_values(Family f) {
  static const std::map<std::string, std::vector<std::string>> tree{
      {"splitter", {"best", "random"}},
      {"max_depth", {"5", "None"}},
      {"min_samples_split", {"2", "50"}},
      {"min_samples_leaf", {"1", "10"}}};
  static const std::map<std::string, std::vector<std::string>> forest{
      {"n_estimators", {"50"}},
      {"criterion", {"gini"}},
      {"max_depth", {"5", "None"}},
      {"min_samples_split", {"2"}},
      {"min_samples_leaf", {"1", "10"}}};
  static const std::map<std::string, std::vector<std::string>> logistic{
      {"penalty", {"l1", "l2"}}, {"C", {"0.01", "0.1", "1"}}, {"solver", {"lbfgs", "liblinear"}}};
  static const std::map<std::string, std::vector<std::string>> svm{
      {"penalty", {"l2"}}, {"C", {"1", "25"}}, {"loss", {"hinge", "squared_hinge"}}};
  static const std::map<std::string, std::vector<std::string>> knn{
      {"n_neighbors", {"5", "20"}}, {"weights", {"uniform", "distance"}}, {"metric", {"l1", "cosine"}}};
  static const std::map<std::string, std::vector<std::string>> empty;
  switch (f) {
    case Family::DecisionTree: return tree;
    case Family::RandomForest: return forest;
    case Family::LogisticRegression: return logistic;
    case Family::LinearSVM: return svm;
    case Family::KNN: return knn;
    default: return empty;
  }
}

}  // namespace

HyperGrid default_grid(Family family, GridProfile profile) {
  HyperGrid grid{family, {}};
  for (const auto& axis : param_domain(family)) {
    grid.axes.push_back(profile == GridProfile::Full ? axis : keep(axis, compact_values(family).at(axis.name)));
  }
  return grid;
}

std::vector<std::size_t> SearchResult::zero_scored() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cv_table.size(); ++i) {
    if (cv_table[i].zero_scored) out.push_back(i);
  }
  return out;
}

namespace {

std::vector<int> threshold_half(const std::vector<double>& scores) {
  std::vector<int> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] >= 0.5 ? 1 : -1;
  return out;
}

const double* row_of(const MatrixRef& x, std::size_t i) {
  return x.data() + static_cast<Eigen::Index>(i) * x.outerStride();
}

/// Outcome of one grid point on one fold: predictions or an error text.
struct Outcome {
  std::vector<int> predictions;
  bool failed = false;
  std::string reason;
};

Outcome failure(const Error& e) { return {{}, true, e.what()}; }

/// Generic path: fit and predict each point independently.
void evaluate_plain(const std::vector<ModelSpec>& points, const Samples& tr, const Samples& te, std::uint64_t seed,
                    const FitOptions& fit, std::vector<Outcome>& out) {
  for (std::size_t p = 0; p < points.size(); ++p) {
    try {
      out[p].predictions = fit_model(points[p], tr, seed, fit)->predict(te);
    } catch (const Error& e) {
      out[p] = failure(e);
    }
  }
}

DecisionTree::Limits limits_of(const ModelSpec& spec) {
  DecisionTree::Limits l;
  if (!spec.is_none("max_depth")) l.max_depth = static_cast<int>(spec.get_int("max_depth", 0));
  l.min_samples_split = static_cast<int>(spec.get_int("min_samples_split", 2));
  return l;
}

/// Unlimited spec that grows the tree every limited variant truncates.
ModelSpec growth_spec(ModelSpec spec) {
  for (auto& p : spec.params) {
    if (p.name == "max_depth") p.value = std::monostate{};
    if (p.name == "min_samples_split") p.value = std::int64_t{2};
  }
  return spec;
}

std::string growth_key(const ModelSpec& spec) {
  ModelSpec g = growth_spec(spec);
  for (auto& p : g.params) {
    if (p.name == "n_estimators") p.value = std::int64_t{0};
  }
  return g.to_string();
}

void evaluate_trees(const std::vector<ModelSpec>& points, const Samples& tr, const Samples& te, std::uint64_t seed,
                    std::vector<Outcome>& out) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t p = 0; p < points.size(); ++p) groups[growth_key(points[p])].push_back(p);
  for (const auto& [key, members] : groups) {
    try {
      for (std::size_t p : members) validate_spec(points[p]);
      const ModelSpec g = growth_spec(points[members.front()]);
      const DecisionTree tree = fit_decision_tree(tr.features, tr.labels, tree_params_from(g), seed);
      for (std::size_t p : members) {
        const auto lim = limits_of(points[p]);
        std::vector<double> s(te.size());
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = tree.leaf_score(row_of(te.features, i), lim);
        out[p].predictions = threshold_half(s);
      }
    } catch (const Error& e) {
      for (std::size_t p : members) out[p] = failure(e);
    }
  }
}

void evaluate_forests(const std::vector<ModelSpec>& points, const Samples& tr, const Samples& te,
                      std::uint64_t seed, const FitOptions& fit, std::vector<Outcome>& out) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t p = 0; p < points.size(); ++p) groups[growth_key(points[p])].push_back(p);
  for (const auto& [key, members] : groups) {
    try {
      check_training_set(tr.features, tr.labels);
      int max_trees = 0;
      for (std::size_t p : members) {
        validate_spec(points[p]);
        max_trees = std::max(max_trees, static_cast<int>(points[p].get_int("n_estimators", 100)));
      }
      ForestParams params = forest_params_from(growth_spec(points[members.front()]),
                                               static_cast<std::size_t>(tr.features.cols()));
      params.n_estimators = max_trees;
      params.bootstrap = fit.forest_bootstrap;
      std::vector<std::vector<double>> sums(members.size(), std::vector<double>(te.size(), 0.0));
      for (int t = 0; t < max_trees; ++t) {
        const DecisionTree tree = grow_forest_tree(tr.features, tr.labels, params, seed, t);
        for (std::size_t m = 0; m < members.size(); ++m) {
          const ModelSpec& spec = points[members[m]];
          const int n_trees = static_cast<int>(spec.get_int("n_estimators", 100));
          if (t >= n_trees) continue;
          const auto lim = limits_of(spec);
          for (std::size_t i = 0; i < te.size(); ++i) sums[m][i] += tree.leaf_score(row_of(te.features, i), lim);
          if (t + 1 == n_trees) {
            for (auto& v : sums[m]) v /= n_trees;
            out[members[m]].predictions = threshold_half(sums[m]);
          }
        }
      }
    } catch (const Error& e) {
      for (std::size_t p : members) out[p] = failure(e);
    }
  }
}

void evaluate_knn(const std::vector<ModelSpec>& points, const Samples& tr, const Samples& te,
                  std::vector<Outcome>& out) {
  std::map<int, std::vector<std::vector<Neighbor>>> rankings;  // metric -> per test row
  std::size_t k_max = 0;
  for (const auto& spec : points) k_max = std::max(k_max, static_cast<std::size_t>(spec.get_int("n_neighbors", 5)));
  for (std::size_t p = 0; p < points.size(); ++p) {
    try {
      validate_spec(points[p]);
      check_training_set(tr.features, tr.labels);
      const KnnParams params = knn_params_from(points[p]);
      if (tr.features.rows() < params.n_neighbors) {
        throw Error(ErrorCode::TooFewSamples, "fewer training rows than n_neighbors");
      }
      auto& ranked = rankings[static_cast<int>(params.metric)];
      if (ranked.empty()) {
        ranked.resize(te.size());
        for (std::size_t i = 0; i < te.size(); ++i) {
          ranked[i] = nearest_neighbors(tr.features, row_of(te.features, i), k_max, params.metric);
        }
      }
      std::vector<double> s(te.size());
      for (std::size_t i = 0; i < te.size(); ++i) {
        s[i] = knn_vote(ranked[i], tr.labels, static_cast<std::size_t>(params.n_neighbors), params.weights);
      }
      out[p].predictions = threshold_half(s);
    } catch (const Error& e) {
      out[p] = failure(e);
    }
  }
}

}  // namespace

SearchResult grid_search(const HyperGrid& grid, const Samples& train, std::uint64_t seed,
                         const SearchOptions& options) {
  const auto points = grid.points();
  if (points.empty()) throw Error(ErrorCode::InvalidParameter, "empty hyperparameter grid");
  SearchResult result;
  result.folds = make_folds(train.size(), options.k);
  result.cv_table.resize(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) result.cv_table[p].spec = points[p];

  for (std::size_t f = 0; f < result.folds.folds.size(); ++f) {
    const Fold& fold = result.folds.folds[f];
    const Samples tr = slice(train, fold.train);
    const Samples te = slice(train, fold.test);
    const std::uint64_t fold_seed = derive_seed(seed, {static_cast<std::uint64_t>(f)});
    std::vector<Outcome> outcomes(points.size());
    if (options.reuse_fits && grid.family == Family::DecisionTree) {
      evaluate_trees(points, tr, te, fold_seed, outcomes);
    } else if (options.reuse_fits && grid.family == Family::RandomForest) {
      evaluate_forests(points, tr, te, fold_seed, options.fit, outcomes);
    } else if (options.reuse_fits && grid.family == Family::KNN) {
      evaluate_knn(points, tr, te, outcomes);
    } else {
      evaluate_plain(points, tr, te, fold_seed, options.fit, outcomes);
    }
    for (std::size_t p = 0; p < points.size(); ++p) {
      auto& entry = result.cv_table[p];
      if (outcomes[p].failed) {
        if (!entry.zero_scored) entry.reason = outcomes[p].reason;
        entry.zero_scored = true;
        entry.fold_scores.push_back(0.0);
      } else {
        entry.fold_scores.push_back(macro_f1(te.labels, outcomes[p].predictions));
      }
    }
  }

  bool any_valid = false;
  for (std::size_t p = 0; p < points.size(); ++p) {
    auto& entry = result.cv_table[p];
    if (entry.zero_scored) {
      std::fill(entry.fold_scores.begin(), entry.fold_scores.end(), 0.0);
      entry.mean_score = 0.0;
      continue;
    }
    double sum = 0.0;
    for (double s : entry.fold_scores) sum += s;
    entry.mean_score = sum / static_cast<double>(entry.fold_scores.size());
    if (!any_valid || entry.mean_score > result.best_score) {
      result.best_index = p;
      result.best_score = entry.mean_score;
    }
    any_valid = true;
  }
  if (!any_valid) {
    throw Error(ErrorCode::AllCombinationsInvalid,
                "every " + std::string(family_name(grid.family)) + " grid point failed: " + result.cv_table[0].reason);
  }
  result.best_spec = result.cv_table[result.best_index].spec;
  return result;
}

std::unique_ptr<Classifier> fit_best(const SearchResult& result, const Samples& train, std::uint64_t seed,
                                     const FitOptions& options) {
  if (train.size() < 2) throw Error(ErrorCode::InsufficientData, "refit needs at least two training samples");
  return fit_model(result.best_spec, train, seed, options);
}

void write_cv_audit(std::ostream& out, const SearchResult& result) {
  out << "spec,fold,macro_f1,zero_scored\n";
  for (const auto& e : result.cv_table) {
    for (std::size_t f = 0; f < e.fold_scores.size(); ++f) {
      out << '"' << e.spec.to_string() << "\"," << f << ',' << format_double(e.fold_scores[f]) << ','
          << (e.zero_scored ? 1 : 0) << '\n';
    }
  }
}

}  // namespace intermarket
