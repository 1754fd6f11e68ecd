#pragma once

#include "intermarket/learners.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace intermarket {

/// Half-open index range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

struct Fold {
  IndexRange train;
  IndexRange test;
};

struct TimeSeriesFolds {
  int k = 5;
  std::vector<Fold> folds;
};

/// Expanding-window folds: the last k of k+1 equal segments (the first takes
/// the remainder) are test blocks, and fold i trains on everything before its
/// block. Throws InvalidParameter for k < 2 and InsufficientData for n < k + 1.
TimeSeriesFolds make_folds(std::size_t n_samples, int k);

/// Sub-view of consecutive samples.
Samples slice(const Samples& s, IndexRange r);

enum class GridProfile { Full, Compact };

GridProfile parse_grid_profile(std::string_view name);
std::string_view grid_profile_name(GridProfile p);

/// Cartesian product of axes; the first axis varies slowest.
struct HyperGrid {
  Family family = Family::DecisionTree;
  std::vector<ParamAxis> axes;

  std::size_t size() const;
  ModelSpec at(std::size_t index) const;
  std::vector<ModelSpec> points() const;
};

/// The learner's full grid (96/288/42/20/24 points) or a small sub-grid for
/// quick runs. Baselines get a single point with no parameters.
HyperGrid default_grid(Family family, GridProfile profile = GridProfile::Full);

struct CvEntry {
  ModelSpec spec;
  std::vector<double> fold_scores;  // macro F1 per fold; zeros when the spec failed
  double mean_score = 0.0;
  bool zero_scored = false;
  std::string reason;  // error text when zero_scored
};

struct SearchResult {
  ModelSpec best_spec;
  std::size_t best_index = 0;
  double best_score = 0.0;
  std::vector<CvEntry> cv_table;
  TimeSeriesFolds folds;

  std::vector<std::size_t> zero_scored() const;
};

struct SearchOptions {
  int k = 5;
  FitOptions fit;
  /// Share fitted trees, forests and neighbor rankings across grid points that
  /// differ only in evaluation-time limits. Produces the same table as the
  /// plain path.
  bool reuse_fits = true;
};

/// Every grid point is fitted on every fold with seed derive_seed(seed, fold)
/// and scored by macro F1. Fits that raise an intermarket Error (for example
/// IncompatibleCombination) score 0 on every fold. The best mean wins; ties
/// go to the earliest grid point. Throws AllCombinationsInvalid when every
/// point failed.
SearchResult grid_search(const HyperGrid& grid, const Samples& train, std::uint64_t seed,
                         const SearchOptions& options = {});

/// Refits the selected spec on the whole training split. Throws
/// InsufficientData with fewer than two samples.
std::unique_ptr<Classifier> fit_best(const SearchResult& result, const Samples& train, std::uint64_t seed,
                                     const FitOptions& options = {});

/// CSV rows `spec,fold,macro_f1,zero_scored` in grid order.
void write_cv_audit(std::ostream& out, const SearchResult& result);

}  // namespace intermarket
