#pragma once

#include "intermarket/common.hpp"
#include "intermarket/ingest.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace intermarket {

/// Next-day direction of the target: label at date t is +1 when the target's
/// return realized on the following recorded day is strictly positive, else -1.
struct DirectionLabels {
  std::vector<Date> dates;
  std::vector<int> labels;

  std::size_t size() const { return dates.size(); }
};

DirectionLabels make_labels(const ReturnsSeries& target_returns,
                            const std::string& feature = "adjusted_close");

/// One element of the power set of intermarket types; the target is always included.
struct DatasetSpec {
  std::vector<AssetType> included_types;  // F, B, I, C order
  std::string code;                       // e.g. "FBC"; empty for the target-only set
  bool random_features = false;           // the noise-feature baseline dataset

  /// Name used in records and reports: the code, "base" for target-only, "random" for noise.
  std::string label() const;
  bool includes(AssetType t) const;
};

DatasetSpec make_spec(std::vector<AssetType> types);
/// Parses a record label back into a spec ("base", "random" or a letter code).
DatasetSpec spec_from_label(const std::string& label);

/// All 2^|types| specs ordered by subset size, then code.
std::vector<DatasetSpec> enumerate_specs(const std::vector<AssetType>& intermarket_types);

struct FeatureTable {
  std::vector<Date> dates;
  std::vector<std::string> feature_names;  // "<asset>.<feature>"
  Matrix values;
  std::vector<int> labels;

  std::size_t rows() const { return dates.size(); }
};

/// Inner-joins all series and the labels on date; columns follow input order.
FeatureTable align(const std::vector<const ReturnsSeries*>& series, const DirectionLabels& labels);

enum class StandardizeOn { Full, Train };

struct StandardizationStats {
  Vector mean;
  Vector sd;  // population convention (divide by N)
  std::vector<bool> degenerate;
  std::size_t rows_used = 0;
  StandardizeOn mode = StandardizeOn::Full;

  std::uint64_t digest() const;
};

/// Z = (X - mean) / sd with statistics from the first `stats_rows` rows (all rows by default).
/// Zero-variance columns become all zero and are flagged.
std::pair<FeatureTable, StandardizationStats> standardize(const FeatureTable& table,
                                                          std::size_t stats_rows = 0);

/// Index of the first test window: round-half-up of fraction * num_windows, kept in [1, n-1].
std::size_t split_index(std::size_t num_windows, double train_fraction);

struct AssembledDataset {
  DatasetSpec spec;
  std::size_t window = 5;
  std::vector<std::string> day_feature_names;  // features of a single day
  Matrix windows;                              // num_windows x (window * day features)
  std::vector<int> labels;
  std::vector<Date> window_dates;              // last day of each window
  std::size_t train_end = 0;                   // windows [0, train_end) train, rest test
  /// Raw target returns preceding each window end, oldest first; NaN when unavailable.
  Matrix target_lags;
  StandardizationStats stats;
  std::size_t aligned_days = 0;

  std::size_t num_windows() const { return labels.size(); }
  std::size_t test_size() const { return num_windows() - train_end; }
  std::vector<std::string> window_feature_names() const;
};

/// Flattens w consecutive rows per sample, oldest day first, and splits chronologically.
AssembledDataset window_and_split(const FeatureTable& table, std::size_t window, double train_fraction);

struct BuildParams {
  std::size_t window = 5;
  double train_fraction = 0.8;
  StandardizeOn standardize_on = StandardizeOn::Full;
  std::size_t lag_depth = 5;  // target returns kept per window for the naive baselines
  std::string label_feature = "adjusted_close";
  std::uint64_t seed = 0;     // only the random-feature dataset consumes randomness
};

/// One target plus its intermarket assets, with returns already computed.
struct Universe {
  std::vector<ReturnsSeries> series;  // registry order
  std::string target_id;

  const ReturnsSeries& target() const;
  std::vector<AssetType> intermarket_types() const;
};

Universe make_universe(const std::vector<AssetSeries>& raw, const std::string& target_id);

AssembledDataset build_dataset(const Universe& universe, const DatasetSpec& spec, const BuildParams& params);
/// Every power-set dataset followed by the random-feature dataset.
std::vector<AssembledDataset> build_all(const Universe& universe, const BuildParams& params);

nlohmann::json dataset_manifest(const AssembledDataset& ds);

}  // namespace intermarket
