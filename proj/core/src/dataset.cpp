#include "intermarket/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <string_view>
#include <cstdio>
#include <random>

namespace intermarket {

DirectionLabels make_labels(const ReturnsSeries& target_returns, const std::string& feature) {
  if (target_returns.size() < 2) {
    throw Error(ErrorCode::InsufficientData, "labels need at least 2 return rows");
  }
  const auto col = static_cast<Eigen::Index>(target_returns.feature_index(feature));
  DirectionLabels out;
  const std::size_t n = target_returns.size() - 1;
  out.dates.reserve(n);
  out.labels.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    out.dates.push_back(target_returns.dates[t]);
    out.labels.push_back(target_returns.values(static_cast<Eigen::Index>(t + 1), col) > 0.0 ? 1 : -1);
  }
  return out;
}

std::string DatasetSpec::label() const {
  if (random_features) return "random";
  return code.empty() ? "base" : code;
}

bool DatasetSpec::includes(AssetType t) const {
  return std::find(included_types.begin(), included_types.end(), t) != included_types.end();
}

DatasetSpec make_spec(std::vector<AssetType> types) {
  static const AssetType order[] = {AssetType::Forex, AssetType::Bond, AssetType::IndexFuture,
                                    AssetType::CommodityFuture};
  DatasetSpec spec;
  for (AssetType t : order) {
    if (std::find(types.begin(), types.end(), t) != types.end()) {
      spec.included_types.push_back(t);
      spec.code += type_letter(t);
    }
  }
  return spec;
}

DatasetSpec spec_from_label(const std::string& label) {
  if (label == "random") {
    DatasetSpec s;
    s.random_features = true;
    return s;
  }
  if (label == "base") return DatasetSpec{};
  std::vector<AssetType> types;
  for (char c : label) {
    switch (c) {
      case 'F': types.push_back(AssetType::Forex); break;
      case 'B': types.push_back(AssetType::Bond); break;
      case 'I': types.push_back(AssetType::IndexFuture); break;
      case 'C': types.push_back(AssetType::CommodityFuture); break;
      default: throw Error(ErrorCode::MalformedRow, "unknown dataset label '" + label + "'");
    }
  }
  DatasetSpec s = make_spec(types);
  if (s.code != label) throw Error(ErrorCode::MalformedRow, "non-canonical dataset label '" + label + "'");
  return s;
}

std::vector<DatasetSpec> enumerate_specs(const std::vector<AssetType>& intermarket_types) {
  std::vector<AssetType> types;
  for (AssetType t : intermarket_types) {
    if (t == AssetType::Stock) continue;
    if (std::find(types.begin(), types.end(), t) == types.end()) types.push_back(t);
  }
  const std::size_t m = types.size();
  std::vector<DatasetSpec> out;
  out.reserve(std::size_t{1} << m);
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    std::vector<AssetType> subset;
    for (std::size_t j = 0; j < m; ++j) {
      if (mask & (std::size_t{1} << j)) subset.push_back(types[j]);
    }
    out.push_back(make_spec(subset));
  }
  std::sort(out.begin(), out.end(), [](const DatasetSpec& a, const DatasetSpec& b) {
    if (a.code.size() != b.code.size()) return a.code.size() < b.code.size();
    // Letters compare in F, B, I, C order, the same order analysis reports use.
    constexpr std::string_view order = "FBIC";
    return std::lexicographical_compare(a.code.begin(), a.code.end(), b.code.begin(), b.code.end(),
                                        [&](char x, char y) { return order.find(x) < order.find(y); });
  });
  return out;
}

FeatureTable align(const std::vector<const ReturnsSeries*>& series, const DirectionLabels& labels) {
  if (series.empty()) throw Error(ErrorCode::InsufficientData, "align needs at least one series");

  std::vector<Date> common = labels.dates;
  for (const auto* s : series) {
    std::vector<Date> next;
    std::set_intersection(common.begin(), common.end(), s->dates.begin(), s->dates.end(),
                          std::back_inserter(next));
    common = std::move(next);
  }
  if (common.empty()) throw Error(ErrorCode::EmptyIntersection, "series share no dates");

  FeatureTable out;
  out.dates = common;
  std::size_t cols = 0;
  for (const auto* s : series) {
    for (const auto& f : s->feature_names) out.feature_names.push_back(s->asset_id + "." + f);
    cols += s->feature_names.size();
  }
  const auto rows = static_cast<Eigen::Index>(common.size());
  out.values.resize(rows, static_cast<Eigen::Index>(cols));

  Eigen::Index col0 = 0;
  for (const auto* s : series) {
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      while (s->dates[k] < common[static_cast<std::size_t>(r)]) ++k;
      out.values.row(r).segment(col0, s->values.cols()) = s->values.row(static_cast<Eigen::Index>(k));
    }
    col0 += s->values.cols();
  }
  out.labels.reserve(common.size());
  std::size_t k = 0;
  for (const Date& d : common) {
    while (labels.dates[k] < d) ++k;
    out.labels.push_back(labels.labels[k]);
  }
  return out;
}

std::uint64_t StandardizationStats::digest() const {
  std::uint64_t h = hash_string(mode == StandardizeOn::Full ? "full" : "train");
  h = derive_seed(h, {rows_used});
  for (Eigen::Index j = 0; j < mean.size(); ++j) {
    h = derive_seed(h, {std::bit_cast<std::uint64_t>(mean[j]), std::bit_cast<std::uint64_t>(sd[j])});
  }
  return h;
}

std::pair<FeatureTable, StandardizationStats> standardize(const FeatureTable& table, std::size_t stats_rows) {
  const std::size_t n = table.rows();
  if (stats_rows == 0) stats_rows = n;
  if (stats_rows < 2 || stats_rows > n) {
    throw Error(ErrorCode::InsufficientData, "standardization needs at least 2 rows");
  }
  StandardizationStats stats;
  stats.rows_used = stats_rows;
  stats.mode = stats_rows == n ? StandardizeOn::Full : StandardizeOn::Train;
  const auto used = table.values.topRows(static_cast<Eigen::Index>(stats_rows));
  const auto cols = table.values.cols();
  stats.mean = used.colwise().mean().transpose();
  stats.sd.resize(cols);
  stats.degenerate.assign(static_cast<std::size_t>(cols), false);

  FeatureTable out = table;
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double mu = stats.mean[j];
    double ss = 0.0;
    for (Eigen::Index i = 0; i < used.rows(); ++i) {
      const double d = used(i, j) - mu;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(stats_rows));
    stats.sd[j] = sd;
    // Relative guard: a column of identical values may carry rounding residue.
    const double scale = std::max(1.0, std::abs(mu));
    if (!(sd > 1e-12 * scale)) {
      stats.degenerate[static_cast<std::size_t>(j)] = true;
      out.values.col(j).setZero();
    } else {
      out.values.col(j) = (table.values.col(j).array() - mu) / sd;
    }
  }
  return {std::move(out), std::move(stats)};
}

std::size_t split_index(std::size_t num_windows, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "train fraction must lie in (0, 1)");
  }
  if (num_windows < 2) throw Error(ErrorCode::InsufficientData, "need at least 2 windows to split");
  auto s = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(num_windows) + 0.5));
  return std::clamp<std::size_t>(s, 1, num_windows - 1);
}

std::vector<std::string> AssembledDataset::window_feature_names() const {
  std::vector<std::string> out;
  out.reserve(window * day_feature_names.size());
  for (std::size_t j = 0; j < window; ++j) {
    const std::size_t lag = window - 1 - j;
    for (const auto& f : day_feature_names) out.push_back(f + "[t-" + std::to_string(lag) + "]");
  }
  return out;
}

AssembledDataset window_and_split(const FeatureTable& table, std::size_t window, double train_fraction) {
  if (window == 0) throw Error(ErrorCode::InvalidParameter, "window must be positive");
  const std::size_t rows = table.rows();
  if (rows < window + 1) {
    throw Error(ErrorCode::InsufficientData,
                "need at least " + std::to_string(window + 1) + " aligned days, have " + std::to_string(rows));
  }
  AssembledDataset ds;
  ds.window = window;
  ds.day_feature_names = table.feature_names;
  ds.aligned_days = rows;
  const std::size_t n = rows - window + 1;
  const auto d = table.values.cols();
  ds.windows.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(window) * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < window; ++j) {
      ds.windows.row(static_cast<Eigen::Index>(i)).segment(static_cast<Eigen::Index>(j) * d, d) =
          table.values.row(static_cast<Eigen::Index>(i + j));
    }
    ds.labels.push_back(table.labels[i + window - 1]);
    ds.window_dates.push_back(table.dates[i + window - 1]);
  }
  ds.train_end = split_index(n, train_fraction);
  return ds;
}

const ReturnsSeries& Universe::target() const {
  for (const auto& s : series) {
    if (s.asset_id == target_id) return s;
  }
  throw Error(ErrorCode::InvalidRegistry, "target '" + target_id + "' missing from universe");
}

std::vector<AssetType> Universe::intermarket_types() const {
  std::vector<AssetType> out;
  for (AssetType t : {AssetType::Forex, AssetType::Bond, AssetType::IndexFuture, AssetType::CommodityFuture}) {
    if (std::any_of(series.begin(), series.end(), [t](const ReturnsSeries& s) { return s.asset_type == t; })) {
      out.push_back(t);
    }
  }
  return out;
}

Universe make_universe(const std::vector<AssetSeries>& raw, const std::string& target_id) {
  Universe u;
  u.target_id = target_id;
  for (const auto& s : raw) {
    s.validate();
    u.series.push_back(compute_returns(s));
  }
  (void)u.target();
  return u;
}

namespace {

void fill_target_lags(AssembledDataset& ds, const ReturnsSeries& target, const std::string& label_feature,
                      std::size_t depth) {
  const auto col = static_cast<Eigen::Index>(target.feature_index(label_feature));
  ds.target_lags.resize(static_cast<Eigen::Index>(ds.num_windows()), static_cast<Eigen::Index>(depth));
  std::size_t k = 0;
  for (std::size_t i = 0; i < ds.num_windows(); ++i) {
    while (target.dates[k] < ds.window_dates[i]) ++k;
    for (std::size_t j = 0; j < depth; ++j) {
      const std::size_t back = depth - 1 - j;
      ds.target_lags(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          k >= back ? target.values(static_cast<Eigen::Index>(k - back), col)
                    : std::numeric_limits<double>::quiet_NaN();
    }
  }
}

}  // namespace

AssembledDataset build_dataset(const Universe& universe, const DatasetSpec& spec, const BuildParams& params) {
  const ReturnsSeries& target = universe.target();
  const DirectionLabels labels = make_labels(target, params.label_feature);

  std::vector<const ReturnsSeries*> members;
  for (const auto& s : universe.series) {
    if (s.asset_id == universe.target_id || (!spec.random_features && spec.includes(s.asset_type))) {
      members.push_back(&s);
    }
  }
  const FeatureTable aligned = align(members, labels);
  if (aligned.rows() < params.window + 1) {
    throw Error(ErrorCode::InsufficientData, spec.label() + ": too few aligned days");
  }
  std::size_t stats_rows = 0;
  if (params.standardize_on == StandardizeOn::Train) {
    const std::size_t n = aligned.rows() - params.window + 1;
    stats_rows = split_index(n, params.train_fraction) + params.window - 1;
  }
  auto [z, stats] = standardize(aligned, stats_rows);
  AssembledDataset ds = window_and_split(z, params.window, params.train_fraction);
  ds.spec = spec;
  ds.stats = std::move(stats);
  fill_target_lags(ds, target, params.label_feature, params.lag_depth);

  if (spec.random_features) {
    std::mt19937_64 rng(derive_seed(params.seed, {hash_string("random-features")}));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index i = 0; i < ds.windows.rows(); ++i) {
      for (Eigen::Index j = 0; j < ds.windows.cols(); ++j) ds.windows(i, j) = normal(rng);
    }
    for (auto& name : ds.day_feature_names) name = "noise." + name;
  }
  return ds;
}

std::vector<AssembledDataset> build_all(const Universe& universe, const BuildParams& params) {
  std::vector<AssembledDataset> out;
  for (const auto& spec : enumerate_specs(universe.intermarket_types())) {
    out.push_back(build_dataset(universe, spec, params));
  }
  DatasetSpec random;
  random.random_features = true;
  out.push_back(build_dataset(universe, random, params));
  return out;
}

nlohmann::json dataset_manifest(const AssembledDataset& ds) {
  nlohmann::json j;
  j["dataset"] = ds.spec.label();
  j["code"] = ds.spec.code;
  j["random_features"] = ds.spec.random_features;
  j["day_features"] = ds.day_feature_names;
  j["window"] = ds.window;
  j["flatten_order"] = "time-major, oldest day first";
  j["aligned_days"] = ds.aligned_days;
  j["first_window_end"] = ds.window_dates.front().iso();
  j["last_window_end"] = ds.window_dates.back().iso();
  j["num_windows"] = ds.num_windows();
  j["split_index"] = ds.train_end;
  j["standardize_on"] = ds.stats.mode == StandardizeOn::Full ? "full" : "train";
  j["sd_convention"] = "population";
  j["stats_rows"] = ds.stats.rows_used;
  std::vector<std::string> degenerate;
  for (std::size_t k = 0; k < ds.stats.degenerate.size(); ++k) {
    if (ds.stats.degenerate[k]) degenerate.push_back(ds.day_feature_names[k]);
  }
  j["degenerate_features"] = degenerate;
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(ds.stats.digest()));
  j["stats_digest"] = buf;
  return j;
}

}  // namespace intermarket
