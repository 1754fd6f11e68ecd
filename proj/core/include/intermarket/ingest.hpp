#pragma once

#include "intermarket/common.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace intermarket {

/// One daily bar. Volume is absent when the source does not report it.
struct PriceRow {
  Date date;
  double open = 0.0;
  double high = 0.0;
  double low = 0.0;
  double close = 0.0;
  double adjusted_close = 0.0;
  std::optional<double> volume;

  friend bool operator==(const PriceRow&, const PriceRow&) = default;
};

/// Raw price history of one asset.
///
/// Invariants (enforced by validate()): dates strictly increasing, prices finite
/// and positive, volume non-negative when present.
struct AssetSeries {
  std::string asset_id;
  AssetType asset_type = AssetType::Stock;
  std::vector<PriceRow> rows;

  /// True when every row carries a volume; otherwise volume is dropped as a feature.
  bool has_volume() const;
  void validate() const;

  friend bool operator==(const AssetSeries&, const AssetSeries&) = default;
};

inline const std::vector<std::string>& price_feature_names() {
  static const std::vector<std::string> names{"open", "high", "low", "close", "adjusted_close"};
  return names;
}

/// Day-over-day percent changes. values(i, j) is feature j on dates[i].
struct ReturnsSeries {
  std::string asset_id;
  AssetType asset_type = AssetType::Stock;
  std::vector<std::string> feature_names;
  std::vector<Date> dates;
  Matrix values;

  std::size_t size() const { return dates.size(); }
  /// Column index of a feature; throws InvalidParameter when absent.
  std::size_t feature_index(const std::string& name) const;
};

struct LoadReport {
  std::size_t rows_read = 0;
  std::size_t rows_dropped_missing_price = 0;
  bool volume_dropped = false;
};

inline constexpr const char* kAssetCsvHeader = "date,open,high,low,close,adjusted_close,volume";

AssetSeries load_asset_csv(const std::filesystem::path& path, const std::string& asset_id,
                           AssetType asset_type, LoadReport* report = nullptr);
void write_asset_csv(const AssetSeries& series, const std::filesystem::path& path);

/// Applies (x_t - x_{t-1}) / x_{t-1} to every price feature and to volume when present.
/// A zero previous-day volume yields a zero return for that cell.
ReturnsSeries compute_returns(const AssetSeries& series);

struct RegistryEntry {
  std::string asset_id;
  AssetType asset_type = AssetType::Stock;
  std::filesystem::path path;
  std::optional<Date> expected_first_date;
};

struct AssetRegistry {
  std::vector<RegistryEntry> entries;  // registry order fixes feature column order
  std::string target_id;

  void validate() const;
  const RegistryEntry& target() const;
  /// Distinct non-stock types present, in F, B, I, C order.
  std::vector<AssetType> intermarket_types() const;
};

/// Registry file:
///   target = "SPY"
///   [asset.SPY]
///   type = "Stock"
///   path = "spy.csv"            # relative to the registry file
///   first_date = "2000-01-03"   # optional
AssetRegistry load_registry(const std::filesystem::path& path);
void write_registry(const AssetRegistry& registry, const std::filesystem::path& path);

struct SyntheticAsset {
  std::string asset_id;
  AssetType asset_type = AssetType::Stock;
  bool has_volume = true;
  double drift = 0.0;          // mean daily log return
  double volatility = 0.01;    // sd of daily log return
  std::optional<Date> first_date;
};

/// The target's next-day direction copies the sign of `source_asset`'s same-day
/// close return with probability `fidelity`.
struct PlantedSignal {
  std::string source_asset;
  double fidelity = 0.5;
};

struct SyntheticSpec {
  std::vector<SyntheticAsset> assets;
  std::string target_id;
  Date start{2000, 1, 3};
  int trading_days = 500;
  double intraday_noise = 0.002;
  std::optional<PlantedSignal> planted;
};

/// Geometric random walks on business days. Each asset draws from its own stream
/// derived from (seed, asset_id), so results do not depend on generation order.
std::vector<AssetSeries> generate_synthetic_universe(const SyntheticSpec& spec, std::uint64_t seed);

/// One asset of each type (SPY target plus F, B, I, C) with the given planted fidelity on
/// the bond asset. Used by the acceptance experiments and the `synth` CLI default.
SyntheticSpec default_synthetic_spec(int trading_days, std::optional<double> bond_fidelity);

}  // namespace intermarket
