#include "intermarket/ingest.hpp"

#include "intermarket/kvconfig.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace intermarket {

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

}  // namespace

bool AssetSeries::has_volume() const {
  return !rows.empty() &&
         std::all_of(rows.begin(), rows.end(), [](const PriceRow& r) { return r.volume.has_value(); });
}

void AssetSeries::validate() const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i > 0 && !(rows[i - 1].date < r.date)) {
      throw Error(rows[i - 1].date == r.date ? ErrorCode::DuplicateDate : ErrorCode::MalformedRow,
                  asset_id + ": dates not strictly increasing at " + r.date.iso());
    }
    for (double p : {r.open, r.high, r.low, r.close, r.adjusted_close}) {
      if (!std::isfinite(p) || p <= 0.0) {
        throw Error(ErrorCode::NonPositivePrice, asset_id + ": non-positive price on " + r.date.iso());
      }
    }
    if (r.volume && (!std::isfinite(*r.volume) || *r.volume < 0.0)) {
      throw Error(ErrorCode::MalformedRow, asset_id + ": negative volume on " + r.date.iso());
    }
  }
}

std::size_t ReturnsSeries::feature_index(const std::string& name) const {
  auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) {
    throw Error(ErrorCode::InvalidParameter, asset_id + " has no feature '" + name + "'");
  }
  return static_cast<std::size_t>(it - feature_names.begin());
}

AssetSeries load_asset_csv(const std::filesystem::path& path, const std::string& asset_id,
                           AssetType asset_type, LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::MalformedRow, path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kAssetCsvHeader) {
    throw Error(ErrorCode::MalformedRow, path.string() + ": header must be '" + kAssetCsvHeader + "'");
  }

  AssetSeries series{asset_id, asset_type, {}};
  LoadReport local;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++local.rows_read;
    auto fields = split_csv(line);
    if (fields.size() != 7) {
      throw Error(ErrorCode::MalformedRow, where(path, line_no) + ": expected 7 fields");
    }
    PriceRow row;
    row.date = Date::parse(fields[0]);
    bool missing = false;
    double* targets[5] = {&row.open, &row.high, &row.low, &row.close, &row.adjusted_close};
    for (int k = 0; k < 5; ++k) {
      if (fields[k + 1].empty()) {
        missing = true;
        continue;
      }
      try {
        *targets[k] = parse_double(fields[k + 1]);
      } catch (const Error&) {
        throw Error(ErrorCode::MalformedRow, where(path, line_no) + ": bad price field");
      }
      if (!std::isfinite(*targets[k])) {
        throw Error(ErrorCode::MalformedRow, where(path, line_no) + ": non-finite price");
      }
      if (*targets[k] <= 0.0) {
        throw Error(ErrorCode::NonPositivePrice, where(path, line_no));
      }
    }
    if (missing) {
      ++local.rows_dropped_missing_price;
      continue;
    }
    if (!fields[6].empty()) {
      double v = 0.0;
      try {
        v = parse_double(fields[6]);
      } catch (const Error&) {
        throw Error(ErrorCode::MalformedRow, where(path, line_no) + ": bad volume");
      }
      if (!std::isfinite(v) || v < 0.0) {
        throw Error(ErrorCode::MalformedRow, where(path, line_no) + ": negative volume");
      }
      row.volume = v;
    }
    series.rows.push_back(row);
  }

  std::stable_sort(series.rows.begin(), series.rows.end(),
                   [](const PriceRow& a, const PriceRow& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < series.rows.size(); ++i) {
    if (series.rows[i].date == series.rows[i - 1].date) {
      throw Error(ErrorCode::DuplicateDate, path.string() + ": " + series.rows[i].date.iso());
    }
  }
  local.volume_dropped = !series.rows.empty() && !series.has_volume();
  if (report != nullptr) *report = local;
  return series;
}

void write_asset_csv(const AssetSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << kAssetCsvHeader << '\n';
  for (const auto& r : series.rows) {
    out << r.date.iso() << ',' << format_double(r.open) << ',' << format_double(r.high) << ','
        << format_double(r.low) << ',' << format_double(r.close) << ','
        << format_double(r.adjusted_close) << ',';
    if (r.volume) out << format_double(*r.volume);
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

ReturnsSeries compute_returns(const AssetSeries& series) {
  if (series.rows.size() < 2) {
    throw Error(ErrorCode::InsufficientData, series.asset_id + ": need at least 2 rows for returns");
  }
  const bool volume = series.has_volume();
  ReturnsSeries out;
  out.asset_id = series.asset_id;
  out.asset_type = series.asset_type;
  out.feature_names = price_feature_names();
  if (volume) out.feature_names.emplace_back("volume");

  const std::size_t n = series.rows.size() - 1;
  out.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(out.feature_names.size()));
  out.dates.reserve(n);
  for (std::size_t t = 1; t <= n; ++t) {
    const auto& prev = series.rows[t - 1];
    const auto& cur = series.rows[t];
    const double p[5] = {prev.open, prev.high, prev.low, prev.close, prev.adjusted_close};
    const double c[5] = {cur.open, cur.high, cur.low, cur.close, cur.adjusted_close};
    const auto row = static_cast<Eigen::Index>(t - 1);
    for (int k = 0; k < 5; ++k) {
      if (p[k] == 0.0) {
        throw Error(ErrorCode::DivisionByZeroReturn, series.asset_id + " on " + prev.date.iso());
      }
      out.values(row, k) = (c[k] - p[k]) / p[k];
    }
    if (volume) {
      const double pv = *prev.volume;
      out.values(row, 5) = pv == 0.0 ? 0.0 : (*cur.volume - pv) / pv;
    }
    out.dates.push_back(cur.date);
  }
  return out;
}

void AssetRegistry::validate() const {
  std::set<std::string> ids;
  int stocks = 0;
  for (const auto& e : entries) {
    if (!ids.insert(e.asset_id).second) {
      throw Error(ErrorCode::InvalidRegistry, "duplicate asset id '" + e.asset_id + "'");
    }
    if (e.asset_type == AssetType::Stock) ++stocks;
  }
  if (stocks != 1) throw Error(ErrorCode::InvalidRegistry, "registry needs exactly one Stock entry");
  if (target().asset_type != AssetType::Stock) {
    throw Error(ErrorCode::InvalidRegistry, "target '" + target_id + "' must be the Stock entry");
  }
}

const RegistryEntry& AssetRegistry::target() const {
  for (const auto& e : entries) {
    if (e.asset_id == target_id) return e;
  }
  throw Error(ErrorCode::InvalidRegistry, "target '" + target_id + "' not in registry");
}

std::vector<AssetType> AssetRegistry::intermarket_types() const {
  std::vector<AssetType> out;
  for (AssetType t : {AssetType::Forex, AssetType::Bond, AssetType::IndexFuture, AssetType::CommodityFuture}) {
    if (std::any_of(entries.begin(), entries.end(), [t](const RegistryEntry& e) { return e.asset_type == t; })) {
      out.push_back(t);
    }
  }
  return out;
}

AssetRegistry load_registry(const std::filesystem::path& path) {
  const KvDocument doc = parse_kv_file(path);
  AssetRegistry reg;
  for (const auto& [key, value] : doc.root().entries) {
    if (key == "target") {
      reg.target_id = value.as_string(key);
    } else {
      throw Error(ErrorCode::InvalidRegistry, "unknown registry key '" + key + "'");
    }
  }
  if (reg.target_id.empty()) throw Error(ErrorCode::InvalidRegistry, "registry missing 'target'");
  const auto base = path.parent_path();
  for (std::size_t s = 1; s < doc.sections.size(); ++s) {
    const auto& sec = doc.sections[s];
    if (sec.name.rfind("asset.", 0) != 0 || sec.name.size() <= 6) {
      throw Error(ErrorCode::InvalidRegistry, "unknown section [" + sec.name + "]");
    }
    RegistryEntry e;
    e.asset_id = sec.name.substr(6);
    bool have_type = false;
    bool have_path = false;
    for (const auto& [key, value] : sec.entries) {
      if (key == "type") {
        e.asset_type = parse_asset_type(value.as_string(key));
        have_type = true;
      } else if (key == "path") {
        std::filesystem::path p = value.as_string(key);
        e.path = p.is_absolute() ? p : base / p;
        have_path = true;
      } else if (key == "first_date") {
        e.expected_first_date = Date::parse(value.as_string(key));
      } else {
        throw Error(ErrorCode::InvalidRegistry, "unknown key '" + key + "' in [" + sec.name + "]");
      }
    }
    if (!have_type || !have_path) {
      throw Error(ErrorCode::InvalidRegistry, "[" + sec.name + "] needs 'type' and 'path'");
    }
    reg.entries.push_back(std::move(e));
  }
  reg.validate();
  return reg;
}

void write_registry(const AssetRegistry& registry, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "target = \"" << registry.target_id << "\"\n";
  const auto base = path.parent_path();
  for (const auto& e : registry.entries) {
    out << "\n[asset." << e.asset_id << "]\n";
    out << "type = \"" << to_string(e.asset_type) << "\"\n";
    std::filesystem::path p = e.path;
    if (!base.empty() && p.parent_path() == base) p = p.filename();
    out << "path = \"" << p.generic_string() << "\"\n";
    if (e.expected_first_date) out << "first_date = \"" << e.expected_first_date->iso() << "\"\n";
  }
}

namespace {

std::vector<Date> business_days(Date start, int count) {
  std::vector<Date> out;
  out.reserve(static_cast<std::size_t>(count));
  Date d = start;
  while (static_cast<int>(out.size()) < count) {
    if (!d.is_weekend()) out.push_back(d);
    d = d.plus_days(1);
  }
  return out;
}

/// Log returns of one asset; planted signs are applied afterwards for the target.
struct RawPath {
  std::vector<double> log_returns;  // one per date; index 0 unused
};

AssetSeries realize(const SyntheticAsset& a, const std::vector<Date>& dates,
                    const std::vector<double>& log_returns, double intraday_noise, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, intraday_noise);
  std::normal_distribution<double> vol_noise(0.0, 0.3);
  AssetSeries s{a.asset_id, a.asset_type, {}};
  double close = 100.0;
  for (std::size_t t = 0; t < dates.size(); ++t) {
    const double prev_close = close;
    if (t > 0) close = prev_close * std::exp(log_returns[t]);
    PriceRow r;
    r.date = dates[t];
    r.close = close;
    r.adjusted_close = close;
    r.open = prev_close * std::exp(noise(rng));
    r.high = std::max(r.open, r.close) * std::exp(std::abs(noise(rng)));
    r.low = std::min(r.open, r.close) * std::exp(-std::abs(noise(rng)));
    if (a.has_volume) r.volume = std::round(1.0e6 * std::exp(vol_noise(rng)));
    if (!a.first_date || !(r.date < *a.first_date)) s.rows.push_back(r);
  }
  return s;
}

}  // namespace

std::vector<AssetSeries> generate_synthetic_universe(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.planted && !(spec.planted->fidelity >= 0.5 && spec.planted->fidelity <= 1.0)) {
    throw Error(ErrorCode::InvalidFidelity, "fidelity must lie in [0.5, 1]");
  }
  if (std::none_of(spec.assets.begin(), spec.assets.end(),
                   [](const SyntheticAsset& a) { return a.asset_type == AssetType::Stock; })) {
    throw Error(ErrorCode::InvalidParameter, "synthetic universe needs a Stock asset");
  }
  if (spec.trading_days < 2) throw Error(ErrorCode::InvalidParameter, "need at least 2 trading days");

  const auto dates = business_days(spec.start, spec.trading_days);
  const std::size_t n = dates.size();

  std::map<std::string, std::vector<double>> paths;
  std::map<std::string, std::uint64_t> stream_seeds;
  for (const auto& a : spec.assets) {
    std::uint64_t s = derive_seed(seed, {hash_string(a.asset_id)});
    stream_seeds[a.asset_id] = s;
    std::mt19937_64 rng(s);
    std::normal_distribution<double> step(a.drift, a.volatility);
    std::vector<double> lr(n, 0.0);
    for (std::size_t t = 1; t < n; ++t) lr[t] = step(rng);
    paths[a.asset_id] = std::move(lr);
  }

  if (spec.planted) {
    auto src = paths.find(spec.planted->source_asset);
    auto dst = paths.find(spec.target_id);
    if (src == paths.end() || dst == paths.end()) {
      throw Error(ErrorCode::InvalidParameter, "planted signal names an unknown asset");
    }
    const SyntheticAsset* src_asset = nullptr;
    for (const auto& a : spec.assets) {
      if (a.asset_id == spec.planted->source_asset) src_asset = &a;
    }
    std::mt19937_64 coin(derive_seed(seed, {hash_string(spec.target_id), hash_string("planted")}));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto& target = dst->second;
    const auto& source = src->second;
    for (std::size_t t = 1; t + 1 < n; ++t) {
      const double draw = u(coin);
      if (src_asset->first_date && dates[t] < *src_asset->first_date) continue;
      const double src_sign = source[t] > 0.0 ? 1.0 : -1.0;
      const double sign = draw < spec.planted->fidelity ? src_sign : -src_sign;
      double mag = std::abs(target[t + 1]);
      if (mag == 0.0) mag = 1e-12;
      target[t + 1] = sign * mag;
    }
  }

  std::vector<AssetSeries> out;
  out.reserve(spec.assets.size());
  for (const auto& a : spec.assets) {
    std::mt19937_64 rng(splitmix64(stream_seeds[a.asset_id] ^ 0x5bd1e995ULL));
    out.push_back(realize(a, dates, paths[a.asset_id], spec.intraday_noise, rng));
  }
  return out;
}

SyntheticSpec default_synthetic_spec(int trading_days, std::optional<double> bond_fidelity) {
  SyntheticSpec spec;
  spec.target_id = "SPY";
  spec.trading_days = trading_days;
  spec.assets = {
      {"SPY", AssetType::Stock, true, 0.0, 0.010, std::nullopt},
      {"EURUSD", AssetType::Forex, false, 0.0, 0.006, std::nullopt},
      {"US10Y", AssetType::Bond, false, 0.0, 0.008, std::nullopt},
      {"ES", AssetType::IndexFuture, true, 0.0, 0.011, std::nullopt},
      {"GC", AssetType::CommodityFuture, true, 0.0, 0.012, std::nullopt},
  };
  if (bond_fidelity) spec.planted = PlantedSignal{"US10Y", *bond_fidelity};
  return spec;
}

}  // namespace intermarket
