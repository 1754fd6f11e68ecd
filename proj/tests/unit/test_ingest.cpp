#include <doctest.h>

#include <intermarket/ingest.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

#include <cmath>
#include <fstream>

namespace im = intermarket;
using fixtures::TempDir;

namespace {

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

im::ErrorCode load_error(const std::filesystem::path& p) {
  try {
    (void)im::load_asset_csv(p, "X", im::AssetType::Stock);
  } catch (const im::Error& e) {
    return e.code();
  }
  FAIL("load should have failed");
  return im::ErrorCode::IoError;
}

im::AssetSeries random_series(std::mt19937_64& rng, std::size_t n, bool volume) {
  std::lognormal_distribution<double> step(0.0, 0.02);
  im::AssetSeries s{"RND", im::AssetType::Bond, {}};
  double price = 50.0;
  im::Date d(2001, 1, 1);
  for (std::size_t i = 0; i < n; ++i) {
    price *= step(rng);
    im::PriceRow r;
    r.date = d;
    r.open = price * step(rng);
    r.high = price * 1.01;
    r.low = price * 0.99;
    r.close = price;
    r.adjusted_close = price * 0.98;
    if (volume) r.volume = static_cast<double>(rng() % 1000000);
    s.rows.push_back(r);
    d = d.plus_days(1 + static_cast<int>(rng() % 3));
  }
  return s;
}

std::vector<double> column(const im::AssetSeries& s, double im::PriceRow::*field) {
  std::vector<double> v;
  for (const auto& r : s.rows) v.push_back(r.*field);
  return v;
}

}  // namespace

TEST_CASE("a well-formed file loads sorted by date") {
  TempDir dir("ingest");
  write_text(dir / "a.csv",
             "date,open,high,low,close,adjusted_close,volume\n"
             "2020-01-03,10,11,9,10.5,10.5,100\n"
             "2020-01-01,10,11,9,10,10,200\n"
             "2020-01-02,10,11,9,10.2,10.2,150\n");
  im::LoadReport report;
  const auto s = im::load_asset_csv(dir / "a.csv", "A", im::AssetType::Stock, &report);
  REQUIRE(s.rows.size() == 3);
  CHECK(s.rows[0].date.iso() == "2020-01-01");
  CHECK(s.rows[2].date.iso() == "2020-01-03");
  CHECK(s.rows[1].close == 10.2);
  CHECK(s.has_volume());
  CHECK(report.rows_read == 3);
  CHECK(report.rows_dropped_missing_price == 0);
  CHECK_FALSE(report.volume_dropped);
}

TEST_CASE("load errors") {
  TempDir dir("ingest");
  const std::string head = "date,open,high,low,close,adjusted_close,volume\n";
  write_text(dir / "dup.csv", head + "2020-01-01,1,1,1,1,1,1\n2020-01-01,2,2,2,2,2,2\n");
  CHECK(load_error(dir / "dup.csv") == im::ErrorCode::DuplicateDate);
  write_text(dir / "neg.csv", head + "2020-01-01,1,1,-1,1,1,1\n");
  CHECK(load_error(dir / "neg.csv") == im::ErrorCode::NonPositivePrice);
  write_text(dir / "zero.csv", head + "2020-01-01,1,1,1,0,1,1\n");
  CHECK(load_error(dir / "zero.csv") == im::ErrorCode::NonPositivePrice);
  write_text(dir / "text.csv", head + "2020-01-01,1,abc,1,1,1,1\n");
  CHECK(load_error(dir / "text.csv") == im::ErrorCode::MalformedRow);
  write_text(dir / "short.csv", head + "2020-01-01,1,1,1,1\n");
  CHECK(load_error(dir / "short.csv") == im::ErrorCode::MalformedRow);
  write_text(dir / "header.csv", "date,close\n2020-01-01,1\n");
  CHECK(load_error(dir / "header.csv") == im::ErrorCode::MalformedRow);
  write_text(dir / "date.csv", head + "01/02/2020,1,1,1,1,1,1\n");
  CHECK(load_error(dir / "date.csv") == im::ErrorCode::MalformedRow);
  CHECK(load_error(dir / "absent.csv") == im::ErrorCode::IoError);
}

TEST_CASE("rows with a missing price are dropped and counted; missing volume drops the feature") {
  TempDir dir("ingest");
  write_text(dir / "m.csv",
             "date,open,high,low,close,adjusted_close,volume\n"
             "2020-01-01,1,1,1,1,1,\n"
             "2020-01-02,1,,1,1,1,\n"
             "2020-01-03,1,1,1,2,2,\n");
  im::LoadReport report;
  const auto s = im::load_asset_csv(dir / "m.csv", "M", im::AssetType::Forex, &report);
  CHECK(s.rows.size() == 2);
  CHECK(report.rows_dropped_missing_price == 1);
  CHECK(report.volume_dropped);
  const auto r = im::compute_returns(s);
  CHECK(r.feature_names.size() == 5);
  CHECK(r.values(0, r.feature_index("close")) == 1.0);
  CHECK_THROWS_AS((void)r.feature_index("volume"), im::Error);
}

TEST_CASE("write then load reproduces the series and the bytes") {
  std::mt19937_64 rng(5);
  TempDir dir("ingest");
  for (bool volume : {true, false}) {
    const auto s = random_series(rng, 500, volume);
    im::write_asset_csv(s, dir / "s.csv");
    const auto back = im::load_asset_csv(dir / "s.csv", s.asset_id, s.asset_type);
    CHECK(back == s);
    im::write_asset_csv(back, dir / "t.csv");
    CHECK(fixtures::slurp(dir / "s.csv") == fixtures::slurp(dir / "t.csv"));
  }
}

TEST_CASE("percent-change returns") {
  im::AssetSeries s{"A", im::AssetType::Stock, {}};
  const double closes[] = {100, 105, 105};
  for (int i = 0; i < 3; ++i) {
    s.rows.push_back({im::Date(2020, 1, 1 + i), 1, 1, 1, closes[i], closes[i], 10});
  }
  const auto r = im::compute_returns(s);
  REQUIRE(r.size() == 2);
  const auto c = r.feature_index("close");
  CHECK(r.values(0, c) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(r.values(1, c) == 0.0);
  CHECK(r.dates[0] == im::Date(2020, 1, 2));
  CHECK(r.values(0, r.feature_index("volume")) == 0.0);

  im::AssetSeries one{"A", im::AssetType::Stock, {s.rows[0]}};
  CHECK_THROWS_AS((void)im::compute_returns(one), im::Error);
}

TEST_CASE("returns match the elementwise oracle on 1000 rows") {
  std::mt19937_64 rng(9);
  const auto s = random_series(rng, 1000, true);
  const auto r = im::compute_returns(s);
  CHECK(r.size() == 999);
  double im::PriceRow::*fields[] = {&im::PriceRow::open, &im::PriceRow::high, &im::PriceRow::low,
                                    &im::PriceRow::close, &im::PriceRow::adjusted_close};
  for (int k = 0; k < 5; ++k) {
    const auto ref = oracle::pct_change(column(s, fields[k]));
    for (std::size_t t = 0; t < ref.size(); ++t) {
      const double got = r.values(static_cast<Eigen::Index>(t), k);
      CHECK(std::abs(got - ref[t]) <= 1e-15 * std::max(1.0, std::abs(ref[t])));
    }
  }
}

TEST_CASE("returns are invariant to scaling every price") {
  std::mt19937_64 rng(10);
  const auto s = random_series(rng, 300, false);
  for (double c : {0.5, 3.0, 1024.0}) {
    auto scaled = s;
    for (auto& row : scaled.rows) {
      row.open *= c;
      row.high *= c;
      row.low *= c;
      row.close *= c;
      row.adjusted_close *= c;
    }
    const auto a = im::compute_returns(s);
    const auto b = im::compute_returns(scaled);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("zero previous volume gives a zero return") {
  im::AssetSeries s{"V", im::AssetType::IndexFuture, {}};
  s.rows.push_back({im::Date(2020, 1, 1), 1, 1, 1, 1, 1, 0.0});
  s.rows.push_back({im::Date(2020, 1, 2), 1, 1, 1, 1, 1, 500.0});
  s.rows.push_back({im::Date(2020, 1, 3), 1, 1, 1, 1, 1, 250.0});
  const auto r = im::compute_returns(s);
  const auto v = r.feature_index("volume");
  CHECK(r.values(0, v) == 0.0);
  CHECK(r.values(1, v) == -0.5);
}

TEST_CASE("registry files") {
  TempDir dir("registry");
  write_text(dir / "reg.toml",
             "target = \"SPY\"\n"
             "[asset.SPY]\ntype = \"Stock\"\npath = \"spy.csv\"\n"
             "[asset.JGB]\ntype = \"Bond\"\npath = \"data/jgb.csv\"\nfirst_date = \"2012-07-09\"\n"
             "[asset.EUR]\ntype = \"Forex\"\npath = \"/abs/eur.csv\"\n");
  const auto reg = im::load_registry(dir / "reg.toml");
  CHECK(reg.target_id == "SPY");
  REQUIRE(reg.entries.size() == 3);
  CHECK(reg.entries[1].asset_type == im::AssetType::Bond);
  CHECK(reg.entries[1].path == dir / "data/jgb.csv");
  CHECK(reg.entries[2].path == "/abs/eur.csv");
  CHECK(reg.entries[1].expected_first_date == im::Date(2012, 7, 9));
  CHECK(reg.intermarket_types() == std::vector{im::AssetType::Forex, im::AssetType::Bond});
  CHECK(reg.target().asset_id == "SPY");

  im::write_registry(reg, dir / "copy.toml");
  const auto again = im::load_registry(dir / "copy.toml");
  CHECK(again.entries.size() == 3);
  CHECK(again.entries[1].path == reg.entries[1].path);

  auto code = [&](const std::string& text) {
    write_text(dir / "bad.toml", text);
    try {
      (void)im::load_registry(dir / "bad.toml");
    } catch (const im::Error& e) {
      return e.code();
    }
    return im::ErrorCode::IoError;
  };
  CHECK(code("[asset.SPY]\ntype = \"Stock\"\npath = \"a\"\n") == im::ErrorCode::InvalidRegistry);
  CHECK(code("target = \"SPY\"\n[asset.SPY]\ntype = \"Stock\"\npath = \"a\"\ncolour = 1\n") ==
        im::ErrorCode::InvalidRegistry);
  CHECK(code("target = \"SPY\"\n[asset.SPY]\ntype = \"Bond\"\npath = \"a\"\n") == im::ErrorCode::InvalidRegistry);
  CHECK(code("target = \"SPY\"\n[asset.SPY]\ntype = \"Stock\"\npath = \"a\"\n"
             "[asset.QQQ]\ntype = \"Stock\"\npath = \"b\"\n") == im::ErrorCode::InvalidRegistry);
}

TEST_CASE("synthetic universes are reproducible and validated") {
  const auto spec = im::default_synthetic_spec(400, 0.9);
  const auto a = im::generate_synthetic_universe(spec, 42);
  const auto b = im::generate_synthetic_universe(spec, 42);
  CHECK(a == b);
  CHECK(a != im::generate_synthetic_universe(spec, 43));
  REQUIRE(a.size() == 5);
  for (const auto& s : a) {
    CHECK_NOTHROW(s.validate());
    CHECK(s.rows.size() == 400);
    CHECK_FALSE(s.rows.front().date.is_weekend());
  }

  // Each asset has its own stream: reordering the spec does not change any series.
  auto reordered = spec;
  std::reverse(reordered.assets.begin(), reordered.assets.end());
  auto c = im::generate_synthetic_universe(reordered, 42);
  std::reverse(c.begin(), c.end());
  CHECK(a == c);

  auto bad = spec;
  bad.planted->fidelity = 0.4;
  CHECK_THROWS_AS((void)im::generate_synthetic_universe(bad, 1), im::Error);
  bad.planted->fidelity = 1.01;
  try {
    (void)im::generate_synthetic_universe(bad, 1);
    FAIL("expected InvalidFidelity");
  } catch (const im::Error& e) {
    CHECK(e.code() == im::ErrorCode::InvalidFidelity);
  }
}

namespace {

/// Pairs (sign of source close return on day t, sign of target close return on the next day).
std::vector<std::pair<int, int>> planted_pairs(double fidelity, int days, std::uint64_t seed) {
  const auto raw = im::generate_synthetic_universe(im::default_synthetic_spec(days, fidelity), seed);
  const im::AssetSeries* spy = nullptr;
  const im::AssetSeries* bond = nullptr;
  for (const auto& s : raw) {
    if (s.asset_id == "SPY") spy = &s;
    if (s.asset_type == im::AssetType::Bond) bond = &s;
  }
  const auto rs = im::compute_returns(*spy);
  const auto rb = im::compute_returns(*bond);
  const auto cs = rs.feature_index("close");
  const auto cb = rb.feature_index("close");
  std::vector<std::pair<int, int>> out;
  for (std::size_t t = 0; t + 1 < rb.size(); ++t) {
    REQUIRE(rs.dates[t] == rb.dates[t]);
    out.emplace_back(rb.values(static_cast<Eigen::Index>(t), cb) > 0 ? 1 : -1,
                     rs.values(static_cast<Eigen::Index>(t + 1), cs) > 0 ? 1 : -1);
  }
  return out;
}

}  // namespace

TEST_CASE("planted fidelity 1 copies the source sign every day") {
  for (const auto& [src, dst] : planted_pairs(1.0, 2000, 3)) CHECK(src == dst);
}

TEST_CASE("planted fidelity 0.5 leaves the target independent of the source") {
  const auto pairs = planted_pairs(0.5, 10000, 4);
  double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
  for (const auto& [a, b] : pairs) {
    sx += a;
    sy += b;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  const double n = static_cast<double>(pairs.size());
  const double corr = (sxy / n - sx / n * sy / n) /
                      std::sqrt((sxx / n - sx / n * sx / n) * (syy / n - sy / n * sy / n));
  CHECK(std::abs(corr) < 0.05);
}
