#include <doctest.h>

#include <intermarket/common.hpp>
#include <intermarket/kvconfig.hpp>

#include <cmath>
#include <limits>
#include <random>
#include <set>

namespace im = intermarket;

namespace {

template <class F>
im::ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const im::Error& e) {
    return e.code();
  }
  FAIL("expected an intermarket::Error");
  return im::ErrorCode::IoError;
}

}  // namespace

TEST_CASE("dates parse strictly and print back") {
  const auto d = im::Date::parse("2012-07-09");
  CHECK(d.iso() == "2012-07-09");
  CHECK(d == im::Date(2012, 7, 9));
  CHECK(d.plus_days(1).iso() == "2012-07-10");
  CHECK(im::Date(2024, 2, 29).plus_days(1).iso() == "2024-03-01");
  CHECK(im::Date(2000, 1, 1).is_weekend());
  CHECK_FALSE(im::Date(2000, 1, 3).is_weekend());
  CHECK(im::Date(2000, 1, 3) < im::Date(2000, 1, 4));

  for (const char* bad : {"2012-7-09", "2012/07/09", "2012-02-30", "abcd-ef-gh", "2012-07-09 ", ""}) {
    CHECK(code_of([&] { (void)im::Date::parse(bad); }) == im::ErrorCode::MalformedRow);
  }
}

TEST_CASE("asset types and letters") {
  CHECK(im::type_letter(im::AssetType::Forex) == 'F');
  CHECK(im::type_letter(im::AssetType::Bond) == 'B');
  CHECK(im::type_letter(im::AssetType::IndexFuture) == 'I');
  CHECK(im::type_letter(im::AssetType::CommodityFuture) == 'C');
  for (auto t : {im::AssetType::Stock, im::AssetType::Bond, im::AssetType::Forex, im::AssetType::IndexFuture,
                 im::AssetType::CommodityFuture}) {
    CHECK(im::parse_asset_type(im::to_string(t)) == t);
  }
  CHECK(code_of([] { (void)im::parse_asset_type("Crypto"); }) == im::ErrorCode::InvalidRegistry);
}

TEST_CASE("format_double round-trips bit-exactly") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 5000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(im::parse_double(im::format_double(v)) == v);
  }
  CHECK(im::format_double(0.1) == "0.1");
  CHECK(im::format_double(1.0) == "1");
  CHECK(im::parse_double(im::format_double(std::numeric_limits<double>::denorm_min())) ==
        std::numeric_limits<double>::denorm_min());
  CHECK(code_of([] { (void)im::parse_double("1.5x"); }) == im::ErrorCode::MalformedRow);
}

TEST_CASE("derived seeds depend on every key and its position") {
  const auto a = im::derive_seed(7, {1, 2, 3});
  CHECK(a == im::derive_seed(7, {1, 2, 3}));
  CHECK(a != im::derive_seed(7, {3, 2, 1}));
  CHECK(a != im::derive_seed(8, {1, 2, 3}));
  CHECK(a != im::derive_seed(7, {1, 2}));
  std::set<std::uint64_t> seen;
  for (std::uint64_t r = 0; r < 1000; ++r) seen.insert(im::derive_seed(42, {0, im::hash_string("FB"), r}));
  CHECK(seen.size() == 1000);
  CHECK(im::hash_string("B") != im::hash_string("C"));
}

TEST_CASE("kv documents: values, sections and order") {
  const auto doc = im::parse_kv(R"(# leading comment
name = "run one"   # trailing comment
count = 12
ratio = 1.5e-3
flag = true
list = ["a", "b"]
neg = -4

[asset.SPY]
type = "Stock"
path = "spy # not a comment.csv"
)");
  REQUIRE(doc.sections.size() == 2);
  const auto& root = doc.root();
  CHECK(root.entries.size() == 6);
  CHECK(root.entries[0].first == "name");
  CHECK(root.find("name")->as_string("name") == "run one");
  CHECK(root.find("count")->as_int("count") == 12);
  CHECK(root.find("count")->as_double("count") == 12.0);
  CHECK(root.find("ratio")->as_double("ratio") == doctest::Approx(1.5e-3));
  CHECK(root.find("flag")->as_bool("flag"));
  CHECK(root.find("list")->as_string_list("list") == std::vector<std::string>{"a", "b"});
  CHECK(root.find("neg")->as_int("neg") == -4);
  CHECK(root.find("missing") == nullptr);
  CHECK(doc.sections[1].name == "asset.SPY");
  CHECK(doc.sections[1].find("path")->as_string("path") == "spy # not a comment.csv");
}

TEST_CASE("kv documents reject malformed input") {
  for (const char* bad : {"a = 1\na = 2\n", "[s]\n[s]\n", "novalue\n", "a = \"open\n", "a = [1, 2\n",
                          "= 3\n", "a = tru\n"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { (void)im::parse_kv(bad); }) == im::ErrorCode::ConfigError);
  }
  const auto doc = im::parse_kv("n = 3\n");
  CHECK(code_of([&] { (void)doc.root().find("n")->as_string("n"); }) == im::ErrorCode::ConfigError);
  CHECK(code_of([] { (void)im::parse_kv_file("/nonexistent/intermarket.toml"); }) == im::ErrorCode::IoError);
}
