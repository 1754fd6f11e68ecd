#include "intermarket/common.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <system_error>

namespace intermarket {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonPositivePrice: return "NonPositivePrice";
    case ErrorCode::DuplicateDate: return "DuplicateDate";
    case ErrorCode::DivisionByZeroReturn: return "DivisionByZeroReturn";
    case ErrorCode::InvalidFidelity: return "InvalidFidelity";
    case ErrorCode::InvalidRegistry: return "InvalidRegistry";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::EmptyIntersection: return "EmptyIntersection";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::IncompatibleCombination: return "IncompatibleCombination";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::AllCombinationsInvalid: return "AllCombinationsInvalid";
    case ErrorCode::SingleClassPresent: return "SingleClassPresent";
    case ErrorCode::RankDeficientDesign: return "RankDeficientDesign";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyRecords: return "EmptyRecords";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

Date::Date(int year, unsigned month, unsigned day) {
  std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                  std::chrono::day{day}};
  if (!ymd.ok()) {
    throw Error(ErrorCode::MalformedRow, "invalid calendar date");
  }
  days_ = std::chrono::sys_days{ymd};
}

Date Date::parse(std::string_view text) {
  auto bad = [&] { return Error(ErrorCode::MalformedRow, "bad date '" + std::string(text) + "'"); };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
  auto num = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    auto [p, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, v);
    if (ec != std::errc{} || p != text.data() + pos + len) throw bad();
    return v;
  };
  const int y = num(0, 4);
  const int m = num(5, 2);
  const int d = num(8, 2);
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw bad();
  return Date(std::chrono::sys_days{ymd});
}

std::string Date::iso() const {
  std::chrono::year_month_day ymd{days_};
  std::array<char, 16> buf{};
  std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return std::string(buf.data());
}

bool Date::is_weekend() const {
  std::chrono::weekday wd{days_};
  return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

std::string_view to_string(AssetType t) {
  switch (t) {
    case AssetType::Stock: return "Stock";
    case AssetType::Bond: return "Bond";
    case AssetType::Forex: return "Forex";
    case AssetType::IndexFuture: return "IndexFuture";
    case AssetType::CommodityFuture: return "CommodityFuture";
  }
  return "Unknown";
}

AssetType parse_asset_type(std::string_view text) {
  if (text == "Stock") return AssetType::Stock;
  if (text == "Bond") return AssetType::Bond;
  if (text == "Forex") return AssetType::Forex;
  if (text == "IndexFuture") return AssetType::IndexFuture;
  if (text == "CommodityFuture") return AssetType::CommodityFuture;
  throw Error(ErrorCode::InvalidRegistry, "unknown asset type '" + std::string(text) + "'");
}

char type_letter(AssetType t) {
  switch (t) {
    case AssetType::Forex: return 'F';
    case AssetType::Bond: return 'B';
    case AssetType::IndexFuture: return 'I';
    case AssetType::CommodityFuture: return 'C';
    case AssetType::Stock: return '\0';
  }
  return '\0';
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(h);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw Error(ErrorCode::IoError, "cannot format double");
  return std::string(buf.data(), p);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size()) {
    throw Error(ErrorCode::MalformedRow, "bad number '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace intermarket
