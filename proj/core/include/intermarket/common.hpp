#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

namespace intermarket {

/// Row-major so that a sample (one window) is a contiguous row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixRef = Eigen::Ref<const Matrix>;
using Vector = Eigen::VectorXd;

enum class ErrorCode {
  MalformedRow,
  NonPositivePrice,
  DuplicateDate,
  DivisionByZeroReturn,
  InvalidFidelity,
  InvalidRegistry,
  InsufficientData,
  EmptyIntersection,
  EmptyTrainingSet,
  IncompatibleCombination,
  TooFewSamples,
  InvalidParameter,
  AllCombinationsInvalid,
  SingleClassPresent,
  RankDeficientDesign,
  ConfigError,
  IoError,
  EmptyRecords,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Calendar day without timezone.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days d) : days_(d) {}
  Date(int year, unsigned month, unsigned day);

  /// Strict `YYYY-MM-DD`; throws Error(MalformedRow) otherwise.
  static Date parse(std::string_view text);

  std::string iso() const;
  std::chrono::sys_days sys_days() const { return days_; }
  std::int64_t serial() const { return days_.time_since_epoch().count(); }
  Date plus_days(int n) const { return Date(days_ + std::chrono::days(n)); }
  bool is_weekend() const;

  friend constexpr auto operator<=>(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

enum class AssetType { Stock, Bond, Forex, IndexFuture, CommodityFuture };

std::string_view to_string(AssetType t);
AssetType parse_asset_type(std::string_view text);

/// Single-letter code used in dataset names: F, B, I, C (empty for Stock).
char type_letter(AssetType t);

// --- seeding -------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t hash_string(std::string_view s);
/// Order-sensitive combination of a base seed with further keys.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys);

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

}  // namespace intermarket
