#pragma once

#include "intermarket/common.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace intermarket {

enum class Family {
  DecisionTree,
  RandomForest,
  LogisticRegression,
  LinearSVM,
  KNN,
  RandomBaseline,
  ConstantBaseline,
  PreviousBaseline,
  ConsensusBaseline,
};

std::string_view family_name(Family f);
Family parse_family(std::string_view name);
bool is_baseline(Family f);
/// Learners first, then baselines; this order is also the record order.
const std::vector<Family>& all_families();

/// std::monostate stands for "None" (e.g. an unlimited max_depth).
using ParamValue = std::variant<std::monostate, std::int64_t, double, std::string>;

std::string param_to_string(const ParamValue& v);
bool param_equal(const ParamValue& a, const ParamValue& b);

struct Param {
  std::string name;
  ParamValue value;
};

struct ModelSpec {
  Family family = Family::DecisionTree;
  std::vector<Param> params;

  const ParamValue* find(std::string_view name) const;
  std::int64_t get_int(std::string_view name, std::int64_t fallback) const;
  double get_double(std::string_view name, double fallback) const;
  std::string get_string(std::string_view name, const std::string& fallback) const;
  /// Present and None.
  bool is_none(std::string_view name) const;

  /// "family{a=1,b=x}" in parameter order.
  std::string to_string() const;
};

/// A view of consecutive windows. `target_lags` holds the raw target returns
/// preceding each window end (used only by the naive baselines).
struct Samples {
  MatrixRef features;
  std::span<const int> labels;
  MatrixRef target_lags;

  std::size_t size() const { return static_cast<std::size_t>(features.rows()); }
};

struct FitInfo {
  bool converged = true;
  int iterations = 0;
  /// Objective value after each optimizer iteration, for solvers that expose one.
  std::vector<double> objective_trace;
};

/// Fitted models are immutable; every method is const and thread-safe.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual Family family() const = 0;
  virtual std::vector<int> predict(const Samples& x) const = 0;
  virtual bool has_scores() const { return true; }
  /// Monotone confidence for class +1. Throws InvalidParameter when !has_scores().
  virtual std::vector<double> score(const Samples& x) const = 0;
  virtual double threshold() const { return 0.0; }
  /// False for baselines whose constant scores are unrelated to their predictions.
  virtual bool score_determines_prediction() const { return has_scores(); }
  virtual const FitInfo& info() const { return info_; }
  /// Diagnostic text dump with a versioned header; not a stable format.
  virtual std::string dump() const = 0;

 protected:
  FitInfo info_;
};

void check_training_set(const MatrixRef& x, std::span<const int> y);

}  // namespace intermarket
