#pragma once

#include "intermarket/records.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace intermarket {

// --- special functions -------------------------------------------------------

/// Regularized incomplete beta I_x(a, b) by continued fraction (modified Lentz).
double incomplete_beta(double a, double b, double x);

/// Student-t cumulative distribution.
double t_cdf(double t, double df);

/// Two-sided p-value P(|T| >= |t|).
double t_two_sided_p(double t, double df);

// --- summaries ---------------------------------------------------------------

struct MetricSummary {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 for a single value
  std::size_t count = 0;
};

MetricSummary summarize(const std::vector<double>& values);

struct SummaryRow {
  std::string key;
  std::string level;  // "present"/"absent" in the asset-presence table, else empty
  std::map<std::string, MetricSummary> metrics;
};

/// Out-of-sample records of non-baseline models. For each intermarket type
/// letter seen in the dataset codes: a present row and an absent row over the
/// real datasets, then a "base" row and a "random" row.
std::vector<SummaryRow> summarize_by_asset_presence(const std::vector<EvalRecord>& records);

/// Out-of-sample records of non-baseline models, one row per dataset in
/// subset-size order with "base" and "random" last.
std::vector<SummaryRow> summarize_by_dataset(const std::vector<EvalRecord>& records);

/// One row per model over the real datasets (the random dataset is excluded).
std::vector<SummaryRow> summarize_by_model(const std::vector<EvalRecord>& records, SampleSplit split);

/// Dataset labels in report order.
bool dataset_order_less(const std::string& a, const std::string& b);

// --- effects models ----------------------------------------------------------

struct Observation {
  std::string factors;  // letters of the factors at their high level
  double response = 0.0;
};

struct Effect {
  std::string name;  // factor letter or "Intercept"
  double coef = 0.0;
  double se = 0.0;
  double t = 0.0;
  double p = 0.0;
};

struct OlsResult {
  std::vector<double> coef;
  std::vector<double> se;
  std::vector<double> t;
  std::vector<double> p;
  double sigma2 = 0.0;
  int df = 0;
};

/// Least squares via column-pivoted QR with coefficient t-tests. Throws
/// RankDeficientDesign when X lacks full column rank and InsufficientData when
/// there are no residual degrees of freedom.
OlsResult ols(const Matrix& x, const Vector& y);

enum class EffectsKind { Full, Reduced };

struct EliminationStep {
  std::string dropped;  // factor removed at this step
  double p_value = 0.0; // its p-value in the model it was removed from
  std::vector<Effect> refit;  // effects of the model refitted without it
};

struct EffectsModel {
  std::string model;
  std::string metric;
  EffectsKind kind = EffectsKind::Full;
  std::vector<std::string> factors;  // fitted factors, in F, B, I, C order
  Effect intercept;
  std::vector<Effect> effects;       // parallel to factors
  int df = 0;
  double sigma2 = 0.0;
  std::size_t n = 0;
  std::vector<EliminationStep> trace;
  std::vector<Observation> data;

  const Effect* find(const std::string& factor) const;
};

/// Fits intercept + one 0/1 column per factor.
EffectsModel fit_effects(const std::vector<Observation>& data, const std::vector<std::string>& factors);

/// Full model over the out-of-sample records of one model and metric, random
/// dataset excluded, factors = every letter present in those dataset codes.
EffectsModel fit_ols_effects(const std::vector<EvalRecord>& records, const std::string& model,
                             const std::string& metric);

/// Backward elimination: while the largest effect p-value exceeds alpha, drop
/// that effect and refit. The intercept always stays.
EffectsModel reduce_effects(const EffectsModel& full, double alpha);

// --- report ------------------------------------------------------------------

struct Table {
  std::string name;   // file stem
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> notes;
  /// Machine-readable twin at full precision.
  std::vector<std::string> csv_columns;
  std::vector<std::vector<std::string>> csv_rows;
};

struct AnovaPair {
  EffectsModel full;
  EffectsModel reduced;
};

struct ReportBundle {
  std::string config_hash;
  double alpha = 0.05;
  std::vector<Table> tables;
  /// Per model (record order), one full/reduced pair per metric.
  std::vector<std::pair<std::string, std::vector<AnovaPair>>> anova;
  /// (model, metric) pairs that could not be fitted, with the reason.
  std::vector<std::string> skipped;
};

ReportBundle analyze_records(const RecordFile& file, double alpha);

std::string render_markdown(const Table& t);
std::string render_csv(const Table& t);

/// Writes <dir>/<name>.md and <dir>/<name>.csv for every table, plus
/// <dir>/report.md (all tables) and <dir>/anova.json. Every file carries the
/// config hash in a leading comment line.
void write_report(const ReportBundle& bundle, const std::string& dir);

}  // namespace intermarket
