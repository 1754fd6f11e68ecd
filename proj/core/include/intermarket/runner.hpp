#pragma once

#include "intermarket/dataset.hpp"
#include "intermarket/ingest.hpp"
#include "intermarket/kvconfig.hpp"
#include "intermarket/learners.hpp"
#include "intermarket/records.hpp"
#include "intermarket/tuning.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace intermarket {

struct RunConfig {
  std::string registry;  // asset registry path
  std::size_t window = 5;
  double train_fraction = 0.8;
  int cv_folds = 5;
  int replications = 50;
  double alpha = 0.05;
  int consensus_n = 5;
  std::uint64_t seed = 0;
  StandardizeOn standardize_on = StandardizeOn::Full;
  std::string output_dir = "results";
  std::vector<std::string> models;    // empty: every family
  std::vector<std::string> datasets;  // empty: every dataset
  GridProfile grid = GridProfile::Full;
  bool svm_dual = true;
  std::string label_feature = "adjusted_close";
  bool cv_audit = false;  // write one CV audit CSV per evaluation
  int threads = 0;        // 0: INTERMARKET_THREADS, else hardware concurrency

  /// Canonical `key = value` lines of every setting that affects results.
  std::string canonical() const;
  /// 16 hex digits over canonical().
  std::string hash() const;
  nlohmann::json to_json() const;
  void validate() const;
};

/// Root-level keys only; unknown keys, wrong types and out-of-range values
/// are ConfigError. A relative registry path is resolved against `base_dir`.
RunConfig parse_run_config(const KvDocument& doc, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Loads every registered asset and computes returns.
Universe load_universe(const AssetRegistry& registry);

/// Worker count: explicit request, else INTERMARKET_THREADS, else the hardware default.
int resolve_threads(int requested);

struct Selection {
  std::string model;
  std::string dataset;
  int replication = 0;
  std::string spec;
  double cv_score = 0.0;
  std::size_t zero_scored = 0;
  bool converged = true;
};

struct RunOutput {
  RecordFile records;
  nlohmann::json manifest;
  std::vector<Selection> selections;
  std::vector<std::string> failures;  // one entry per (model, dataset, replication) gap
  /// File name -> CV audit CSV, filled when cv_audit is on.
  std::vector<std::pair<std::string, std::string>> cv_audits;
};

using LogFn = std::function<void(const std::string&)>;

/// Per replication: grid search on the training windows, refit, then in- and
/// out-of-sample metrics. Work items run in parallel; records come out in
/// (dataset, model, replication) order regardless of the thread count.
RunOutput run_experiment(const RunConfig& config, const Universe& universe, const LogFn& log = {});
RunOutput run_experiment(const RunConfig& config, const LogFn& log = {});

/// records.csv, manifest.json and (if enabled) cv/ audit files.
void write_run_outputs(const RunConfig& config, const RunOutput& out, const std::filesystem::path& dir);

std::string_view software_version();

}  // namespace intermarket
