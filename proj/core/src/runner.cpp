#include "intermarket/runner.hpp"

#include "intermarket/metrics.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#ifndef INTERMARKET_VERSION
#define INTERMARKET_VERSION "0.0.0"
#endif

namespace intermarket {

std::string_view software_version() { return INTERMARKET_VERSION; }

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
  return out;
}

std::string_view standardize_name(StandardizeOn s) { return s == StandardizeOn::Full ? "full" : "train"; }

}  // namespace

std::string RunConfig::canonical() const {
  std::ostringstream out;
  out << "alpha = " << format_double(alpha) << '\n'
      << "consensus_n = " << consensus_n << '\n'
      << "cv_folds = " << cv_folds << '\n'
      << "datasets = [" << join(datasets) << "]\n"
      << "grid = " << grid_profile_name(grid) << '\n'
      << "label_feature = " << label_feature << '\n'
      << "models = [" << join(models) << "]\n"
      << "registry = " << registry << '\n'
      << "replications = " << replications << '\n'
      << "seed = " << seed << '\n'
      << "standardize_on = " << standardize_name(standardize_on) << '\n'
      << "svm_dual = " << (svm_dual ? "true" : "false") << '\n'
      << "train_fraction = " << format_double(train_fraction) << '\n'
      << "window = " << window << '\n';
  return out.str();
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_string(canonical())));
  return buf;
}

nlohmann::json RunConfig::to_json() const {
  return {{"registry", registry},
          {"window", window},
          {"train_fraction", train_fraction},
          {"cv_folds", cv_folds},
          {"replications", replications},
          {"alpha", alpha},
          {"consensus_n", consensus_n},
          {"seed", seed},
          {"standardize_on", standardize_name(standardize_on)},
          {"output_dir", output_dir},
          {"models", models},
          {"datasets", datasets},
          {"grid", grid_profile_name(grid)},
          {"svm_dual", svm_dual},
          {"label_feature", label_feature},
          {"cv_audit", cv_audit}};
}

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::ConfigError, m); };
  if (window < 1) fail("window must be at least 1");
  if (!(train_fraction > 0 && train_fraction < 1)) fail("train_fraction must lie in (0, 1)");
  if (cv_folds < 2) fail("cv_folds must be at least 2");
  if (replications < 1) fail("replications must be at least 1");
  if (!(alpha > 0 && alpha < 1)) fail("alpha must lie in (0, 1)");
  if (consensus_n < 1) fail("consensus_n must be at least 1");
  if (threads < 0) fail("threads must be non-negative");
  for (const auto& m : models) {
    try {
      parse_family(m);
    } catch (const Error&) {
      fail("unknown model: " + m);
    }
  }
  for (const auto& d : datasets) {
    try {
      spec_from_label(d);
    } catch (const Error&) {
      fail("unknown dataset: " + d);
    }
  }
}

RunConfig parse_run_config(const KvDocument& doc, const std::filesystem::path& base_dir) {
  if (doc.sections.size() > 1) {
    throw Error(ErrorCode::ConfigError, "unexpected section [" + doc.sections[1].name + "] in run config");
  }
  RunConfig c;
  for (const auto& [key, v] : doc.root().entries) {
    if (key == "registry") {
      std::filesystem::path p = v.as_string(key);
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      c.registry = p.lexically_normal().string();
    } else if (key == "window") {
      const auto w = v.as_int(key);
      if (w < 1) throw Error(ErrorCode::ConfigError, "window must be at least 1");
      c.window = static_cast<std::size_t>(w);
    } else if (key == "train_fraction") {
      c.train_fraction = v.as_double(key);
    } else if (key == "cv_folds") {
      c.cv_folds = static_cast<int>(v.as_int(key));
    } else if (key == "replications") {
      c.replications = static_cast<int>(v.as_int(key));
    } else if (key == "alpha") {
      c.alpha = v.as_double(key);
    } else if (key == "consensus_n") {
      c.consensus_n = static_cast<int>(v.as_int(key));
    } else if (key == "seed") {
      const auto s = v.as_int(key);
      if (s < 0) throw Error(ErrorCode::ConfigError, "seed must be non-negative");
      c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "standardize_on") {
      const auto s = v.as_string(key);
      if (s == "full") c.standardize_on = StandardizeOn::Full;
      else if (s == "train") c.standardize_on = StandardizeOn::Train;
      else throw Error(ErrorCode::ConfigError, "standardize_on must be \"full\" or \"train\"");
    } else if (key == "output_dir") {
      std::filesystem::path p = v.as_string(key);
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      c.output_dir = p.lexically_normal().string();
    } else if (key == "models") {
      c.models = v.as_string_list(key);
    } else if (key == "datasets") {
      c.datasets = v.as_string_list(key);
    } else if (key == "grid") {
      c.grid = parse_grid_profile(v.as_string(key));
    } else if (key == "svm_dual") {
      c.svm_dual = v.as_bool(key);
    } else if (key == "label_feature") {
      c.label_feature = v.as_string(key);
    } else if (key == "cv_audit") {
      c.cv_audit = v.as_bool(key);
    } else if (key == "threads") {
      c.threads = static_cast<int>(v.as_int(key));
    } else {
      throw Error(ErrorCode::ConfigError, "unknown config key: " + key);
    }
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(parse_kv_file(path), path.parent_path());
}

Universe load_universe(const AssetRegistry& registry) {
  registry.validate();
  std::vector<AssetSeries> raw;
  for (const auto& e : registry.entries) {
    raw.push_back(load_asset_csv(e.path, e.asset_id, e.asset_type));
    if (e.expected_first_date && !raw.back().rows.empty() && raw.back().rows.front().date != *e.expected_first_date) {
      throw Error(ErrorCode::InvalidRegistry, e.asset_id + " starts on " + raw.back().rows.front().date.iso() +
                                                  ", registry expects " + e.expected_first_date->iso());
    }
  }
  return make_universe(raw, registry.target_id);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("INTERMARKET_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

struct WorkItem {
  std::size_t dataset;
  Family family;
  int replication;
};

struct ItemResult {
  std::vector<EvalRecord> records;
  std::optional<Selection> selection;
  std::string failure;
  std::string audit;
  std::vector<std::string> warnings;
};

void append_metrics(std::vector<EvalRecord>& out, const std::string& model, const std::string& dataset, int rep,
                    SampleSplit split, const Classifier& clf, const Samples& s, std::vector<std::string>& warnings) {
  const auto pred = clf.predict(s);
  std::optional<std::vector<double>> scores;
  if (clf.has_scores()) scores = clf.score(s);
  const auto f1 = f1_scores(s.labels, pred);
  auto push = [&](const char* metric, double v) { out.push_back({model, dataset, rep, split, metric, v}); };
  push("accuracy", accuracy(s.labels, pred));
  push("macro_f1", f1.macro);
  push("weighted_f1", f1.weighted);
  if (scores) {
    try {
      push("auc", roc_auc(s.labels, *scores));
    } catch (const Error& e) {
      warnings.push_back(model + "/" + dataset + "/" + std::to_string(rep) + "/" + std::string(split_name(split)) +
                         ": " + e.what());
    }
  }
}

ItemResult run_item(const RunConfig& config, const AssembledDataset& ds, const WorkItem& item) {
  ItemResult res;
  const std::string model(family_name(item.family));
  const std::string dataset = ds.spec.label();
  const auto& all = all_families();
  const auto family_id =
      static_cast<std::uint64_t>(std::find(all.begin(), all.end(), item.family) - all.begin());
  const std::uint64_t seed = derive_seed(
      config.seed, {family_id, hash_string(dataset), static_cast<std::uint64_t>(item.replication)});
  const auto n_train = static_cast<Eigen::Index>(ds.train_end);
  const auto n_test = static_cast<Eigen::Index>(ds.test_size());
  const std::span<const int> labels(ds.labels);
  const Samples train{ds.windows.topRows(n_train), labels.subspan(0, ds.train_end), ds.target_lags.topRows(n_train)};
  const Samples test{ds.windows.bottomRows(n_test), labels.subspan(ds.train_end), ds.target_lags.bottomRows(n_test)};
  FitOptions fit;
  fit.svm_dual = config.svm_dual;
  try {
    std::unique_ptr<Classifier> clf;
    if (is_baseline(item.family)) {
      ModelSpec spec{item.family, {}};
      if (item.family == Family::ConsensusBaseline) spec.params.push_back({"n", std::int64_t{config.consensus_n}});
      clf = fit_model(spec, train, seed, fit);
      res.selection = Selection{model, dataset, item.replication, spec.to_string(), 0.0, 0, true};
    } else {
      SearchOptions opts;
      opts.k = config.cv_folds;
      opts.fit = fit;
      const SearchResult search = grid_search(default_grid(item.family, config.grid), train, seed, opts);
      clf = fit_best(search, train, seed, fit);
      res.selection = Selection{model,
                                dataset,
                                item.replication,
                                search.best_spec.to_string(),
                                search.best_score,
                                search.zero_scored().size(),
                                clf->info().converged};
      if (config.cv_audit) {
        std::ostringstream audit;
        write_cv_audit(audit, search);
        res.audit = audit.str();
      }
    }
    append_metrics(res.records, model, dataset, item.replication, SampleSplit::In, *clf, train, res.warnings);
    append_metrics(res.records, model, dataset, item.replication, SampleSplit::Out, *clf, test, res.warnings);
  } catch (const Error& e) {
    res.records.clear();
    res.failure = model + "/" + dataset + "/" + std::to_string(item.replication) + ": " + e.what();
  }
  return res;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

RunOutput run_experiment(const RunConfig& config, const Universe& universe, const LogFn& log) {
  config.validate();
  const auto t_start = std::chrono::steady_clock::now();
  BuildParams bp;
  bp.window = config.window;
  bp.train_fraction = config.train_fraction;
  bp.standardize_on = config.standardize_on;
  bp.lag_depth = static_cast<std::size_t>(std::max(config.consensus_n, 1));
  bp.label_feature = config.label_feature;
  bp.seed = derive_seed(config.seed, {hash_string("datasets")});

  std::vector<AssembledDataset> datasets = build_all(universe, bp);
  if (!config.datasets.empty()) {
    std::vector<AssembledDataset> kept;
    for (auto& ds : datasets) {
      if (std::find(config.datasets.begin(), config.datasets.end(), ds.spec.label()) != config.datasets.end()) {
        kept.push_back(std::move(ds));
      }
    }
    datasets = std::move(kept);
  }
  std::vector<Family> families;
  for (Family f : all_families()) {
    if (config.models.empty() ||
        std::find(config.models.begin(), config.models.end(), family_name(f)) != config.models.end()) {
      families.push_back(f);
    }
  }
  const double build_seconds = seconds_since(t_start);
  if (log) log("built " + std::to_string(datasets.size()) + " datasets");

  std::vector<WorkItem> items;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    for (Family f : families) {
      for (int r = 0; r < config.replications; ++r) items.push_back({d, f, r});
    }
  }

  const auto t_run = std::chrono::steady_clock::now();
  std::vector<ItemResult> results(items.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex log_mutex;
  const int threads = std::min<int>(resolve_threads(config.threads), static_cast<int>(std::max<std::size_t>(items.size(), 1)));
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < items.size();) {
      results[i] = run_item(config, datasets[items[i].dataset], items[i]);
      const std::size_t finished = ++done;
      if (log && (finished % 50 == 0 || finished == items.size())) {
        std::lock_guard lock(log_mutex);
        log("evaluated " + std::to_string(finished) + "/" + std::to_string(items.size()));
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  const double run_seconds = seconds_since(t_run);

  RunOutput out;
  out.records.comments = {"config-hash: " + config.hash(),
                          "software: intermarket " + std::string(software_version())};
  nlohmann::json selections = nlohmann::json::array();
  nlohmann::json warnings = nlohmann::json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    auto& r = results[i];
    out.records.records.insert(out.records.records.end(), r.records.begin(), r.records.end());
    if (!r.failure.empty()) {
      out.failures.push_back(r.failure);
      if (log) log("failed: " + r.failure);
    }
    if (r.selection && r.failure.empty()) {
      const auto& s = *r.selection;
      out.selections.push_back(s);
      selections.push_back({{"model", s.model},
                            {"dataset", s.dataset},
                            {"replication", s.replication},
                            {"spec", s.spec},
                            {"cv_macro_f1", s.cv_score},
                            {"zero_scored_points", s.zero_scored},
                            {"converged", s.converged}});
      if (!r.audit.empty()) {
        out.cv_audits.emplace_back("cv_" + s.model + "_" + s.dataset + "_" + std::to_string(s.replication) + ".csv",
                                   std::move(r.audit));
      }
    }
    for (auto& w : r.warnings) warnings.push_back(std::move(w));
  }

  nlohmann::json m;
  m["software"] = {{"name", "intermarket"}, {"version", software_version()}};
  m["config"] = config.to_json();
  m["config_hash"] = config.hash();
  m["datasets"] = nlohmann::json::array();
  for (const auto& ds : datasets) m["datasets"].push_back(dataset_manifest(ds));
  m["models"] = nlohmann::json::array();
  for (Family f : families) m["models"].push_back(family_name(f));
  m["protocol"] = {{"folds", "expanding-window time-series split"},
                   {"selection", "mean macro F1, ties to the earliest grid point"},
                   {"refit", "best spec refitted on the full training split"},
                   {"forest_max_features", "ceil(sqrt(d))"},
                   {"forest_vote", "mean tree score >= 0.5"},
                   {"seed_scheme", "derive(seed, family, dataset, replication)"}};
  m["selections"] = std::move(selections);
  m["failures"] = out.failures;
  m["warnings"] = std::move(warnings);
  m["timings_seconds"] = {{"build", build_seconds}, {"evaluate", run_seconds}, {"total", seconds_since(t_start)}};
  m["threads"] = threads;
  m["records"] = out.records.records.size();
  out.manifest = std::move(m);
  return out;
}

RunOutput run_experiment(const RunConfig& config, const LogFn& log) {
  if (config.registry.empty()) throw Error(ErrorCode::ConfigError, "config has no registry path");
  return run_experiment(config, load_universe(load_registry(config.registry)), log);
}

void write_run_outputs(const RunConfig& config, const RunOutput& out, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  write_records_file((dir / "records.csv").string(), out.records);
  std::ofstream manifest(dir / "manifest.json", std::ios::binary);
  if (!manifest) throw Error(ErrorCode::IoError, "cannot write manifest");
  manifest << out.manifest.dump(2) << '\n';
  if (config.cv_audit) {
    std::filesystem::create_directories(dir / "cv", ec);
    for (const auto& [name, text] : out.cv_audits) {
      std::ofstream f(dir / "cv" / name, std::ios::binary);
      f << "# config-hash: " << config.hash() << '\n' << text;
    }
  }
}

}  // namespace intermarket
