// intermarket command-line front end.

#include "selfcheck.hpp"

#include <intermarket/analysis.hpp>
#include <intermarket/runner.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace im = intermarket;
namespace fs = std::filesystem;

namespace {

void log_line(const std::string& msg) { std::cerr << "[intermarket] " << msg << '\n'; }

int cmd_synth(const std::string& out_dir, int days, std::uint64_t seed, double fidelity, bool planted) {
  auto spec = im::default_synthetic_spec(days, planted ? std::optional<double>(fidelity) : std::nullopt);
  const auto universe = im::generate_synthetic_universe(spec, seed);
  fs::create_directories(out_dir);
  im::AssetRegistry reg;
  reg.target_id = spec.target_id;
  for (const auto& s : universe) {
    const fs::path file = s.asset_id + ".csv";
    im::write_asset_csv(s, fs::path(out_dir) / file);
    reg.entries.push_back({s.asset_id, s.asset_type, file, std::nullopt});
  }
  im::write_registry(reg, fs::path(out_dir) / "registry.toml");
  std::ofstream cfg(fs::path(out_dir) / "config.toml");
  cfg << "# Run configuration for the generated universe.\n"
      << "registry = \"registry.toml\"\n"
      << "output_dir = \"results\"\n"
      << "replications = 5\n"
      << "seed = " << seed << "\n";
  std::cout << "wrote " << universe.size() << " assets, " << days << " trading days, to " << out_dir << '\n';
  return 0;
}

int cmd_ingest(const std::string& registry_path, int preview) {
  const auto reg = im::load_registry(registry_path);
  reg.validate();
  std::cout << "target: " << reg.target_id << '\n';
  for (const auto& e : reg.entries) {
    im::LoadReport report;
    const auto series = im::load_asset_csv(e.path, e.asset_id, e.asset_type, &report);
    const auto returns = im::compute_returns(series);
    std::cout << e.asset_id << " (" << im::to_string(e.asset_type) << "): " << series.rows.size() << " rows";
    if (!series.rows.empty()) {
      std::cout << ", " << series.rows.front().date.iso() << " .. " << series.rows.back().date.iso();
    }
    if (report.rows_dropped_missing_price) std::cout << ", dropped " << report.rows_dropped_missing_price;
    std::cout << (series.has_volume() ? "" : ", no volume") << '\n';
    for (int i = 0; i < preview && i < static_cast<int>(returns.size()); ++i) {
      std::cout << "  " << returns.dates[static_cast<std::size_t>(i)].iso();
      for (Eigen::Index j = 0; j < returns.values.cols(); ++j) {
        std::cout << ' ' << returns.feature_names[static_cast<std::size_t>(j)] << '='
                  << im::format_double(returns.values(i, j));
      }
      std::cout << '\n';
    }
  }
  return 0;
}

int cmd_build(const std::string& config_path, const std::string& registry_override, const std::string& out_file) {
  im::RunConfig cfg;
  if (!config_path.empty()) cfg = im::load_run_config(config_path);
  if (!registry_override.empty()) cfg.registry = registry_override;
  if (cfg.registry.empty()) throw im::Error(im::ErrorCode::ConfigError, "no registry given");
  const auto universe = im::load_universe(im::load_registry(cfg.registry));
  im::BuildParams bp;
  bp.window = cfg.window;
  bp.train_fraction = cfg.train_fraction;
  bp.standardize_on = cfg.standardize_on;
  bp.lag_depth = static_cast<std::size_t>(cfg.consensus_n);
  bp.label_feature = cfg.label_feature;
  bp.seed = im::derive_seed(cfg.seed, {im::hash_string("datasets")});
  nlohmann::json j;
  j["config_hash"] = cfg.hash();
  j["datasets"] = nlohmann::json::array();
  for (const auto& ds : im::build_all(universe, bp)) j["datasets"].push_back(im::dataset_manifest(ds));
  if (out_file.empty() || out_file == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    std::ofstream(out_file) << j.dump(2) << '\n';
    std::cout << "wrote " << j["datasets"].size() << " dataset manifests to " << out_file << '\n';
  }
  return 0;
}

int cmd_run(const std::string& config_path, std::optional<int> reps, const std::string& out_dir,
            std::optional<int> threads, const std::string& grid) {
  auto cfg = im::load_run_config(config_path);
  if (reps) cfg.replications = *reps;
  if (threads) cfg.threads = *threads;
  if (!grid.empty()) cfg.grid = im::parse_grid_profile(grid);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  cfg.validate();
  const auto out = im::run_experiment(cfg, log_line);
  im::write_run_outputs(cfg, out, cfg.output_dir);
  std::cout << "wrote " << out.records.records.size() << " records to " << (fs::path(cfg.output_dir) / "records.csv").string()
            << " (" << out.failures.size() << " failed evaluations)\n";
  return out.failures.empty() ? 0 : 3;
}

int cmd_analyze(const std::string& records_path, double alpha, const std::string& out_dir) {
  const auto file = im::read_records_file(records_path);
  const auto bundle = im::analyze_records(file, alpha);
  im::write_report(bundle, out_dir);
  std::cout << "wrote " << bundle.tables.size() << " tables to " << out_dir << '\n';
  for (const auto& s : bundle.skipped) std::cout << "skipped " << s << '\n';
  return 0;
}

int cmd_report(const std::string& records_path, double alpha, const std::string& out_file) {
  const auto bundle = im::analyze_records(im::read_records_file(records_path), alpha);
  std::string text = "<!-- config-hash: " + bundle.config_hash + " -->\n\n";
  for (const auto& t : bundle.tables) text += im::render_markdown(t) + "\n";
  if (out_file.empty() || out_file == "-") {
    std::cout << text;
  } else {
    std::ofstream(out_file) << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intermarket direction-prediction experiment harness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(im::software_version()));

  auto* synth = app.add_subcommand("synth", "Generate a synthetic five-asset universe and registry");
  std::string synth_out = "synthetic";
  int synth_days = 750;
  std::uint64_t synth_seed = 1;
  double synth_fidelity = 0.9;
  bool synth_plain = false;
  synth->add_option("--out", synth_out, "Output directory")->capture_default_str();
  synth->add_option("--days", synth_days, "Trading days per asset")->capture_default_str()->check(CLI::Range(10, 1000000));
  synth->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();
  synth->add_option("--fidelity", synth_fidelity, "Probability that the target's next move copies the bond's sign")
      ->capture_default_str()
      ->check(CLI::Range(0.5, 1.0));
  synth->add_flag("--no-signal", synth_plain, "Do not plant any signal");

  auto* ingest = app.add_subcommand("ingest", "Validate a registry and preview returns");
  std::string ingest_registry;
  int preview = 3;
  ingest->add_option("--registry", ingest_registry, "Asset registry file")->required();
  ingest->add_option("--preview", preview, "Return rows to print per asset")->capture_default_str();

  auto* build = app.add_subcommand("build", "Assemble every dataset and emit their manifests");
  std::string build_config, build_registry, build_out;
  build->add_option("--config", build_config, "Run configuration file");
  build->add_option("--registry", build_registry, "Asset registry (overrides the config)");
  build->add_option("--out", build_out, "Manifest output file ('-' for stdout)");

  auto* run = app.add_subcommand("run", "Run the experiment and write records.csv and manifest.json");
  std::string run_config, run_out, run_grid;
  std::optional<int> run_reps, run_threads;
  run->add_option("--config", run_config, "Run configuration file")->required();
  run->add_option("--reps", run_reps, "Override the number of replications")->check(CLI::PositiveNumber);
  run->add_option("--out", run_out, "Override the output directory");
  run->add_option("--threads", run_threads, "Worker threads (default: INTERMARKET_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  run->add_option("--grid", run_grid, "Hyperparameter grid profile")->check(CLI::IsMember({"full", "compact"}));

  auto* analyze = app.add_subcommand("analyze", "Summaries and effects models from records.csv");
  std::string analyze_records, analyze_out = "reports";
  double analyze_alpha = 0.05;
  analyze->add_option("--records", analyze_records, "records.csv from a run")->required();
  analyze->add_option("--alpha", analyze_alpha, "Significance level for backward elimination")
      ->capture_default_str()
      ->check(CLI::Range(1e-12, 1.0 - 1e-12));
  analyze->add_option("--out", analyze_out, "Report directory")->capture_default_str();

  auto* report = app.add_subcommand("report", "Render the analysis as one markdown document");
  std::string report_records, report_out;
  double report_alpha = 0.05;
  report->add_option("--records", report_records, "records.csv from a run")->required();
  report->add_option("--alpha", report_alpha, "Significance level")->capture_default_str()->check(CLI::Range(1e-12, 1.0 - 1e-12));
  report->add_option("--out", report_out, "Output file ('-' for stdout)");

  auto* selfcheck = app.add_subcommand("selfcheck", "Compare metrics, OLS and learners against independent oracles");
  std::uint64_t check_seed = 7;
  int check_trials = 200;
  selfcheck->add_option("--seed", check_seed, "Random seed for generated instances")->capture_default_str();
  selfcheck->add_option("--trials", check_trials, "Instances per check")->capture_default_str()->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) return cmd_synth(synth_out, synth_days, synth_seed, synth_fidelity, !synth_plain);
    if (*ingest) return cmd_ingest(ingest_registry, preview);
    if (*build) return cmd_build(build_config, build_registry, build_out);
    if (*run) return cmd_run(run_config, run_reps, run_out, run_threads, run_grid);
    if (*analyze) return cmd_analyze(analyze_records, analyze_alpha, analyze_out);
    if (*report) return cmd_report(report_records, report_alpha, report_out);
    if (*selfcheck) return run_selfcheck(check_seed, check_trials, std::cout);
  } catch (const im::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
