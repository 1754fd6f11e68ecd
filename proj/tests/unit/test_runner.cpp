#include <doctest.h>

#include <intermarket/analysis.hpp>
#include <intermarket/runner.hpp>

#include "fixtures.hpp"

#include <functional>
#include <set>
#include <sstream>

namespace im = intermarket;

namespace {

im::ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const im::Error& e) {
    return e.code();
  }
  return im::ErrorCode::IoError;
}

const im::Universe& small_universe() {
  static const im::Universe u = [] {
    const auto spec = im::default_synthetic_spec(260, 0.9);
    return im::make_universe(im::generate_synthetic_universe(spec, 21), spec.target_id);
  }();
  return u;
}

im::RunConfig small_config() {
  im::RunConfig c;
  c.replications = 2;
  c.seed = 5;
  c.grid = im::GridProfile::Compact;
  c.models = {"decision-tree", "knn", "random-baseline", "constant-baseline", "previous-baseline"};
  return c;
}

std::string records_text(const im::RecordFile& f) {
  std::ostringstream out;
  im::write_records(out, f);
  return out.str();
}

}  // namespace

TEST_CASE("run config parsing") {
  const auto doc = im::parse_kv(R"(registry = "data/registry.toml"
window = 7
train_fraction = 0.75
cv_folds = 4
replications = 3
alpha = 0.01
consensus_n = 3
seed = 99
standardize_on = "train"
output_dir = "out"
models = ["knn", "decision-tree"]
datasets = ["FB", "base"]
grid = "compact"
svm_dual = false
label_feature = "close"
cv_audit = true
threads = 2
)");
  const auto c = im::parse_run_config(doc, "/cfg");
  CHECK(c.registry == "/cfg/data/registry.toml");
  CHECK(c.window == 7);
  CHECK(c.train_fraction == 0.75);
  CHECK(c.cv_folds == 4);
  CHECK(c.replications == 3);
  CHECK(c.alpha == 0.01);
  CHECK(c.consensus_n == 3);
  CHECK(c.seed == 99);
  CHECK(c.standardize_on == im::StandardizeOn::Train);
  CHECK(c.models == std::vector<std::string>{"knn", "decision-tree"});
  CHECK(c.datasets == std::vector<std::string>{"FB", "base"});
  CHECK(c.grid == im::GridProfile::Compact);
  CHECK_FALSE(c.svm_dual);
  CHECK(c.label_feature == "close");
  CHECK(c.cv_audit);
  CHECK(c.threads == 2);
  CHECK(c.to_json()["window"] == 7);

  const im::RunConfig defaults;
  CHECK(defaults.window == 5);
  CHECK(defaults.train_fraction == 0.8);
  CHECK(defaults.replications == 50);
  CHECK(defaults.alpha == 0.05);

  for (const char* bad : {"colour = 3\n", "window = \"five\"\n", "window = 0\n", "train_fraction = 1.0\n",
                          "cv_folds = 1\n", "models = [\"svm\"]\n", "datasets = [\"FX\"]\n",
                          "standardize_on = \"half\"\n", "grid = \"huge\"\n", "[extra]\nk = 1\n"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { (void)im::parse_run_config(im::parse_kv(bad)); }) == im::ErrorCode::ConfigError);
  }
}

TEST_CASE("the config hash covers result-affecting settings only") {
  const auto base = small_config();
  auto other = base;
  other.threads = 7;
  other.output_dir = "elsewhere";
  other.cv_audit = true;
  CHECK(other.hash() == base.hash());
  other.seed = 6;
  CHECK(other.hash() != base.hash());
  CHECK(base.hash().size() == 16);
  auto grid = base;
  grid.grid = im::GridProfile::Full;
  CHECK(grid.hash() != base.hash());
}

TEST_CASE("a small run produces every record and is independent of the thread count") {
  auto c = small_config();
  c.threads = 1;
  const auto one = im::run_experiment(c, small_universe());
  c.threads = 3;
  const auto three = im::run_experiment(c, small_universe());

  CHECK(one.failures.empty());
  // 17 datasets x 2 replications; scored models give 8 rows, the previous-value baseline 6.
  CHECK(one.records.records.size() == 17 * 2 * (4 * 8 + 6));
  CHECK(records_text(one.records) == records_text(three.records));
  CHECK(one.records.config_hash() == c.hash());
  CHECK(one.selections.size() == 17 * 2 * 5);
  CHECK(one.manifest["config_hash"] == c.hash());
  CHECK(one.manifest["datasets"].size() == 17);

  for (const auto& r : one.records.records) {
    CHECK(r.value >= 0.0);
    CHECK(r.value <= 1.0);
    if ((r.model == "random-baseline" || r.model == "constant-baseline") && r.metric == "auc") CHECK(r.value == 0.5);
  }

  // Analysis of the in-memory records equals analysis of the file written to disk.
  fixtures::TempDir dir("run");
  im::write_run_outputs(c, one, dir.path());
  const auto reloaded = im::read_records_file((dir / "records.csv").string());
  CHECK(reloaded.records == one.records.records);
  const auto a = im::analyze_records(one.records, c.alpha);
  const auto b = im::analyze_records(reloaded, c.alpha);
  REQUIRE(a.tables.size() == b.tables.size());
  for (std::size_t i = 0; i < a.tables.size(); ++i) {
    CHECK(im::render_csv(a.tables[i]) == im::render_csv(b.tables[i]));
  }
  CHECK(std::filesystem::exists(dir / "manifest.json"));
}

TEST_CASE("dataset and model filters") {
  auto c = small_config();
  c.replications = 1;
  c.models = {"knn", "consensus-baseline"};
  c.datasets = {"FB", "random"};
  c.cv_audit = true;
  const auto out = im::run_experiment(c, small_universe());
  std::set<std::string> datasets, models;
  for (const auto& r : out.records.records) {
    datasets.insert(r.dataset);
    models.insert(r.model);
  }
  CHECK(datasets == std::set<std::string>{"FB", "random"});
  CHECK(models == std::set<std::string>{"knn", "consensus-baseline"});
  CHECK(out.cv_audits.size() == 2);

  fixtures::TempDir dir("run-audit");
  im::write_run_outputs(c, out, dir.path());
  for (const auto& [name, text] : out.cv_audits) {
    const auto written = fixtures::slurp(dir.path() / "cv" / name);
    CHECK(written.rfind("# config-hash: " + c.hash(), 0) == 0);
  }
}

TEST_CASE("empty or missing inputs") {
  im::RecordFile empty;
  std::ostringstream out;
  im::write_records(out, empty);
  std::istringstream in(out.str());
  CHECK(code_of([&] { (void)im::read_records(in); }) == im::ErrorCode::EmptyRecords);

  im::RunConfig c;
  CHECK(code_of([&] { (void)im::run_experiment(c); }) == im::ErrorCode::ConfigError);
  CHECK(im::resolve_threads(4) == 4);
  CHECK(im::resolve_threads(0) >= 1);
  CHECK_FALSE(im::software_version().empty());
}
