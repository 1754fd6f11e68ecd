#include "intermarket/learners.hpp"

#include <array>
#include <cmath>

namespace intermarket {

namespace {

struct FamilyName {
  Family family;
  std::string_view name;
};

constexpr std::array<FamilyName, 9> kFamilyNames{{
    {Family::DecisionTree, "decision-tree"},
    {Family::RandomForest, "random-forest"},
    {Family::LogisticRegression, "logistic-regression"},
    {Family::LinearSVM, "linear-svm"},
    {Family::KNN, "knn"},
    {Family::RandomBaseline, "random-baseline"},
    {Family::ConstantBaseline, "constant-baseline"},
    {Family::PreviousBaseline, "previous-baseline"},
    {Family::ConsensusBaseline, "consensus-baseline"},
}};

ParamValue none() { return std::monostate{}; }
ParamValue i(std::int64_t v) { return v; }
ParamValue f(double v) { return v; }
ParamValue s(const char* v) { return std::string(v); }

std::vector<ParamAxis> tree_axes() {
  return {
      {"max_depth", {i(5), i(10), i(25), none()}},
      {"min_samples_split", {i(2), i(5), i(10), i(50)}},
      {"min_samples_leaf", {i(1), i(5), i(10)}},
  };
}

std::vector<ParamAxis> build_domain(Family family) {
  switch (family) {
    case Family::DecisionTree: {
      std::vector<ParamAxis> axes{{"splitter", {s("best"), s("random")}}};
      for (auto& a : tree_axes()) axes.push_back(std::move(a));
      return axes;
    }
    case Family::RandomForest: {
      std::vector<ParamAxis> axes{{"n_estimators", {i(50), i(100), i(500)}},
                                  {"criterion", {s("gini"), s("entropy")}}};
      for (auto& a : tree_axes()) axes.push_back(std::move(a));
      return axes;
    }
    case Family::LogisticRegression:
      return {
          {"penalty", {s("l1"), s("l2")}},
          {"C", {f(1e-3), f(1e-2), f(1e-1), f(1.0), f(1e1), f(1e2), f(1e3)}},
          {"solver", {s("newton-cg"), s("lbfgs"), s("liblinear")}},
      };
    case Family::LinearSVM:
      return {
          {"penalty", {s("l1"), s("l2")}},
          {"C", {f(1.0), f(4.0), f(9.0), f(16.0), f(25.0)}},
          {"loss", {s("hinge"), s("squared_hinge")}},
      };
    case Family::KNN:
      return {
          {"n_neighbors", {i(5), i(10), i(15), i(20)}},
          {"weights", {s("uniform"), s("distance")}},
          {"metric", {s("l1"), s("l2"), s("cosine")}},
      };
    default:
      return {};
  }
}

double numeric(const ParamValue& v) {
  if (const auto* p = std::get_if<std::int64_t>(&v)) return static_cast<double>(*p);
  if (const auto* p = std::get_if<double>(&v)) return *p;
  return std::nan("");
}

}  // namespace

std::string_view family_name(Family f) {
  for (const auto& e : kFamilyNames) {
    if (e.family == f) return e.name;
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (const auto& e : kFamilyNames) {
    if (e.name == name) return e.family;
  }
  throw Error(ErrorCode::InvalidParameter, "unknown model family: " + std::string(name));
}

bool is_baseline(Family f) {
  return f == Family::RandomBaseline || f == Family::ConstantBaseline || f == Family::PreviousBaseline ||
         f == Family::ConsensusBaseline;
}

const std::vector<Family>& all_families() {
  static const std::vector<Family> families = [] {
    std::vector<Family> out;
    for (const auto& e : kFamilyNames) out.push_back(e.family);
    return out;
  }();
  return families;
}

std::string param_to_string(const ParamValue& v) {
  if (std::holds_alternative<std::monostate>(v)) return "None";
  if (const auto* p = std::get_if<std::int64_t>(&v)) return std::to_string(*p);
  if (const auto* p = std::get_if<double>(&v)) return format_double(*p);
  return std::get<std::string>(v);
}

bool param_equal(const ParamValue& a, const ParamValue& b) {
  const bool a_num = std::holds_alternative<std::int64_t>(a) || std::holds_alternative<double>(a);
  const bool b_num = std::holds_alternative<std::int64_t>(b) || std::holds_alternative<double>(b);
  if (a_num && b_num) return numeric(a) == numeric(b);
  return a == b;
}

const ParamValue* ModelSpec::find(std::string_view name) const {
  for (const auto& p : params) {
    if (p.name == name) return &p.value;
  }
  return nullptr;
}

std::int64_t ModelSpec::get_int(std::string_view name, std::int64_t fallback) const {
  const auto* v = find(name);
  if (!v) return fallback;
  if (const auto* p = std::get_if<std::int64_t>(v)) return *p;
  if (const auto* p = std::get_if<double>(v); p && std::floor(*p) == *p) return static_cast<std::int64_t>(*p);
  throw Error(ErrorCode::InvalidParameter, "parameter " + std::string(name) + " is not an integer");
}

double ModelSpec::get_double(std::string_view name, double fallback) const {
  const auto* v = find(name);
  if (!v) return fallback;
  const double x = numeric(*v);
  if (std::isnan(x)) throw Error(ErrorCode::InvalidParameter, "parameter " + std::string(name) + " is not numeric");
  return x;
}

std::string ModelSpec::get_string(std::string_view name, const std::string& fallback) const {
  const auto* v = find(name);
  if (!v) return fallback;
  if (const auto* p = std::get_if<std::string>(v)) return *p;
  throw Error(ErrorCode::InvalidParameter, "parameter " + std::string(name) + " is not a string");
}

bool ModelSpec::is_none(std::string_view name) const {
  const auto* v = find(name);
  return v && std::holds_alternative<std::monostate>(*v);
}

std::string ModelSpec::to_string() const {
  std::string out(family_name(family));
  out += '{';
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (k) out += ',';
    out += params[k].name + '=' + param_to_string(params[k].value);
  }
  out += '}';
  return out;
}

void check_training_set(const MatrixRef& x, std::span<const int> y) {
  if (x.rows() == 0 || y.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no training samples");
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw Error(ErrorCode::InvalidParameter, "feature rows and labels differ in length");
  }
  for (int v : y) {
    if (v != 1 && v != -1) throw Error(ErrorCode::InvalidParameter, "labels must be +1 or -1");
  }
}

const std::vector<ParamAxis>& param_domain(Family family) {
  static const std::array<std::vector<ParamAxis>, 9> domains = [] {
    std::array<std::vector<ParamAxis>, 9> out;
    for (const auto& e : kFamilyNames) out[static_cast<std::size_t>(e.family)] = build_domain(e.family);
    return out;
  }();
  return domains[static_cast<std::size_t>(family)];
}

void validate_spec(const ModelSpec& spec) {
  const auto where = [&] { return " in " + spec.to_string(); };
  if (spec.family == Family::ConsensusBaseline) {
    for (const auto& p : spec.params) {
      if (p.name != "n") throw Error(ErrorCode::InvalidParameter, "unknown parameter " + p.name + where());
    }
    if (spec.get_int("n", 5) < 1) throw Error(ErrorCode::InvalidParameter, "consensus n must be >= 1" + where());
    return;
  }
  const auto& domain = param_domain(spec.family);
  for (const auto& p : spec.params) {
    const ParamAxis* axis = nullptr;
    for (const auto& a : domain) {
      if (a.name == p.name) axis = &a;
    }
    if (!axis) throw Error(ErrorCode::InvalidParameter, "unknown parameter " + p.name + where());
    bool ok = false;
    for (const auto& v : axis->values) ok = ok || param_equal(v, p.value);
    if (!ok) {
      throw Error(ErrorCode::InvalidParameter,
                  "value " + param_to_string(p.value) + " outside the grid for " + p.name + where());
    }
  }
  for (const auto& a : domain) {
    if (!spec.find(a.name)) throw Error(ErrorCode::InvalidParameter, "missing parameter " + a.name + where());
  }
}

TreeParams tree_params_from(const ModelSpec& spec) {
  TreeParams p;
  p.splitter = spec.get_string("splitter", "best") == "random" ? Splitter::Random : Splitter::Best;
  p.criterion = spec.get_string("criterion", "gini") == "entropy" ? Criterion::Entropy : Criterion::Gini;
  if (spec.find("max_depth") && !spec.is_none("max_depth")) p.max_depth = static_cast<int>(spec.get_int("max_depth", 0));
  p.min_samples_split = static_cast<int>(spec.get_int("min_samples_split", 2));
  p.min_samples_leaf = static_cast<int>(spec.get_int("min_samples_leaf", 1));
  return p;
}

ForestParams forest_params_from(const ModelSpec& spec, std::size_t num_features) {
  ForestParams p;
  p.n_estimators = static_cast<int>(spec.get_int("n_estimators", 100));
  p.tree = tree_params_from(spec);
  p.tree.splitter = Splitter::Best;
  p.tree.max_features = default_max_features(num_features);
  return p;
}

LogisticParams logistic_params_from(const ModelSpec& spec) {
  LogisticParams p;
  p.penalty = spec.get_string("penalty", "l2") == "l1" ? Penalty::L1 : Penalty::L2;
  p.C = spec.get_double("C", 1.0);
  const auto solver = spec.get_string("solver", "lbfgs");
  p.solver = solver == "newton-cg"   ? LogisticSolver::NewtonCG
             : solver == "liblinear" ? LogisticSolver::CoordinateDescent
                                     : LogisticSolver::LBFGS;
  return p;
}

SvmParams svm_params_from(const ModelSpec& spec, bool dual) {
  SvmParams p;
  p.penalty = spec.get_string("penalty", "l2") == "l1" ? Penalty::L1 : Penalty::L2;
  p.C = spec.get_double("C", 1.0);
  p.loss = spec.get_string("loss", "squared_hinge") == "hinge" ? SvmLoss::Hinge : SvmLoss::SquaredHinge;
  p.dual = dual;
  return p;
}

KnnParams knn_params_from(const ModelSpec& spec) {
  KnnParams p;
  p.n_neighbors = static_cast<int>(spec.get_int("n_neighbors", 5));
  p.weights = spec.get_string("weights", "uniform") == "distance" ? KnnWeights::Distance : KnnWeights::Uniform;
  const auto metric = spec.get_string("metric", "l2");
  p.metric = metric == "l1" ? KnnMetric::L1 : metric == "cosine" ? KnnMetric::Cosine : KnnMetric::L2;
  return p;
}

std::unique_ptr<Classifier> fit_model(const ModelSpec& spec, const Samples& train, std::uint64_t seed,
                                      const FitOptions& options) {
  validate_spec(spec);
  const auto& x = train.features;
  const auto y = train.labels;
  if (train.size() == 0 || y.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no training samples");
  switch (spec.family) {
    case Family::DecisionTree:
      return std::make_unique<DecisionTree>(fit_decision_tree(x, y, tree_params_from(spec), seed));
    case Family::RandomForest: {
      auto params = forest_params_from(spec, static_cast<std::size_t>(x.cols()));
      params.bootstrap = options.forest_bootstrap;
      return std::make_unique<RandomForest>(fit_random_forest(x, y, params, seed));
    }
    case Family::LogisticRegression:
      return std::make_unique<LinearModel>(fit_logistic_regression(x, y, logistic_params_from(spec)));
    case Family::LinearSVM:
      return std::make_unique<LinearModel>(fit_linear_svm(x, y, svm_params_from(spec, options.svm_dual), seed));
    case Family::KNN:
      return std::make_unique<KnnModel>(fit_knn(x, y, knn_params_from(spec)));
    case Family::RandomBaseline:
      return std::make_unique<RandomBaseline>(seed);
    case Family::ConstantBaseline:
      return std::make_unique<ConstantBaseline>(majority_label(y));
    case Family::PreviousBaseline:
      return std::make_unique<ConsensusBaseline>(Family::PreviousBaseline, 1);
    case Family::ConsensusBaseline:
      return std::make_unique<ConsensusBaseline>(Family::ConsensusBaseline, static_cast<int>(spec.get_int("n", 5)));
  }
  throw Error(ErrorCode::InvalidParameter, "unknown family");
}

}  // namespace intermarket
