#include "intermarket/analysis.hpp"

#include "intermarket/learners/classifier.hpp"

#include <Eigen/QR>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace intermarket {

// --- special functions -------------------------------------------------------

namespace {

double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0) || !(b > 0)) throw Error(ErrorCode::InvalidParameter, "incomplete beta needs a, b > 0");
  if (std::isnan(x)) return x;
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double t_two_sided_p(double t, double df) {
  if (!(df > 0)) throw Error(ErrorCode::InvalidParameter, "t distribution needs df > 0");
  if (std::isnan(t)) return t;
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

double t_cdf(double t, double df) {
  if (std::isnan(t)) return t;
  if (t == 0.0) return 0.5;
  const double tail = 0.5 * t_two_sided_p(t, df);
  return t > 0 ? 1.0 - tail : tail;
}

// --- summaries ---------------------------------------------------------------

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

namespace {

constexpr std::string_view kLetters = "FBIC";

bool is_baseline_model(const std::string& name) {
  try {
    return is_baseline(parse_family(name));
  } catch (const Error&) {
    return false;
  }
}

std::string code_of(const std::string& dataset) { return dataset == "base" ? std::string{} : dataset; }

int letter_rank(char c) {
  const auto pos = kLetters.find(c);
  return pos == std::string_view::npos ? 100 + c : static_cast<int>(pos);
}

SummaryRow make_row(std::string key, std::string level, const std::vector<const EvalRecord*>& recs) {
  SummaryRow row{std::move(key), std::move(level), {}};
  std::map<std::string, std::vector<double>> by_metric;
  for (const auto* r : recs) by_metric[r->metric].push_back(r->value);
  for (auto& [m, v] : by_metric) row.metrics[m] = summarize(v);
  return row;
}

std::vector<std::string> letters_in(const std::vector<EvalRecord>& records) {
  std::set<char> seen;
  for (const auto& r : records) {
    if (r.dataset == "random" || r.dataset == "base") continue;
    for (char c : r.dataset) seen.insert(c);
  }
  std::vector<char> sorted(seen.begin(), seen.end());
  std::sort(sorted.begin(), sorted.end(), [](char a, char b) { return letter_rank(a) < letter_rank(b); });
  std::vector<std::string> out;
  for (char c : sorted) out.emplace_back(1, c);
  return out;
}

int model_rank(const std::string& name) {
  try {
    const Family f = parse_family(name);
    const auto& all = all_families();
    return static_cast<int>(std::find(all.begin(), all.end(), f) - all.begin());
  } catch (const Error&) {
    return 1000;
  }
}

std::vector<std::string> models_in(const std::vector<EvalRecord>& records) {
  std::vector<std::string> models;
  for (const auto& r : records) {
    if (std::find(models.begin(), models.end(), r.model) == models.end()) models.push_back(r.model);
  }
  std::stable_sort(models.begin(), models.end(), [](const std::string& a, const std::string& b) {
    const int ra = model_rank(a), rb = model_rank(b);
    return ra != rb ? ra < rb : (ra == 1000 && a < b);
  });
  return models;
}

}  // namespace

bool dataset_order_less(const std::string& a, const std::string& b) {
  auto rank = [](const std::string& d) { return d == "random" ? 2 : d == "base" ? 1 : 0; };
  if (rank(a) != rank(b)) return rank(a) < rank(b);
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return letter_rank(a[i]) < letter_rank(b[i]);
  }
  return false;
}

std::vector<SummaryRow> summarize_by_asset_presence(const std::vector<EvalRecord>& records) {
  std::vector<const EvalRecord*> pool;
  for (const auto& r : records) {
    if (r.split == SampleSplit::Out && !is_baseline_model(r.model)) pool.push_back(&r);
  }
  std::vector<SummaryRow> rows;
  for (const auto& letter : letters_in(records)) {
    std::vector<const EvalRecord*> present, absent;
    for (const auto* r : pool) {
      if (r->dataset == "random") continue;
      (code_of(r->dataset).find(letter) != std::string::npos ? present : absent).push_back(r);
    }
    rows.push_back(make_row(letter, "present", present));
    rows.push_back(make_row(letter, "absent", absent));
  }
  for (const char* special : {"base", "random"}) {
    std::vector<const EvalRecord*> sel;
    for (const auto* r : pool) {
      if (r->dataset == special) sel.push_back(r);
    }
    if (!sel.empty()) rows.push_back(make_row(special, "", sel));
  }
  return rows;
}

std::vector<SummaryRow> summarize_by_dataset(const std::vector<EvalRecord>& records) {
  std::map<std::string, std::vector<const EvalRecord*>> groups;
  for (const auto& r : records) {
    if (r.split == SampleSplit::Out && !is_baseline_model(r.model)) groups[r.dataset].push_back(&r);
  }
  std::vector<std::string> keys;
  for (const auto& [k, v] : groups) keys.push_back(k);
  std::sort(keys.begin(), keys.end(), dataset_order_less);
  std::vector<SummaryRow> rows;
  for (const auto& k : keys) rows.push_back(make_row(k, "", groups[k]));
  return rows;
}

std::vector<SummaryRow> summarize_by_model(const std::vector<EvalRecord>& records, SampleSplit split) {
  std::vector<SummaryRow> rows;
  for (const auto& model : models_in(records)) {
    std::vector<const EvalRecord*> sel;
    for (const auto& r : records) {
      if (r.model == model && r.split == split && r.dataset != "random") sel.push_back(&r);
    }
    if (!sel.empty()) rows.push_back(make_row(model, "", sel));
  }
  return rows;
}

// --- effects models ----------------------------------------------------------

OlsResult ols(const Matrix& x, const Vector& y) {
  const auto n = x.rows();
  const auto p = x.cols();
  if (y.size() != n) throw Error(ErrorCode::InvalidParameter, "design and response differ in length");
  if (n <= p) throw Error(ErrorCode::InsufficientData, "no residual degrees of freedom");
  const Eigen::MatrixXd xc = x;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xc);
  if (qr.rank() < p) throw Error(ErrorCode::RankDeficientDesign, "design matrix is rank deficient");
  const Eigen::VectorXd beta = qr.solve(y);
  const Eigen::VectorXd resid = y - xc * beta;
  OlsResult out;
  out.df = static_cast<int>(n - p);
  out.sigma2 = resid.squaredNorm() / out.df;
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  // (X'X)^-1 = P R^-1 R^-T P'; its diagonal in pivoted order is the row norms of R^-1.
  Eigen::VectorXd diag(p);
  for (Eigen::Index j = 0; j < p; ++j) diag[qr.colsPermutation().indices()[j]] = r_inv.row(j).squaredNorm();
  out.coef.resize(static_cast<std::size_t>(p));
  out.se.resize(out.coef.size());
  out.t.resize(out.coef.size());
  out.p.resize(out.coef.size());
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto k = static_cast<std::size_t>(j);
    out.coef[k] = beta[j];
    out.se[k] = std::sqrt(out.sigma2 * diag[j]);
    if (out.se[k] > 0) {
      out.t[k] = beta[j] / out.se[k];
    } else {
      out.t[k] = beta[j] == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), beta[j]);
    }
    out.p[k] = t_two_sided_p(out.t[k], out.df);
  }
  return out;
}

const Effect* EffectsModel::find(const std::string& factor) const {
  for (const auto& e : effects) {
    if (e.name == factor) return &e;
  }
  return nullptr;
}

EffectsModel fit_effects(const std::vector<Observation>& data, const std::vector<std::string>& factors) {
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto p = static_cast<Eigen::Index>(factors.size()) + 1;
  Matrix x = Matrix::Zero(n, p);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& obs = data[static_cast<std::size_t>(i)];
    x(i, 0) = 1.0;
    for (Eigen::Index j = 1; j < p; ++j) {
      x(i, j) = obs.factors.find(factors[static_cast<std::size_t>(j - 1)]) != std::string::npos ? 1.0 : 0.0;
    }
    y[i] = obs.response;
  }
  const OlsResult fit = ols(x, y);
  EffectsModel m;
  m.factors = factors;
  m.df = fit.df;
  m.sigma2 = fit.sigma2;
  m.n = data.size();
  m.data = data;
  m.intercept = {"Intercept", fit.coef[0], fit.se[0], fit.t[0], fit.p[0]};
  for (std::size_t j = 0; j < factors.size(); ++j) {
    m.effects.push_back({factors[j], fit.coef[j + 1], fit.se[j + 1], fit.t[j + 1], fit.p[j + 1]});
  }
  return m;
}

EffectsModel fit_ols_effects(const std::vector<EvalRecord>& records, const std::string& model,
                             const std::string& metric) {
  std::vector<Observation> data;
  std::vector<EvalRecord> used;
  for (const auto& r : records) {
    if (r.model == model && r.metric == metric && r.split == SampleSplit::Out && r.dataset != "random") {
      data.push_back({code_of(r.dataset), r.value});
      used.push_back(r);
    }
  }
  if (data.empty()) throw Error(ErrorCode::InsufficientData, "no records for " + model + "/" + metric);
  EffectsModel m = fit_effects(data, letters_in(used));
  m.model = model;
  m.metric = metric;
  m.kind = EffectsKind::Full;
  return m;
}

EffectsModel reduce_effects(const EffectsModel& full, double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw Error(ErrorCode::InvalidParameter, "alpha must lie in (0, 1)");
  EffectsModel current = full;
  std::vector<EliminationStep> trace;
  while (!current.effects.empty()) {
    std::size_t worst = 0;
    for (std::size_t j = 1; j < current.effects.size(); ++j) {
      const double pj = current.effects[j].p;
      const double pw = current.effects[worst].p;
      if (pj > pw || (std::isnan(pj) && !std::isnan(pw))) worst = j;
    }
    const double p_worst = current.effects[worst].p;
    if (p_worst <= alpha) break;
    std::vector<std::string> kept = current.factors;
    kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(worst));
    EffectsModel next = fit_effects(full.data, kept);
    trace.push_back({current.factors[worst], p_worst, next.effects});
    current = std::move(next);
  }
  current.model = full.model;
  current.metric = full.metric;
  current.kind = EffectsKind::Reduced;
  current.trace = std::move(trace);
  return current;
}

// --- report ------------------------------------------------------------------

namespace {

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s(buf);
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);  // no "-0.000"
  return s;
}

std::string metric_title(const std::string& m) {
  if (m == "accuracy") return "Accuracy";
  if (m == "macro_f1") return "Macro F1";
  if (m == "weighted_f1") return "Weighted F1";
  if (m == "auc") return "ROC AUC";
  return m;
}

std::string dataset_title(const std::string& d) {
  if (d == "base") return "Target-only";
  if (d == "random") return "Random data";
  return d;
}

std::vector<std::string> metrics_present(const std::vector<EvalRecord>& records) {
  std::vector<std::string> out;
  for (const auto& m : metric_names()) {
    if (std::any_of(records.begin(), records.end(), [&](const EvalRecord& r) { return r.metric == m; })) {
      out.push_back(m);
    }
  }
  return out;
}

Table summary_table(std::string name, std::string title, std::string key_title, bool with_level,
                    const std::vector<SummaryRow>& rows, const std::vector<std::string>& metrics) {
  Table t;
  t.name = std::move(name);
  t.title = std::move(title);
  t.columns.push_back(key_title);
  t.csv_columns.push_back("key");
  if (with_level) {
    t.columns.push_back("Present");
    t.csv_columns.push_back("level");
  }
  for (const auto& m : metrics) {
    t.columns.push_back(metric_title(m));
    t.csv_columns.push_back(m + "_mean");
    t.csv_columns.push_back(m + "_sd");
    t.csv_columns.push_back(m + "_n");
  }
  for (const auto& r : rows) {
    std::vector<std::string> md{with_level || r.key.size() > 1 ? dataset_title(r.key) : r.key};
    std::vector<std::string> csv{r.key};
    if (with_level) {
      md.push_back(r.level == "present" ? "True" : r.level == "absent" ? "False" : "");
      csv.push_back(r.level);
    }
    for (const auto& m : metrics) {
      auto it = r.metrics.find(m);
      if (it == r.metrics.end()) {
        md.emplace_back("-");
        csv.insert(csv.end(), {"", "", "0"});
        continue;
      }
      md.push_back(fixed(it->second.mean, 3) + " ± " + fixed(it->second.sd, 3));
      csv.push_back(format_double(it->second.mean));
      csv.push_back(format_double(it->second.sd));
      csv.push_back(std::to_string(it->second.count));
    }
    t.rows.push_back(std::move(md));
    t.csv_rows.push_back(std::move(csv));
  }
  t.notes.push_back("Values are mean ± σ, where σ is the sample standard deviation (n − 1 denominator).");
  return t;
}

Table anova_table(const std::string& model, EffectsKind kind, const std::vector<AnovaPair>& pairs, double alpha) {
  const bool full = kind == EffectsKind::Full;
  Table t;
  t.name = std::string("anova_") + (full ? "full_" : "reduced_") + model;
  t.title = std::string(full ? "Full" : "Reduced") + " effects models for " + model;
  t.columns.push_back("Effect");
  for (const auto& pr : pairs) {
    t.columns.push_back(metric_title(pr.full.metric) + " coefficient");
    t.columns.push_back(metric_title(pr.full.metric) + " p-value");
  }
  t.csv_columns = {"model", "kind", "metric", "effect", "coef", "se", "t", "p", "df", "n"};
  std::vector<std::string> names;
  if (!pairs.empty()) names = pairs.front().full.factors;
  for (const auto& pr : pairs) {
    for (const auto& f : pr.full.factors) {
      if (std::find(names.begin(), names.end(), f) == names.end()) names.push_back(f);
    }
  }
  names.push_back("Intercept");
  for (const auto& name : names) {
    std::vector<std::string> md{name};
    for (const auto& pr : pairs) {
      const EffectsModel& m = full ? pr.full : pr.reduced;
      const Effect* e = name == "Intercept" ? &m.intercept : m.find(name);
      if (!e) {
        md.insert(md.end(), {"-", "-"});
      } else {
        md.push_back(fixed(e->coef, 5));
        md.push_back(name == "Intercept" ? "-" : fixed(e->p, 3));
      }
      std::vector<std::string> csv{model, full ? "full" : "reduced", m.metric, name};
      if (!e) {
        csv.insert(csv.end(), {"-", "-", "-", "-"});
      } else {
        csv.insert(csv.end(),
                   {format_double(e->coef), format_double(e->se), format_double(e->t), format_double(e->p)});
      }
      csv.push_back(std::to_string(m.df));
      csv.push_back(std::to_string(m.n));
      t.csv_rows.push_back(std::move(csv));
    }
    t.rows.push_back(std::move(md));
  }
  t.notes.push_back("Each observation is one (dataset, replication) out-of-sample value; the random dataset is "
                    "excluded. Residual df = n − (1 + number of effects).");
  t.notes.push_back("p-values are two-sided coefficient t-tests (equal to the single-df F-tests).");
  if (!full) {
    t.notes.push_back("Effects were removed one at a time, largest p-value first, until every remaining p ≤ " +
                      format_double(alpha) + "; a dash marks a removed effect.");
  }
  return t;
}

Table elimination_table(const ReportBundle& b) {
  Table t;
  t.name = "elimination";
  t.title = "Backward elimination trace";
  t.columns = {"Model", "Metric", "Step", "Dropped", "p-value"};
  t.csv_columns = {"model", "metric", "step", "dropped", "p"};
  for (const auto& [model, pairs] : b.anova) {
    for (const auto& pr : pairs) {
      for (std::size_t s = 0; s < pr.reduced.trace.size(); ++s) {
        const auto& st = pr.reduced.trace[s];
        t.rows.push_back({model, metric_title(pr.reduced.metric), std::to_string(s + 1), st.dropped,
                          fixed(st.p_value, 3)});
        t.csv_rows.push_back({model, pr.reduced.metric, std::to_string(s + 1), st.dropped,
                              format_double(st.p_value)});
      }
    }
  }
  return t;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

ReportBundle analyze_records(const RecordFile& file, double alpha) {
  if (file.records.empty()) throw Error(ErrorCode::EmptyRecords, "no evaluation records");
  if (!(alpha > 0 && alpha < 1)) throw Error(ErrorCode::InvalidParameter, "alpha must lie in (0, 1)");
  const auto& records = file.records;
  ReportBundle b;
  b.config_hash = file.config_hash();
  b.alpha = alpha;
  const auto metrics = metrics_present(records);

  b.tables.push_back(summary_table("asset_presence",
                                   "Mean non-baseline out-of-sample performance by asset type presence",
                                   "Asset type", true, summarize_by_asset_presence(records), metrics));
  b.tables.push_back(summary_table("datasets", "Mean non-baseline out-of-sample performance by dataset",
                                   "Dataset", false, summarize_by_dataset(records), metrics));
  b.tables.push_back(summary_table("models_out", "Mean out-of-sample performance by model (random dataset excluded)",
                                   "Model", false, summarize_by_model(records, SampleSplit::Out), metrics));
  b.tables.push_back(summary_table("models_in", "Mean in-sample performance by model (random dataset excluded)",
                                   "Model", false, summarize_by_model(records, SampleSplit::In), metrics));

  for (const auto& model : models_in(records)) {
    std::vector<AnovaPair> pairs;
    for (const auto& metric : metrics) {
      const bool has = std::any_of(records.begin(), records.end(), [&](const EvalRecord& r) {
        return r.model == model && r.metric == metric && r.split == SampleSplit::Out && r.dataset != "random";
      });
      if (!has) continue;
      try {
        EffectsModel full = fit_ols_effects(records, model, metric);
        EffectsModel reduced = reduce_effects(full, alpha);
        pairs.push_back({std::move(full), std::move(reduced)});
      } catch (const Error& e) {
        b.skipped.push_back(model + "/" + metric + ": " + e.what());
      }
    }
    if (pairs.empty()) continue;
    b.tables.push_back(anova_table(model, EffectsKind::Full, pairs, alpha));
    b.tables.push_back(anova_table(model, EffectsKind::Reduced, pairs, alpha));
    b.anova.emplace_back(model, std::move(pairs));
  }
  b.tables.push_back(elimination_table(b));
  return b;
}

std::string render_markdown(const Table& t) {
  std::ostringstream out;
  out << "### " << t.title << "\n\n|";
  for (const auto& c : t.columns) out << ' ' << c << " |";
  out << "\n|";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i == 0 ? " :--- |" : " ---: |");
  out << '\n';
  for (const auto& row : t.rows) {
    out << '|';
    for (const auto& c : row) out << ' ' << c << " |";
    out << '\n';
  }
  if (!t.notes.empty()) {
    out << '\n';
    for (const auto& n : t.notes) out << "_" << n << "_\n";
  }
  return out.str();
}

std::string render_csv(const Table& t) {
  std::ostringstream out;
  for (std::size_t i = 0; i < t.csv_columns.size(); ++i) out << (i ? "," : "") << csv_cell(t.csv_columns[i]);
  out << '\n';
  for (const auto& row : t.csv_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
  return out.str();
}

namespace {

nlohmann::json effect_json(const Effect& e) {
  return {{"effect", e.name}, {"coef", e.coef}, {"se", e.se}, {"t", e.t}, {"p", e.p}};
}

nlohmann::json model_json(const EffectsModel& m) {
  nlohmann::json j;
  j["kind"] = m.kind == EffectsKind::Full ? "full" : "reduced";
  j["df"] = m.df;
  j["n"] = m.n;
  j["sigma2"] = m.sigma2;
  j["intercept"] = effect_json(m.intercept);
  j["effects"] = nlohmann::json::array();
  for (const auto& e : m.effects) j["effects"].push_back(effect_json(e));
  if (m.kind == EffectsKind::Reduced) {
    j["trace"] = nlohmann::json::array();
    for (const auto& s : m.trace) j["trace"].push_back({{"dropped", s.dropped}, {"p", s.p_value}});
  }
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace

void write_report(const ReportBundle& bundle, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir + ": " + ec.message());
  const std::string md_head = "<!-- config-hash: " + bundle.config_hash + " -->\n\n";
  const std::string csv_head = "# config-hash: " + bundle.config_hash + "\n";

  std::string all = md_head + "# Experiment report\n\nSignificance level: " + format_double(bundle.alpha) + "\n\n";
  for (const auto& t : bundle.tables) {
    const std::string md = render_markdown(t);
    write_text(fs::path(dir) / (t.name + ".md"), md_head + md);
    write_text(fs::path(dir) / (t.name + ".csv"), csv_head + render_csv(t));
    all += md + "\n";
  }
  if (!bundle.skipped.empty()) {
    all += "### Skipped effects models\n\n";
    for (const auto& s : bundle.skipped) all += "- " + s + "\n";
  }
  write_text(fs::path(dir) / "report.md", all);

  nlohmann::json j;
  j["config_hash"] = bundle.config_hash;
  j["alpha"] = bundle.alpha;
  j["models"] = nlohmann::json::object();
  for (const auto& [model, pairs] : bundle.anova) {
    nlohmann::json per;
    for (const auto& pr : pairs) per[pr.full.metric] = {{"full", model_json(pr.full)}, {"reduced", model_json(pr.reduced)}};
    j["models"][model] = per;
  }
  j["skipped"] = bundle.skipped;
  write_text(fs::path(dir) / "anova.json", j.dump(2) + "\n");
}

}  // namespace intermarket
