#include <doctest.h>

#include <intermarket/metrics.hpp>
#include <intermarket/tuning.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

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

std::vector<std::string> axis_strings(const im::ParamAxis& a) {
  std::vector<std::string> out;
  for (const auto& v : a.values) out.push_back(im::param_to_string(v));
  return out;
}

using Strings = std::vector<std::string>;

}  // namespace

TEST_CASE("fold examples") {
  const auto f = im::make_folds(12, 5);
  REQUIRE(f.folds.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(f.folds[i].train.begin == 0);
    CHECK(f.folds[i].train.end == 2 + 2 * i);
    CHECK(f.folds[i].test.begin == 2 + 2 * i);
    CHECK(f.folds[i].test.end == 4 + 2 * i);
  }
  const auto g = im::make_folds(6, 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(g.folds[i].train.size() == i + 1);
    CHECK(g.folds[i].test.size() == 1);
  }
  // The remainder goes to the first training segment.
  const auto h = im::make_folds(14, 5);
  CHECK(h.folds[0].train.end == 4);
  CHECK(h.folds[4].test.end == 14);

  CHECK(code_of([] { (void)im::make_folds(5, 5); }) == im::ErrorCode::InsufficientData);
  CHECK(code_of([] { (void)im::make_folds(10, 1); }) == im::ErrorCode::InvalidParameter);
}

TEST_CASE("folds are chronological and match the oracle on 500 random draws") {
  std::mt19937_64 rng(1);
  for (int draw = 0; draw < 500; ++draw) {
    const int k = 2 + static_cast<int>(rng() % 9);
    const std::size_t n = static_cast<std::size_t>(k) + 1 + rng() % 2000;
    const auto f = im::make_folds(n, k);
    const auto ref = oracle::expanding_folds(n, k);
    REQUIRE(f.folds.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const auto& a = f.folds[i];
      CHECK(a.train.begin == 0);
      CHECK(a.train.end == ref[i].train_end);
      CHECK(a.test.begin == ref[i].test_begin);
      CHECK(a.test.end == ref[i].test_end);
      // Every training index precedes every test index; no overlap.
      CHECK(a.train.end <= a.test.begin);
      CHECK(a.train.size() > 0);
      CHECK(a.test.size() > 0);
      if (i > 0) CHECK(a.test.begin == f.folds[i - 1].test.end);
    }
    CHECK(f.folds.back().test.end == n);
  }
}

TEST_CASE("full grids have the published values") {
  const auto dt = im::default_grid(im::Family::DecisionTree);
  const auto rf = im::default_grid(im::Family::RandomForest);
  const auto lr = im::default_grid(im::Family::LogisticRegression);
  const auto svm = im::default_grid(im::Family::LinearSVM);
  const auto knn = im::default_grid(im::Family::KNN);
  CHECK(dt.size() == 96);
  CHECK(rf.size() == 288);
  CHECK(lr.size() == 42);
  CHECK(svm.size() == 20);
  CHECK(knn.size() == 24);

  const Strings depth{"5", "10", "25", "None"}, split{"2", "5", "10", "50"}, leaf{"1", "5", "10"};
  REQUIRE(dt.axes.size() == 4);
  CHECK(axis_strings(dt.axes[0]) == Strings{"best", "random"});
  CHECK(axis_strings(dt.axes[1]) == depth);
  CHECK(axis_strings(dt.axes[2]) == split);
  CHECK(axis_strings(dt.axes[3]) == leaf);
  REQUIRE(rf.axes.size() == 5);
  CHECK(axis_strings(rf.axes[0]) == Strings{"50", "100", "500"});
  CHECK(axis_strings(rf.axes[1]) == Strings{"gini", "entropy"});
  CHECK(axis_strings(rf.axes[2]) == depth);
  REQUIRE(lr.axes.size() == 3);
  CHECK(axis_strings(lr.axes[0]) == Strings{"l1", "l2"});
  CHECK(axis_strings(lr.axes[1]) == Strings{"0.001", "0.01", "0.1", "1", "10", "100", "1000"});
  CHECK(axis_strings(lr.axes[2]) == Strings{"newton-cg", "lbfgs", "liblinear"});
  REQUIRE(svm.axes.size() == 3);
  CHECK(axis_strings(svm.axes[1]) == Strings{"1", "4", "9", "16", "25"});
  CHECK(axis_strings(svm.axes[2]) == Strings{"hinge", "squared_hinge"});
  REQUIRE(knn.axes.size() == 3);
  CHECK(axis_strings(knn.axes[0]) == Strings{"5", "10", "15", "20"});
  CHECK(axis_strings(knn.axes[1]) == Strings{"uniform", "distance"});
  CHECK(axis_strings(knn.axes[2]) == Strings{"l1", "l2", "cosine"});

  // Every point is valid and distinct; the first axis varies slowest.
  for (const auto* g : {&dt, &rf, &lr, &svm, &knn}) {
    std::set<std::string> seen;
    for (const auto& spec : g->points()) {
      CHECK_NOTHROW(im::validate_spec(spec));
      seen.insert(spec.to_string());
    }
    CHECK(seen.size() == g->size());
  }
  CHECK(im::param_to_string(dt.at(0).params[0].value) == "best");
  CHECK(im::param_to_string(dt.at(48).params[0].value) == "random");
  CHECK(im::param_to_string(dt.at(1).params[3].value) == "5");

  for (auto f : {im::Family::DecisionTree, im::Family::RandomForest, im::Family::LogisticRegression,
                 im::Family::LinearSVM, im::Family::KNN}) {
    const auto c = im::default_grid(f, im::GridProfile::Compact);
    CHECK(c.size() >= 1);
    CHECK(c.size() < im::default_grid(f).size());
    for (const auto& spec : c.points()) CHECK_NOTHROW(im::validate_spec(spec));
  }
  CHECK(im::default_grid(im::Family::RandomBaseline).size() == 1);
  CHECK(im::parse_grid_profile("compact") == im::GridProfile::Compact);
  CHECK(code_of([] { (void)im::parse_grid_profile("huge"); }) == im::ErrorCode::ConfigError);
}

TEST_CASE("a one-point grid selects that point") {
  std::mt19937_64 rng(2);
  const auto s = fixtures::linear_problem(rng, 60, 3, 0.5);
  im::HyperGrid g{im::Family::KNN,
                  {{"n_neighbors", {std::int64_t{5}}}, {"weights", {std::string("uniform")}},
                   {"metric", {std::string("l2")}}}};
  const auto r = im::grid_search(g, s.view(), 1);
  CHECK(r.best_index == 0);
  CHECK(r.cv_table.size() == 1);
  CHECK(r.cv_table[0].fold_scores.size() == 5);
}

TEST_CASE("selection maximises the mean fold score, ties to the earliest point") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto s = fixtures::linear_problem(rng, 150, 4, 1.0);
    for (auto f : {im::Family::DecisionTree, im::Family::KNN}) {
      const auto r = im::grid_search(im::default_grid(f), s.view(), static_cast<std::uint64_t>(trial));
      std::size_t best = 0;
      for (std::size_t i = 0; i < r.cv_table.size(); ++i) {
        const auto& e = r.cv_table[i];
        double mean = 0;
        for (double v : e.fold_scores) mean += v;
        mean /= static_cast<double>(e.fold_scores.size());
        CHECK(e.mean_score == doctest::Approx(mean).epsilon(1e-15));
        if (e.mean_score > r.cv_table[best].mean_score) best = i;
      }
      CHECK(r.best_index == best);
      CHECK(r.best_score == r.cv_table[best].mean_score);
      CHECK(r.best_spec.to_string() == r.cv_table[best].spec.to_string());
    }
  }
}

TEST_CASE("fold scores are the macro F1 of a fit on the fold's training block") {
  std::mt19937_64 rng(4);
  const auto s = fixtures::linear_problem(rng, 90, 3, 1.0);
  const auto grid = im::default_grid(im::Family::LogisticRegression, im::GridProfile::Compact);
  const auto r = im::grid_search(grid, s.view(), 99);
  const auto& e = r.cv_table[r.best_index];
  for (std::size_t f = 0; f < r.folds.folds.size(); ++f) {
    const auto& fold = r.folds.folds[f];
    const auto m = im::fit_model(e.spec, im::slice(s.view(), fold.train), im::derive_seed(99, {f}));
    const auto test = im::slice(s.view(), fold.test);
    CHECK(e.fold_scores[f] == im::macro_f1(test.labels, m->predict(test)));
  }
}

TEST_CASE("incompatible points are zero-scored, not fatal") {
  std::mt19937_64 rng(5);
  const auto s = fixtures::linear_problem(rng, 100, 3, 1.0);
  const auto lr = im::grid_search(im::default_grid(im::Family::LogisticRegression), s.view(), 1);
  const auto zeros = lr.zero_scored();
  CHECK(zeros.size() == 14);
  for (auto i : zeros) {
    const auto& spec = lr.cv_table[i].spec;
    CHECK(spec.get_string("penalty", "") == "l1");
    CHECK(spec.get_string("solver", "") != "liblinear");
    CHECK(lr.cv_table[i].mean_score == 0.0);
    CHECK_FALSE(lr.cv_table[i].reason.empty());
  }
  CHECK_FALSE(lr.cv_table[lr.best_index].zero_scored);

  const auto svm = im::grid_search(im::default_grid(im::Family::LinearSVM), s.view(), 1);
  for (const auto& e : svm.cv_table) CHECK(e.zero_scored == (e.spec.get_string("penalty", "") == "l1"));
  im::SearchOptions primal;
  primal.fit.svm_dual = false;
  const auto svm_p = im::grid_search(im::default_grid(im::Family::LinearSVM), s.view(), 1, primal);
  for (const auto& e : svm_p.cv_table) {
    // The primal path takes both penalties but only the squared hinge.
    CHECK(e.zero_scored == (e.spec.get_string("loss", "") == "hinge"));
  }

  im::HyperGrid bad{im::Family::LogisticRegression,
                    {{"penalty", {std::string("l1")}}, {"C", {1.0}}, {"solver", {std::string("lbfgs")}}}};
  CHECK(code_of([&] { (void)im::grid_search(bad, s.view(), 1); }) == im::ErrorCode::AllCombinationsInvalid);
}

TEST_CASE("fit reuse gives the same table as fitting every point") {
  std::mt19937_64 rng(6);
  const auto s = fixtures::linear_problem(rng, 140, 4, 1.0);
  im::SearchOptions plain;
  plain.reuse_fits = false;
  for (const auto& grid : {im::default_grid(im::Family::DecisionTree), im::default_grid(im::Family::KNN),
                           im::default_grid(im::Family::RandomForest, im::GridProfile::Compact)}) {
    const auto a = im::grid_search(grid, s.view(), 7);
    const auto b = im::grid_search(grid, s.view(), 7, plain);
    REQUIRE(a.cv_table.size() == b.cv_table.size());
    for (std::size_t i = 0; i < a.cv_table.size(); ++i) {
      CHECK(a.cv_table[i].fold_scores == b.cv_table[i].fold_scores);
    }
    CHECK(a.best_index == b.best_index);
  }
}

TEST_CASE("searches are deterministic and refit on the whole split") {
  std::mt19937_64 rng(7);
  const auto s = fixtures::linear_problem(rng, 120, 4, 1.0);
  const auto grid = im::default_grid(im::Family::RandomForest, im::GridProfile::Compact);
  const auto a = im::grid_search(grid, s.view(), 11);
  const auto b = im::grid_search(grid, s.view(), 11);
  std::ostringstream ca, cb;
  im::write_cv_audit(ca, a);
  im::write_cv_audit(cb, b);
  CHECK(ca.str() == cb.str());
  std::size_t lines = 0;
  for (char c : ca.str()) lines += c == '\n';
  CHECK(lines == 1 + grid.size() * 5);
  CHECK(ca.str().rfind("spec,fold,macro_f1,zero_scored\n", 0) == 0);

  const auto m1 = im::fit_best(a, s.view(), 5);
  const auto m2 = im::fit_model(a.best_spec, s.view(), 5);
  CHECK(m1->dump() == m2->dump());

  const auto one = im::slice(s.view(), {0, 1});
  CHECK(code_of([&] { (void)im::fit_best(a, one, 5); }) == im::ErrorCode::InsufficientData);
}
