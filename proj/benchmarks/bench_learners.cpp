#include "bench_data.hpp"

#include <intermarket/learners.hpp>
#include <intermarket/tuning.hpp>

#include <benchmark/benchmark.h>

namespace im = intermarket;

static void BM_DecisionTree(benchmark::State& state) {
  const auto p = bench::make_problem(state.range(0), 20, 1);
  im::TreeParams tp;
  for (auto _ : state) benchmark::DoNotOptimize(im::fit_decision_tree(p.x, p.y, tp, 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DecisionTree)->Arg(250)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_RandomForest(benchmark::State& state) {
  const auto p = bench::make_problem(1000, 20, 2);
  im::ForestParams fp;
  fp.n_estimators = static_cast<int>(state.range(0));
  fp.tree.max_depth = 10;
  for (auto _ : state) benchmark::DoNotOptimize(im::fit_random_forest(p.x, p.y, fp, 7));
}
BENCHMARK(BM_RandomForest)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_Logistic(benchmark::State& state) {
  const auto p = bench::make_problem(1000, 20, 3);
  im::LogisticParams lp;
  lp.solver = static_cast<im::LogisticSolver>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(im::fit_logistic_regression(p.x, p.y, lp));
}
BENCHMARK(BM_Logistic)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

static void BM_LinearSvmDual(benchmark::State& state) {
  const auto p = bench::make_problem(1000, 20, 4);
  im::SvmParams sp;
  sp.C = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(im::fit_linear_svm(p.x, p.y, sp, 7));
}
BENCHMARK(BM_LinearSvmDual)->Arg(1)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_KnnPredict(benchmark::State& state) {
  const auto train = bench::make_problem(state.range(0), 20, 5);
  const auto test = bench::make_problem(200, 20, 6);
  const auto model = im::fit_knn(train.x, train.y, {});
  const im::Matrix lags(200, 0);
  const im::Samples s{test.x, test.y, lags};
  for (auto _ : state) benchmark::DoNotOptimize(model.score(s));
}
BENCHMARK(BM_KnnPredict)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_GridSearch(benchmark::State& state) {
  const auto p = bench::make_problem(600, 20, 8);
  const im::Matrix lags(600, 0);
  const im::Samples train{p.x, p.y, lags};
  const auto family = static_cast<im::Family>(state.range(0));
  const auto grid = im::default_grid(family, im::GridProfile::Compact);
  im::SearchOptions opt;
  opt.reuse_fits = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(im::grid_search(grid, train, 11, opt));
  state.SetLabel(std::string(im::family_name(family)) + (opt.reuse_fits ? " shared" : " plain"));
}
BENCHMARK(BM_GridSearch)
    ->ArgsProduct({{static_cast<long>(im::Family::DecisionTree), static_cast<long>(im::Family::KNN)}, {0, 1}})
    ->Unit(benchmark::kMillisecond);
