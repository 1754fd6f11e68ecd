#include <intermarket/metrics.hpp>

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

namespace im = intermarket;

namespace {

struct Scored {
  std::vector<int> y, pred;
  std::vector<double> score;
};

Scored make_scored(std::size_t n) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Scored s;
  for (std::size_t i = 0; i < n; ++i) {
    s.y.push_back(rng() & 1 ? 1 : -1);
    // Coarse scores so that ties are common.
    s.score.push_back(std::round(u(rng) * 20.0) / 20.0);
    s.pred.push_back(s.score.back() >= 0.5 ? 1 : -1);
  }
  return s;
}

}  // namespace

static void BM_RocAuc(benchmark::State& state) {
  const auto s = make_scored(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(im::roc_auc(s.y, s.score));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RocAuc)->RangeMultiplier(4)->Range(256, 65536)->Complexity(benchmark::oNLogN);

static void BM_MacroF1(benchmark::State& state) {
  const auto s = make_scored(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(im::macro_f1(s.y, s.pred));
}
BENCHMARK(BM_MacroF1)->Arg(1024)->Arg(65536);
