#include <intermarket/analysis.hpp>

#include <benchmark/benchmark.h>

#include <random>

namespace im = intermarket;

static void BM_Ols(benchmark::State& state) {
  const long n = state.range(0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  im::Matrix x(n, 5);
  im::Vector y(n);
  for (long i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    for (long j = 1; j < 5; ++j) x(i, j) = (rng() & 1) ? 1.0 : 0.0;
    y(i) = 0.5 + 0.01 * x(i, 2) + 0.02 * g(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(im::ols(x, y));
}
BENCHMARK(BM_Ols)->Arg(800)->Arg(8000);

static void BM_TCdf(benchmark::State& state) {
  double t = -6.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(im::t_two_sided_p(t, 795.0));
    t = t > 6.0 ? -6.0 : t + 0.01;
  }
}
BENCHMARK(BM_TCdf);

static void BM_EffectsElimination(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 0.01);
  std::vector<im::Observation> data;
  for (int rep = 0; rep < 50; ++rep) {
    for (int mask = 0; mask < 16; ++mask) {
      std::string f;
      for (int b = 0; b < 4; ++b) {
        if (mask >> b & 1) f += "FBIC"[b];
      }
      data.push_back({f, 0.5 + ((mask & 2) ? 0.05 : 0.0) + g(rng)});
    }
  }
  for (auto _ : state) {
    const auto full = im::fit_effects(data, {"F", "B", "I", "C"});
    benchmark::DoNotOptimize(im::reduce_effects(full, 0.05));
  }
}
BENCHMARK(BM_EffectsElimination)->Unit(benchmark::kMicrosecond);
