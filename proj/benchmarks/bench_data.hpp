#pragma once

#include <intermarket/common.hpp>

#include <random>
#include <vector>

namespace bench {

// Gaussian features; the label follows the sign of a noisy linear score.
struct Problem {
  intermarket::Matrix x;
  std::vector<int> y;
};

inline Problem make_problem(long n, long d, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Problem p{intermarket::Matrix(n, d), std::vector<int>(static_cast<std::size_t>(n))};
  for (long i = 0; i < n; ++i) {
    double s = 0.0;
    for (long j = 0; j < d; ++j) {
      p.x(i, j) = g(rng);
      s += p.x(i, j) * (j % 2 ? -0.5 : 1.0);
    }
    p.y[static_cast<std::size_t>(i)] = s + g(rng) >= 0.0 ? 1 : -1;
  }
  return p;
}

}  // namespace bench
