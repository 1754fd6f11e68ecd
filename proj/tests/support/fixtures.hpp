#pragma once

// Small builders shared by the unit and acceptance tests.

#include <intermarket/common.hpp>
#include <intermarket/learners/classifier.hpp>

#include "oracles.hpp"

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fixtures {

namespace im = intermarket;

inline std::vector<int> random_labels(std::mt19937_64& rng, std::size_t n) {
  std::vector<int> y(n);
  for (auto& v : y) v = (rng() & 1) ? 1 : -1;
  return y;
}

inline im::Matrix random_matrix(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d) {
  std::normal_distribution<double> g;
  im::Matrix m(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = g(rng);
  }
  return m;
}

inline oracle::Rows to_rows(const im::Matrix& m) {
  oracle::Rows r(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    r[static_cast<std::size_t>(i)].assign(m.row(i).data(), m.row(i).data() + m.cols());
  }
  return r;
}

/// Owns the storage behind an im::Samples view.
struct OwnedSamples {
  im::Matrix x;
  std::vector<int> y;
  im::Matrix lags;

  im::Samples view() const { return {x, y, lags}; }
};

inline OwnedSamples owned(im::Matrix x, std::vector<int> y) {
  OwnedSamples s{std::move(x), std::move(y), im::Matrix()};
  s.lags = im::Matrix::Zero(s.x.rows(), 1);
  return s;
}

/// Labels follow the sign of a noisy linear score.
inline OwnedSamples linear_problem(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d, double noise) {
  im::Matrix x = random_matrix(rng, n, d);
  std::normal_distribution<double> g;
  im::Vector w(d);
  for (Eigen::Index j = 0; j < d; ++j) w[j] = g(rng);
  std::vector<int> y(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    y[static_cast<std::size_t>(i)] = x.row(i).dot(w) + noise * g(rng) > 0 ? 1 : -1;
  }
  return owned(std::move(x), std::move(y));
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("intermarket-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace fixtures
