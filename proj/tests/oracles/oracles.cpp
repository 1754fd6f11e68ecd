#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace oracle {

Confusion count_confusion(const std::vector<int>& y, const std::vector<int>& p) {
  Confusion c;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 1 && p[i] == 1) c.tp++;
    if (y[i] == -1 && p[i] == 1) c.fp++;
    if (y[i] == -1 && p[i] == -1) c.tn++;
    if (y[i] == 1 && p[i] == -1) c.fn++;
  }
  return c;
}

double accuracy(const std::vector<int>& y, const std::vector<int>& p) {
  long hit = 0;
  for (std::size_t i = 0; i < y.size(); ++i) hit += y[i] == p[i];
  return static_cast<double>(hit) / static_cast<double>(y.size());
}

double class_f1(const std::vector<int>& y, const std::vector<int>& p, int cls) {
  long both = 0, predicted = 0, actual = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    both += y[i] == cls && p[i] == cls;
    predicted += p[i] == cls;
    actual += y[i] == cls;
  }
  const double precision = predicted ? static_cast<double>(both) / predicted : 0.0;
  const double recall = actual ? static_cast<double>(both) / actual : 0.0;
  return precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
}

double macro_f1(const std::vector<int>& y, const std::vector<int>& p) {
  return (class_f1(y, p, 1) + class_f1(y, p, -1)) / 2;
}

double weighted_f1(const std::vector<int>& y, const std::vector<int>& p) {
  double pos = 0;
  for (int v : y) pos += v == 1;
  const double n = static_cast<double>(y.size());
  return pos / n * class_f1(y, p, 1) + (n - pos) / n * class_f1(y, p, -1);
}

double pairwise_auc(const std::vector<int>& y, const std::vector<double>& s) {
  double wins = 0;
  long pairs = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] != -1) continue;
      ++pairs;
      if (s[i] > s[j]) wins += 1;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  if (pairs == 0) throw std::invalid_argument("one class only");
  return wins / static_cast<double>(pairs);
}

OlsFit normal_equations(const Rows& x, const std::vector<double>& y) {
  const std::size_t n = x.size(), p = x.front().size();
  // Augmented [X'X | I] reduced to [I | (X'X)^-1].
  std::vector<std::vector<double>> a(p, std::vector<double>(2 * p, 0.0));
  std::vector<double> xty(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < p; ++r) {
      xty[r] += x[i][r] * y[i];
      for (std::size_t c = 0; c < p; ++c) a[r][c] += x[i][r] * x[i][c];
    }
  }
  for (std::size_t r = 0; r < p; ++r) a[r][p + r] = 1.0;
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < p; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[piv], a[col]);
    const double d = a[col][col];
    if (std::abs(d) < 1e-300) throw std::runtime_error("singular normal equations");
    for (auto& v : a[col]) v /= d;
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      for (std::size_t c = 0; c < 2 * p; ++c) a[r][c] -= f * a[col][c];
    }
  }
  OlsFit fit;
  fit.coef.assign(p, 0.0);
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < p; ++c) fit.coef[r] += a[r][p + c] * xty[c];
  }
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = 0;
    for (std::size_t c = 0; c < p; ++c) f += x[i][c] * fit.coef[c];
    rss += (y[i] - f) * (y[i] - f);
  }
  fit.sigma2 = rss / static_cast<double>(n - p);
  for (std::size_t r = 0; r < p; ++r) fit.se.push_back(std::sqrt(fit.sigma2 * a[r][p + r]));
  return fit;
}

namespace {

double t_density(double t, double df) {
  const double logc = std::lgamma((df + 1) / 2) - std::lgamma(df / 2) - 0.5 * std::log(df * M_PI);
  return std::exp(logc - (df + 1) / 2 * std::log1p(t * t / df));
}

double simpson(double (*f)(double, double), double df, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
  const double m = (a + b) / 2, lm = (a + m) / 2, rm = (m + b) / 2;
  const double flm = f(lm, df), frm = f(rm, df);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol) return left + right + (left + right - whole) / 15;
  const double sub = std::max(tol / 2, 1e-18);
  return simpson(f, df, a, m, fa, flm, fm, left, sub, depth - 1) +
         simpson(f, df, m, b, fm, frm, fb, right, sub, depth - 1);
}

}  // namespace

double t_cdf_quadrature(double t, double df) {
  if (t == 0) return 0.5;
  const double b = std::abs(t);
  // Split [0, |t|] into unit pieces so each adaptive run starts well resolved.
  double area = 0;
  for (double lo = 0; lo < b; lo += 1.0) {
    const double hi = std::min(b, lo + 1.0);
    const double fa = t_density(lo, df), fb = t_density(hi, df), fm = t_density((lo + hi) / 2, df);
    area += simpson(t_density, df, lo, hi, fa, fm, fb, (hi - lo) / 6 * (fa + 4 * fm + fb), 1e-15, 40);
  }
  return t > 0 ? 0.5 + area : 0.5 - area;
}

double best_gini_split(const Rows& x, const std::vector<int>& y, int min_leaf) {
  const std::size_t n = x.size(), d = x.front().size();
  auto gini = [](double pos, double cnt) { return cnt > 0 ? 1.0 - (pos / cnt) * (pos / cnt) - (1 - pos / cnt) * (1 - pos / cnt) : 0.0; };
  double best = INFINITY;
  for (std::size_t f = 0; f < d; ++f) {
    std::set<double> values;
    for (const auto& row : x) values.insert(row[f]);
    std::vector<double> v(values.begin(), values.end());
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
      const double thr = (v[k] + v[k + 1]) / 2;
      double nl = 0, pl = 0, nr = 0, pr = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (x[i][f] <= thr) {
          nl++;
          pl += y[i] == 1;
        } else {
          nr++;
          pr += y[i] == 1;
        }
      }
      if (nl < min_leaf || nr < min_leaf) continue;
      best = std::min(best, (nl * gini(pl, nl) + nr * gini(pr, nr)) / n);
    }
  }
  return best;
}

double logistic_objective(const Rows& x, const std::vector<int>& y, const std::vector<double>& beta,
                          double intercept, bool l1, double C) {
  double loss = 0, reg = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double f = intercept;
    for (std::size_t j = 0; j < beta.size(); ++j) f += beta[j] * x[i][j];
    loss += std::log(1 + std::exp(-y[i] * f));
  }
  for (double b : beta) reg += l1 ? std::abs(b) : b * b / 2;
  return reg / C + loss;
}

std::vector<double> logistic_gradient_fd(const Rows& x, const std::vector<int>& y, const std::vector<double>& beta,
                                         double intercept, double C, double h) {
  std::vector<double> g;
  for (std::size_t j = 0; j <= beta.size(); ++j) {
    auto bp = beta, bm = beta;
    double ip = intercept, imn = intercept;
    if (j < beta.size()) {
      bp[j] += h;
      bm[j] -= h;
    } else {
      ip += h;
      imn -= h;
    }
    g.push_back((logistic_objective(x, y, bp, ip, false, C) - logistic_objective(x, y, bm, imn, false, C)) / (2 * h));
  }
  return g;
}

double distance(const std::vector<double>& a, const std::vector<double>& b, Metric m) {
  if (m == Metric::L1) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
    return s;
  }
  if (m == Metric::Cosine) {
    const double na = std::sqrt(std::inner_product(a.begin(), a.end(), a.begin(), 0.0));
    const double nb = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
    if (na > 0 && nb > 0) return std::max(0.0, 1 - std::inner_product(a.begin(), a.end(), b.begin(), 0.0) / (na * nb));
  }
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

std::vector<std::size_t> knn_indices(const Rows& train, const std::vector<double>& q, std::size_t k, Metric m) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t i = 0; i < train.size(); ++i) all.emplace_back(distance(train[i], q, m), i);
  std::stable_sort(all.begin(), all.end(), [](auto& a, auto& b) { return a.first < b.first; });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k && i < all.size(); ++i) out.push_back(all[i].second);
  return out;
}

int knn_uniform_vote(const std::vector<int>& labels, const std::vector<std::size_t>& idx) {
  long up = 0;
  for (auto i : idx) up += labels[i] == 1;
  return 2 * up >= static_cast<long>(idx.size()) ? 1 : -1;
}

std::vector<double> pct_change(const std::vector<double>& x) {
  std::vector<double> out;
  for (std::size_t t = 1; t < x.size(); ++t) out.push_back(x[t] / x[t - 1] - 1.0);
  return out;
}

std::vector<int> next_day_labels(const std::vector<double>& returns) {
  std::vector<int> out;
  for (std::size_t t = 0; t + 1 < returns.size(); ++t) out.push_back(returns[t + 1] > 0 ? 1 : -1);
  return out;
}

std::vector<long> intersect_all(const std::vector<std::vector<long>>& lists) {
  std::set<long> common(lists.front().begin(), lists.front().end());
  for (std::size_t i = 1; i < lists.size(); ++i) {
    std::set<long> other(lists[i].begin(), lists[i].end()), next;
    for (long v : common) {
      if (other.count(v)) next.insert(v);
    }
    common = next;
  }
  return {common.begin(), common.end()};
}

std::vector<SimpleFold> expanding_folds(std::size_t n, int k) {
  const std::size_t size = n / static_cast<std::size_t>(k + 1);
  std::vector<SimpleFold> out(static_cast<std::size_t>(k));
  std::size_t end = n;
  for (int i = k - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = {end - size, end - size, end};
    end -= size;
  }
  return out;
}

}  // namespace oracle
