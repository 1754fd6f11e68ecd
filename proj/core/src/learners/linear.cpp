#include "intermarket/learners/linear.hpp"

#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

namespace intermarket {

namespace {

using ColMatrix = Eigen::MatrixXd;

/// log(1 + exp(-m)) without overflow.
double log1pexp_neg(double m) { return m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m)); }

/// 1 / (1 + exp(m)) = sigma(-m).
double sigmoid_neg(double m) {
  if (m >= 0) {
    const double e = std::exp(-m);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(m));
}

Vector labels_vector(std::span<const int> y) {
  Vector v(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) v[static_cast<Eigen::Index>(i)] = y[i] > 0 ? 1.0 : -1.0;
  return v;
}

bool relative_change_small(double prev, double cur, double tol) {
  return std::abs(prev - cur) <= tol * std::max({std::abs(prev), std::abs(cur), 1.0});
}

/// Smooth L2-regularized logistic objective over w = [beta; b].
class L2Logistic {
 public:
  L2Logistic(const MatrixRef& x, std::span<const int> y, double C) : x_(x), y_(labels_vector(y)), inv_c_(1.0 / C) {}

  Eigen::Index dim() const { return x_.cols() + 1; }

  double value(const Vector& w) const {
    const Vector m = margins(w);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < m.size(); ++i) loss += log1pexp_neg(m[i]);
    const auto d = x_.cols();
    return 0.5 * inv_c_ * w.head(d).squaredNorm() + loss;
  }

  /// Value and gradient; also caches curvature weights for hessian_times().
  double value_grad(const Vector& w, Vector& g) {
    const Vector m = margins(w);
    const auto d = x_.cols();
    Vector coef(m.size());
    curvature_.resize(m.size());
    double loss = 0.0;
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      loss += log1pexp_neg(m[i]);
      const double s = sigmoid_neg(m[i]);
      coef[i] = -y_[i] * s;
      curvature_[i] = s * (1.0 - s);
    }
    g.resize(dim());
    g.head(d) = x_.transpose() * coef + inv_c_ * w.head(d);
    g[d] = coef.sum();
    return 0.5 * inv_c_ * w.head(d).squaredNorm() + loss;
  }

  Vector hessian_times(const Vector& v) const {
    const auto d = x_.cols();
    Vector u = x_ * v.head(d);
    u.array() += v[d];
    u.array() *= curvature_.array();
    Vector out(dim());
    out.head(d) = x_.transpose() * u + inv_c_ * v.head(d);
    out[d] = u.sum();
    return out;
  }

 private:
  Vector margins(const Vector& w) const {
    const auto d = x_.cols();
    Vector z = x_ * w.head(d);
    z.array() += w[d];
    return z.cwiseProduct(y_);
  }

  const MatrixRef& x_;
  Vector y_;
  double inv_c_;
  Vector curvature_;
};

/// Backtracking Armijo search along `dir`. Returns the accepted step or 0.
double armijo(L2Logistic& obj, const Vector& w, double f, const Vector& g, const Vector& dir, Vector& w_out,
              double& f_out) {
  const double slope = g.dot(dir);
  if (!(slope < 0)) return 0.0;
  double step = 1.0;
  for (int k = 0; k < 60; ++k) {
    w_out = w + step * dir;
    f_out = obj.value(w_out);
    if (f_out <= f + 1e-4 * step * slope) return step;
    step *= 0.5;
  }
  return 0.0;
}

FitInfo newton_cg(L2Logistic& obj, Vector& w, const LogisticParams& p) {
  FitInfo info;
  info.converged = false;
  Vector g;
  double f = obj.value_grad(w, g);
  const double g0 = std::max(1.0, g.lpNorm<Eigen::Infinity>());
  const auto dim = obj.dim();
  for (int it = 0; it < p.max_iter; ++it) {
    const double gnorm = g.lpNorm<Eigen::Infinity>();
    if (gnorm <= p.tol * g0) {
      info.converged = true;
      break;
    }
    // Truncated CG on H s = -g.
    Vector s = Vector::Zero(dim);
    Vector r = -g;
    Vector dir = r;
    double rr = r.squaredNorm();
    const double cg_tol = std::min(0.5, std::sqrt(g.norm())) * g.norm();
    for (int k = 0; k < 2 * dim + 10 && std::sqrt(rr) > cg_tol; ++k) {
      const Vector hd = obj.hessian_times(dir);
      const double curv = dir.dot(hd);
      if (curv <= 0) break;
      const double alpha = rr / curv;
      s += alpha * dir;
      r -= alpha * hd;
      const double rr_new = r.squaredNorm();
      dir = r + (rr_new / rr) * dir;
      rr = rr_new;
    }
    if (s.squaredNorm() == 0.0) s = -g;
    Vector w_new;
    double f_new = f;
    if (armijo(obj, w, f, g, s, w_new, f_new) == 0.0) break;
    w = std::move(w_new);
    f = obj.value_grad(w, g);
    info.iterations = it + 1;
    info.objective_trace.push_back(f);
  }
  if (!info.converged) info.converged = g.lpNorm<Eigen::Infinity>() <= p.tol * g0;
  return info;
}

FitInfo lbfgs(L2Logistic& obj, Vector& w, const LogisticParams& p) {
  constexpr int kMemory = 10;
  FitInfo info;
  info.converged = false;
  Vector g;
  double f = obj.value_grad(w, g);
  const double g0 = std::max(1.0, g.lpNorm<Eigen::Infinity>());
  std::deque<std::pair<Vector, Vector>> history;  // (s, y)
  for (int it = 0; it < p.max_iter; ++it) {
    if (g.lpNorm<Eigen::Infinity>() <= p.tol * g0) {
      info.converged = true;
      break;
    }
    // Two-loop recursion.
    Vector q = g;
    std::vector<double> alphas(history.size());
    for (std::size_t k = history.size(); k-- > 0;) {
      const auto& [s, yv] = history[k];
      alphas[k] = s.dot(q) / yv.dot(s);
      q -= alphas[k] * yv;
    }
    if (!history.empty()) {
      const auto& [s, yv] = history.back();
      q *= s.dot(yv) / yv.squaredNorm();
    } else {
      q /= std::max(1.0, g.norm());
    }
    for (std::size_t k = 0; k < history.size(); ++k) {
      const auto& [s, yv] = history[k];
      const double beta = yv.dot(q) / yv.dot(s);
      q += (alphas[k] - beta) * s;
    }
    Vector dir = -q;
    if (!(g.dot(dir) < 0)) {
      history.clear();
      dir = -g / std::max(1.0, g.norm());
    }
    Vector w_new;
    double f_new = f;
    if (armijo(obj, w, f, g, dir, w_new, f_new) == 0.0) break;
    Vector g_new;
    f_new = obj.value_grad(w_new, g_new);
    Vector s = w_new - w;
    Vector yv = g_new - g;
    if (s.dot(yv) > 1e-12 * yv.squaredNorm()) {
      history.emplace_back(std::move(s), std::move(yv));
      if (history.size() > kMemory) history.pop_front();
    }
    const double f_prev = f;
    w = std::move(w_new);
    g = std::move(g_new);
    f = f_new;
    info.iterations = it + 1;
    info.objective_trace.push_back(f);
    if (relative_change_small(f_prev, f, p.tol * 1e-6)) {
      info.converged = g.lpNorm<Eigen::Infinity>() <= p.tol * g0;
      if (!info.converged) continue;
      break;
    }
  }
  if (!info.converged) info.converged = g.lpNorm<Eigen::Infinity>() <= p.tol * g0;
  return info;
}

/// Coordinate descent on a sequence of quadratic models (the newGLMNET scheme):
/// each outer step runs cyclic coordinate passes over the second-order model of
/// the loss plus the exact penalty, then line-searches along the resulting
/// direction. Handles both penalties; the intercept is unpenalized.
FitInfo coordinate_descent_logistic(const MatrixRef& x, std::span<const int> y, const LogisticParams& p,
                                    Vector& beta, double& intercept) {
  constexpr int kMaxInner = 100;
  const ColMatrix xc = x;
  const Eigen::Index n = xc.rows();
  const Eigen::Index d = xc.cols();
  const Vector yv = labels_vector(y);
  const double lambda = 1.0 / p.C;
  const bool l1 = p.penalty == Penalty::L1;

  beta = Vector::Zero(d);
  intercept = 0.0;
  Vector z = Vector::Zero(n);  // beta.x_i + b

  auto penalty_of = [&](const Vector& b) { return l1 ? lambda * b.lpNorm<1>() : 0.5 * lambda * b.squaredNorm(); };
  auto loss_at = [&](const Vector& zz) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) v += log1pexp_neg(yv[i] * zz[i]);
    return v;
  };

  Vector coef(n);   // d loss / d z_i
  Vector curv(n);   // d^2 loss / d z_i^2
  Vector grad(d);   // loss gradient over beta
  double grad_b = 0.0;
  auto refresh = [&] {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = sigmoid_neg(yv[i] * z[i]);
      coef[i] = -yv[i] * s;
      curv[i] = s * (1.0 - s);
    }
    grad.noalias() = xc.transpose() * coef;
    grad_b = coef.sum();
  };
  // Minimum-norm subgradient of the full objective, infinity norm.
  auto optimality = [&] {
    double worst = std::abs(grad_b);
    for (Eigen::Index j = 0; j < d; ++j) {
      double v = 0.0;
      if (!l1) v = grad[j] + lambda * beta[j];
      else if (beta[j] > 0) v = grad[j] + lambda;
      else if (beta[j] < 0) v = grad[j] - lambda;
      else v = std::max(0.0, std::abs(grad[j]) - lambda);
      worst = std::max(worst, std::abs(v));
    }
    return worst;
  };

  FitInfo info;
  info.converged = false;
  refresh();
  const double opt0 = std::max(1.0, optimality());
  double f = loss_at(z) + penalty_of(beta);
  Vector hdiag(d);
  Vector step(d);
  Vector xstep(n);  // X step + step_b
  for (int it = 0; it < p.max_iter; ++it) {
    if (optimality() <= p.tol * opt0) {
      info.converged = true;
      break;
    }
    for (Eigen::Index j = 0; j < d; ++j) hdiag[j] = xc.col(j).cwiseAbs2().dot(curv) + 1e-12;
    const double hdiag_b = curv.sum() + 1e-12;
    step.setZero();
    double step_b = 0.0;
    xstep.setZero();
    double first_pass = -1.0;
    for (int pass = 0; pass < kMaxInner; ++pass) {
      double largest = 0.0;
      for (Eigen::Index j = 0; j <= d; ++j) {
        const bool is_bias = j == d;
        double delta = 0.0;
        if (is_bias) {
          const double g = grad_b + curv.dot(xstep);
          delta = -g / hdiag_b;
          step_b += delta;
          xstep.array() += delta;
          largest = std::max(largest, std::abs(delta) * std::sqrt(hdiag_b));
          continue;
        }
        const auto col = xc.col(j);
        const double g_model = grad[j] + col.dot(curv.cwiseProduct(xstep));
        const double cur = beta[j] + step[j];
        double h = hdiag[j];
        if (l1) {
          if (g_model + lambda <= h * cur) delta = -(g_model + lambda) / h;
          else if (g_model - lambda >= h * cur) delta = -(g_model - lambda) / h;
          else delta = -cur;
        } else {
          h += lambda;
          delta = -(g_model + lambda * cur) / h;
        }
        if (delta == 0.0) continue;
        step[j] += delta;
        xstep.noalias() += delta * col;
        largest = std::max(largest, std::abs(delta) * std::sqrt(h));
      }
      if (first_pass < 0) first_pass = largest;
      if (largest <= 1e-3 * first_pass || largest <= 1e-14) break;
    }

    // Armijo search on the composite objective.
    const double pen_old = penalty_of(beta);
    double model = grad.dot(step) + grad_b * step_b;
    if (l1) model += penalty_of(beta + step) - pen_old;
    else model += lambda * beta.dot(step);
    if (!(model < 0)) break;
    double t = 1.0;
    bool accepted = false;
    Vector z_new(n);
    Vector beta_new(d);
    double f_new = f;
    for (int k = 0; k < 60; ++k) {
      z_new = z + t * xstep;
      beta_new = beta + t * step;
      f_new = loss_at(z_new) + penalty_of(beta_new);
      if (f_new <= f + 0.01 * t * model) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    beta = std::move(beta_new);
    intercept += t * step_b;
    z = std::move(z_new);
    const double prev = f;
    f = f_new;
    refresh();
    info.iterations = it + 1;
    info.objective_trace.push_back(f);
    if (relative_change_small(prev, f, p.tol)) {
      info.converged = true;
      break;
    }
  }
  if (!info.converged) info.converged = optimality() <= p.tol * opt0;
  return info;
}

}  // namespace

LinearModel::LinearModel(Family family, Vector beta, double intercept, FitInfo info)
    : family_(family), beta_(std::move(beta)), intercept_(intercept) {
  info_ = std::move(info);
}

std::vector<double> LinearModel::score(const Samples& x) const {
  Vector z = x.features * beta_;
  z.array() += intercept_;
  return std::vector<double>(z.data(), z.data() + z.size());
}

std::vector<int> LinearModel::predict(const Samples& x) const {
  std::vector<int> out;
  out.reserve(x.size());
  for (double s : score(x)) out.push_back(s >= 0.0 ? 1 : -1);
  return out;
}

std::string LinearModel::dump() const {
  std::ostringstream out;
  out << "intermarket-model v1\nfamily: " << family_name(family_) << "\nconverged: " << info_.converged
      << "\niterations: " << info_.iterations << "\nintercept: " << format_double(intercept_)
      << "\ncoefficients:";
  for (Eigen::Index j = 0; j < beta_.size(); ++j) out << ' ' << format_double(beta_[j]);
  out << '\n';
  return out.str();
}

double logistic_objective(const MatrixRef& x, std::span<const int> y, const Vector& beta, double intercept,
                          Penalty penalty, double C) {
  Vector z = x * beta;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double yi = y[static_cast<std::size_t>(i)] > 0 ? 1.0 : -1.0;
    loss += log1pexp_neg(yi * (z[i] + intercept));
  }
  const double reg = penalty == Penalty::L1 ? beta.lpNorm<1>() : 0.5 * beta.squaredNorm();
  return reg / C + loss;
}

Vector logistic_gradient(const MatrixRef& x, std::span<const int> y, const Vector& beta, double intercept,
                         double C) {
  L2Logistic obj(x, y, C);
  Vector w(beta.size() + 1);
  w.head(beta.size()) = beta;
  w[beta.size()] = intercept;
  Vector g;
  obj.value_grad(w, g);
  return g;
}

LinearModel fit_logistic_regression(const MatrixRef& x, std::span<const int> y, const LogisticParams& params) {
  check_training_set(x, y);
  if (!(params.C > 0)) throw Error(ErrorCode::InvalidParameter, "C must be positive");
  if (params.penalty == Penalty::L1 && params.solver != LogisticSolver::CoordinateDescent) {
    throw Error(ErrorCode::IncompatibleCombination, "l1 penalty requires the coordinate-descent solver");
  }
  const auto d = x.cols();
  if (params.solver == LogisticSolver::CoordinateDescent) {
    Vector beta;
    double b = 0.0;
    FitInfo info = coordinate_descent_logistic(x, y, params, beta, b);
    return LinearModel(Family::LogisticRegression, std::move(beta), b, std::move(info));
  }
  L2Logistic obj(x, y, params.C);
  Vector w = Vector::Zero(d + 1);
  FitInfo info = params.solver == LogisticSolver::NewtonCG ? newton_cg(obj, w, params) : lbfgs(obj, w, params);
  return LinearModel(Family::LogisticRegression, w.head(d), w[d], std::move(info));
}

// --- SVM -------------------------------------------------------------------

void check_svm_combination(const SvmParams& p) {
  if (!(p.C > 0)) throw Error(ErrorCode::InvalidParameter, "C must be positive");
  if (p.penalty == Penalty::L1 && p.loss == SvmLoss::Hinge) {
    throw Error(ErrorCode::IncompatibleCombination, "l1 penalty with hinge loss is not supported");
  }
  if (p.dual && p.penalty == Penalty::L1) {
    throw Error(ErrorCode::IncompatibleCombination, "l1 penalty is not available on the dual path");
  }
  if (!p.dual && p.loss == SvmLoss::Hinge) {
    throw Error(ErrorCode::IncompatibleCombination, "hinge loss is not available on the primal path");
  }
}

double svm_primal_objective(const MatrixRef& x, std::span<const int> y, const Vector& beta, double bias,
                            const SvmParams& p) {
  Vector z = x * beta;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double yi = y[static_cast<std::size_t>(i)] > 0 ? 1.0 : -1.0;
    const double slack = std::max(0.0, 1.0 - yi * (z[i] + bias));
    loss += p.loss == SvmLoss::Hinge ? slack : slack * slack;
  }
  const double reg = p.penalty == Penalty::L1 ? beta.lpNorm<1>() + std::abs(bias)
                                              : 0.5 * (beta.squaredNorm() + bias * bias);
  return reg + p.C * loss;
}

namespace {

/// Dual coordinate descent for l2-regularized hinge / squared-hinge loss:
/// min_a 0.5 a'Qa - e'a + 0.5 sum D a_i^2, 0 <= a_i <= U.
FitInfo svm_dual_cd(const MatrixRef& x, std::span<const int> y, const SvmParams& p, std::uint64_t seed,
                    Vector& w_out, double& bias_out) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  const bool hinge = p.loss == SvmLoss::Hinge;
  const double upper = hinge ? p.C : std::numeric_limits<double>::infinity();
  const double diag = hinge ? 0.0 : 0.5 / p.C;
  const Vector yv = labels_vector(y);

  Vector qdiag(n);
  for (Eigen::Index i = 0; i < n; ++i) qdiag[i] = x.row(i).squaredNorm() + 1.0 + diag;
  Vector alpha = Vector::Zero(n);
  Vector w = Vector::Zero(d);
  double b = 0.0;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  SplitMix rng(seed);

  auto dual_objective = [&] {
    return 0.5 * (w.squaredNorm() + b * b) + 0.5 * diag * alpha.squaredNorm() - alpha.sum();
  };

  // Shrinking as in liblinear: coordinates stuck at a bound whose gradient
  // points outward by more than last epoch's extreme are skipped until the
  // active set converges, then everything is rechecked.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double pg_max_old = kInf;
  double pg_min_old = -kInf;
  std::size_t active = order.size();
  FitInfo info;
  info.converged = false;
  double f = dual_objective();
  for (int epoch = 0; epoch < p.max_epochs; ++epoch) {
    for (std::size_t k = active; k > 1; --k) {
      std::swap(order[k - 1], order[static_cast<std::size_t>(rng.below(k))]);
    }
    double pg_max = -kInf;
    double pg_min = kInf;
    for (std::size_t s = 0; s < active;) {
      const Eigen::Index i = order[s];
      const double g = yv[i] * (x.row(i).dot(w) + b) - 1.0 + diag * alpha[i];
      double pg = 0.0;
      if (alpha[i] == 0.0) {
        if (g > pg_max_old) {
          std::swap(order[s], order[--active]);
          continue;
        }
        pg = std::min(g, 0.0);
      } else if (alpha[i] == upper) {
        if (g < pg_min_old) {
          std::swap(order[s], order[--active]);
          continue;
        }
        pg = std::max(g, 0.0);
      } else {
        pg = g;
      }
      ++s;
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (std::abs(pg) <= 1e-12) continue;
      const double old = alpha[i];
      alpha[i] = std::min(std::max(old - g / qdiag[i], 0.0), upper);
      const double delta = (alpha[i] - old) * yv[i];
      w += delta * x.row(i).transpose();
      b += delta;
    }
    const double prev = f;
    f = dual_objective();
    info.iterations = epoch + 1;
    info.objective_trace.push_back(f);
    if (relative_change_small(prev, f, p.tol)) {
      info.converged = true;
      break;
    }
    if (pg_max - pg_min <= p.tol) {
      if (active == order.size()) {
        info.converged = true;
        break;
      }
      active = order.size();
      pg_max_old = kInf;
      pg_min_old = -kInf;
      continue;
    }
    pg_max_old = pg_max <= 0 ? kInf : pg_max;
    pg_min_old = pg_min >= 0 ? -kInf : pg_min;
  }
  w_out = std::move(w);
  bias_out = b;
  return info;
}

/// Primal coordinate descent for l1-regularized squared-hinge loss.
FitInfo svm_primal_l1(const MatrixRef& x, std::span<const int> y, const SvmParams& p, Vector& w_out,
                      double& bias_out) {
  const ColMatrix xc = x;
  const Eigen::Index n = xc.rows();
  const Eigen::Index d = xc.cols();
  const Vector yv = labels_vector(y);
  Vector w = Vector::Zero(d + 1);  // last entry is the bias weight
  Vector slack = Vector::Ones(n);  // 1 - y_i w.x_i
  auto column = [&](Eigen::Index i, Eigen::Index j) { return j == d ? 1.0 : xc(i, j); };
  auto objective = [&] {
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (slack[i] > 0) loss += slack[i] * slack[i];
    }
    return w.lpNorm<1>() + p.C * loss;
  };

  FitInfo info;
  info.converged = false;
  double f = objective();
  Vector trial(n);
  for (int epoch = 0; epoch < p.max_epochs; ++epoch) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j <= d; ++j) {
      double g = 0.0;
      double h = 1e-12;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (slack[i] > 0) {
          const double xij = column(i, j);
          g -= 2.0 * p.C * yv[i] * xij * slack[i];
          h += 2.0 * p.C * xij * xij;
        }
      }
      const double cur = w[j];
      double dir = 0.0;
      if (g + 1.0 <= h * cur) dir = -(g + 1.0) / h;
      else if (g - 1.0 >= h * cur) dir = -(g - 1.0) / h;
      else dir = -cur;
      double viol = cur > 0 ? g + 1.0 : cur < 0 ? g - 1.0 : std::max(0.0, std::abs(g) - 1.0);
      worst = std::max(worst, std::abs(viol));
      if (std::abs(dir) < 1e-15) continue;
      const double model = g * dir + std::abs(cur + dir) - std::abs(cur);
      double old_loss = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (slack[i] > 0) old_loss += slack[i] * slack[i];
      }
      double step = 1.0;
      for (int k = 0; k < 30; ++k) {
        const double delta = step * dir;
        double new_loss = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          trial[i] = slack[i] - yv[i] * column(i, j) * delta;
          if (trial[i] > 0) new_loss += trial[i] * trial[i];
        }
        const double change = p.C * (new_loss - old_loss) + std::abs(cur + delta) - std::abs(cur);
        if (change <= 0.01 * step * model || change <= 0.0) {
          slack = trial;
          w[j] += delta;
          break;
        }
        step *= 0.5;
      }
    }
    const double prev = f;
    f = objective();
    info.iterations = epoch + 1;
    info.objective_trace.push_back(f);
    if (worst <= p.tol || relative_change_small(prev, f, p.tol)) {
      info.converged = true;
      break;
    }
  }
  w_out = w.head(d);
  bias_out = w[d];
  return info;
}

}  // namespace

LinearModel fit_linear_svm(const MatrixRef& x, std::span<const int> y, const SvmParams& params,
                           std::uint64_t seed) {
  check_training_set(x, y);
  check_svm_combination(params);
  Vector w;
  double b = 0.0;
  FitInfo info = params.dual ? svm_dual_cd(x, y, params, seed, w, b) : svm_primal_l1(x, y, params, w, b);
  return LinearModel(Family::LinearSVM, std::move(w), b, std::move(info));
}

}  // namespace intermarket
