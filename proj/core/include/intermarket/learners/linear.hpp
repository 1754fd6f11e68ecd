#pragma once

#include "intermarket/learners/classifier.hpp"

namespace intermarket {

enum class Penalty { L1, L2 };

// --- logistic regression ---------------------------------------------------

enum class LogisticSolver { NewtonCG, LBFGS, CoordinateDescent };

struct LogisticParams {
  Penalty penalty = Penalty::L2;
  double C = 1.0;
  LogisticSolver solver = LogisticSolver::LBFGS;
  double tol = 1e-6;
  int max_iter = 1000;
};

/// Linear model with score beta.x + b; predicts +1 when the score is >= 0.
class LinearModel final : public Classifier {
 public:
  LinearModel(Family family, Vector beta, double intercept, FitInfo info);

  Family family() const override { return family_; }
  std::vector<int> predict(const Samples& x) const override;
  std::vector<double> score(const Samples& x) const override;
  std::string dump() const override;

  const Vector& coefficients() const { return beta_; }
  double intercept() const { return intercept_; }

 private:
  Family family_;
  Vector beta_;
  double intercept_;
};

/// (1/C) R(beta) + sum_i log(1 + exp(-y_i (beta.x_i + b))), with R = |beta|_1 or
/// 0.5 |beta|_2^2. The intercept is not penalized.
double logistic_objective(const MatrixRef& x, std::span<const int> y, const Vector& beta, double intercept,
                          Penalty penalty, double C);

/// Gradient of the L2 objective; the last entry is d/d(intercept).
Vector logistic_gradient(const MatrixRef& x, std::span<const int> y, const Vector& beta, double intercept,
                         double C);

/// Throws IncompatibleCombination for l1 with the Newton-CG or L-BFGS solvers.
LinearModel fit_logistic_regression(const MatrixRef& x, std::span<const int> y, const LogisticParams& params);

// --- linear SVM --------------------------------------------------------------

enum class SvmLoss { Hinge, SquaredHinge };

struct SvmParams {
  Penalty penalty = Penalty::L2;
  double C = 1.0;
  SvmLoss loss = SvmLoss::SquaredHinge;
  /// Dual coordinate descent (l2 penalty only) when true; primal coordinate
  /// descent (l1 + squared hinge only) when false.
  bool dual = true;
  double tol = 1e-6;
  int max_epochs = 10000;
};

/// Throws IncompatibleCombination for l1 + hinge, for l1 on the dual path and
/// for l2 + hinge on the primal path.
void check_svm_combination(const SvmParams& params);

/// The bias is fitted as the weight of a constant feature equal to 1, so it is
/// regularized together with the other weights. FitInfo::objective_trace holds
/// the objective the solver minimizes (the dual objective on the dual path).
LinearModel fit_linear_svm(const MatrixRef& x, std::span<const int> y, const SvmParams& params,
                           std::uint64_t seed);

/// Primal objective R(w) + C sum_i loss(1 - y_i (beta.x_i + b)), with the bias
/// included in R.
double svm_primal_objective(const MatrixRef& x, std::span<const int> y, const Vector& beta, double bias,
                            const SvmParams& params);

}  // namespace intermarket
