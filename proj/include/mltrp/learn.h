#pragma once

#include <Eigen/Core>
#include <functional>
#include <span>
#include <vector>

#include "mltrp/types.h"

namespace mltrp {

/// Settings for the gradient-descent trainer. Each iteration starts from a
/// Barzilai-Borwein trial step and backtracks until the Armijo condition holds.
struct TrainConfig {
  double c2 = 0.0;  ///< coefficient of the squared l2 penalty
  int max_iters = 10000;
  double grad_tol = 1e-8;
  double armijo = 1e-4;
  double backtrack = 0.5;
  double initial_step = 1.0;
  int max_backtracks = 60;

  void Validate() const;
};

struct DescentResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Objective after each accepted step, starting with the initial point.
  std::vector<double> history;
};

using ObjectiveFn = std::function<double(const Eigen::VectorXd&)>;
using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Monotone gradient descent. Throws SolverError if the objective is not
/// finite at the starting point.
DescentResult MinimizeGradientDescent(const ObjectiveFn& objective, const GradientFn& gradient,
                                      Eigen::VectorXd x0, const TrainConfig& config);

/// P(y = 1 | x) = 1 / (1 + e^{-lambda . x})
double SigmoidProb(const ModelParams& lambda, const Eigen::VectorXd& x);

/// Regularized logistic loss sum_i ln(1 + e^{-y_i lambda . x_i}) + c2 ||lambda||^2.
double TrainingError(const ModelParams& lambda, const LabeledDataset& data, double c2);

Eigen::VectorXd TrainingGradient(const ModelParams& lambda, const LabeledDataset& data, double c2);

struct FitResult {
  ModelParams lambda;
  double loss = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;
};

/// Trains the logistic model from lambda = 0.
FitResult FitLogistic(const LabeledDataset& data, const TrainConfig& config);

/// Area under the ROC curve in Mann-Whitney form, ties counted as one half.
/// Labels are +1 / -1; both classes must be present.
double Auc(std::span<const double> scores, std::span<const double> labels);

}  // namespace mltrp
