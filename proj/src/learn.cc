#include "mltrp/learn.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mltrp/core.h"

namespace mltrp {

void TrainConfig::Validate() const {
  if (!(c2 >= 0.0)) throw ValidationError("C2 must be nonnegative");
  if (max_iters < 1) throw ValidationError("max_iters must be positive");
  if (!(grad_tol > 0.0)) throw ValidationError("grad_tol must be positive");
  if (!(armijo > 0.0 && armijo < 1.0)) throw ValidationError("Armijo constant must lie in (0, 1)");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw ValidationError("backtrack factor must lie in (0, 1)");
  if (!(initial_step > 0.0)) throw ValidationError("initial step must be positive");
  if (max_backtracks < 1) throw ValidationError("max_backtracks must be positive");
}

DescentResult MinimizeGradientDescent(const ObjectiveFn& objective, const GradientFn& gradient,
                                      Eigen::VectorXd x0, const TrainConfig& config) {
  config.Validate();
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  DescentResult result;
  result.x = std::move(x0);
  result.value = objective(result.x);
  if (!std::isfinite(result.value)) throw SolverError("non-finite objective at the starting point");
  Eigen::VectorXd grad = gradient(result.x);
  if (!grad.allFinite()) throw SolverError("non-finite gradient at the starting point");
  result.history.push_back(result.value);

  double trial_step = config.initial_step;
  for (;;) {
    result.grad_norm = grad.norm();
    if (result.grad_norm <= config.grad_tol) {
      result.converged = true;
      break;
    }
    if (result.iterations >= config.max_iters) break;

    const double grad_sq = result.grad_norm * result.grad_norm;
    double step = trial_step;
    bool accepted = false;
    Eigen::VectorXd candidate;
    double candidate_value = 0.0;
    for (int bt = 0; bt < config.max_backtracks; ++bt, step *= config.backtrack) {
      candidate = result.x - step * grad;
      candidate_value = objective(candidate);
      if (!std::isfinite(candidate_value)) continue;
      const double required = config.armijo * step * grad_sq;
      // Once the required decrease drops below the rounding level of the
      // objective, a non-increasing step is the best the arithmetic can certify.
      if (candidate_value <= result.value - required ||
          (candidate_value <= result.value && required <= 4.0 * kEps * std::abs(result.value))) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;

    Eigen::VectorXd next_grad = gradient(candidate);
    if (!next_grad.allFinite()) throw SolverError("non-finite gradient during descent");
    const Eigen::VectorXd s = candidate - result.x;
    const double sy = s.dot(next_grad - grad);
    trial_step = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, 1e-12, 1e12) : 2.0 * step;

    result.x = std::move(candidate);
    result.value = candidate_value;
    grad = std::move(next_grad);
    ++result.iterations;
    result.history.push_back(result.value);
  }
  return result;
}

double SigmoidProb(const ModelParams& lambda, const Eigen::VectorXd& x) {
  if (lambda.size() != x.size()) {
    throw DimensionMismatch("model has dimension " + std::to_string(lambda.size()) +
                            " but feature vector has dimension " + std::to_string(x.size()));
  }
  return Sigmoid(lambda.dot(x));
}

double TrainingError(const ModelParams& lambda, const LabeledDataset& data, double c2) {
  const Eigen::VectorXd scores = Scores(lambda, data.features());
  double loss = 0.0;
  for (Eigen::Index i = 0; i < scores.size(); ++i) loss += Softplus(-data.labels()[i] * scores[i]);
  return loss + c2 * lambda.squaredNorm();
}

Eigen::VectorXd TrainingGradient(const ModelParams& lambda, const LabeledDataset& data, double c2) {
  const Eigen::VectorXd scores = Scores(lambda, data.features());
  Eigen::VectorXd grad = 2.0 * c2 * lambda;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    const double y = data.labels()[i];
    grad -= (y * Sigmoid(-y * scores[i])) * data.features().row(i).transpose();
  }
  return grad;
}

FitResult FitLogistic(const LabeledDataset& data, const TrainConfig& config) {
  const double c2 = config.c2;
  DescentResult descent = MinimizeGradientDescent(
      [&](const Eigen::VectorXd& lambda) { return TrainingError(lambda, data, c2); },
      [&](const Eigen::VectorXd& lambda) { return TrainingGradient(lambda, data, c2); },
      Eigen::VectorXd::Zero(data.dim()), config);
  if (!std::isfinite(descent.value)) throw SolverError("non-finite loss encountered; check feature scaling");
  FitResult fit;
  fit.lambda = std::move(descent.x);
  fit.loss = descent.value;
  fit.grad_norm = descent.grad_norm;
  fit.iterations = descent.iterations;
  fit.converged = descent.converged;
  fit.history = std::move(descent.history);
  return fit;
}

double Auc(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size()) throw DimensionMismatch("scores and labels differ in length");
  const std::size_t n = scores.size();
  for (double s : scores) {
    if (!std::isfinite(s)) throw ValidationError("AUC scores must be finite");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double positives = 0, negatives = 0, positive_rank_sum = 0;
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start;
    while (end < n && scores[order[end]] == scores[order[start]]) ++end;
    // ranks start+1 .. end share their mean
    const double mid_rank = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t k = start; k < end; ++k) {
      const double y = labels[order[k]];
      if (y == 1.0) {
        positives += 1;
        positive_rank_sum += mid_rank;
      } else if (y == -1.0) {
        negatives += 1;
      } else {
        throw ValidationError("AUC labels must be -1 or +1");
      }
    }
    start = end;
  }
  if (positives == 0 || negatives == 0) throw ValidationError("AUC needs both positive and negative labels");
  return (positive_rank_sum - positives * (positives + 1) / 2) / (positives * negatives);
}

}  // namespace mltrp
