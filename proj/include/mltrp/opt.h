#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "mltrp/learn.h"
#include "mltrp/trp.h"
#include "mltrp/types.h"

namespace mltrp {

/// Which node weights define the traversal cost: sigmoid probabilities
/// (expected failures) or softplus scores (log surrogate of first failure).
enum class CostModel { kCost1, kCost2Surrogate };
enum class Method { kSequential, kNelderMead, kAlternating };

std::string ToString(CostModel model);
std::string ToString(Method method);
CostModel ParseCostModel(const std::string& text);
Method ParseMethod(const std::string& text);

struct NelderMeadOptions {
  double initial_scale = 0.1;  ///< vertex offsets are scale * max(1, |lambda0|_inf)
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  int max_evaluations = 4000;
  double diameter_tol = 1e-8;
};

struct AlternatingOptions {
  int iterations = 10;  ///< T
  TrainConfig inner;    ///< c2 is taken from MltrpConfig
};

struct MltrpConfig {
  double c1 = 0.0;
  double c2 = 0.0;
  CostModel cost_model = CostModel::kCost1;
  TrainConfig train;  ///< trainer for the sequential step; c2 overridden
  NelderMeadOptions nm;
  AlternatingOptions am;

  void Validate() const;
  TrainConfig TrainerConfig() const;
};

/// Training data, graph nodes and the distances between them.
struct MltrpProblem {
  LabeledDataset data;
  NodeSet nodes;
  DistanceMatrix distances;

  MltrpProblem(LabeledDataset data, NodeSet nodes, DistanceMatrix distances);
};

struct MltrpSolution {
  ModelParams lambda;
  Route route;
  double training_error = 0.0;
  double traversal_cost = 0.0;
  double combined_objective = 0.0;
  /// Sequential: single entry. NM: best vertex value per iteration.
  /// AM: Obj(lambda_t, pi_t) per outer iteration.
  std::vector<double> trace;
  Method method = Method::kSequential;
  int iterations = 0;
  int evaluations = 0;
  int route_solves = 0;
  int lambda_solves = 0;
  bool converged = false;
};

NodeWeights RouteWeights(const ModelParams& lambda, const NodeSet& nodes, CostModel model);

/// Traversal cost of a fixed route under the configured cost model.
double TraversalCost(const ModelParams& lambda, const Route& route, const MltrpProblem& problem,
                     CostModel model);

/// TrainingError(lambda) + C1 * traversal cost of `route`.
double Obj(const ModelParams& lambda, const Route& route, const MltrpProblem& problem,
           const MltrpConfig& config);

/// Gradient of Obj in lambda for a fixed route.
Eigen::VectorXd ObjGradient(const ModelParams& lambda, const Route& route,
                            const MltrpProblem& problem, const MltrpConfig& config);

struct SimultaneousValue {
  double value = 0.0;
  double training_error = 0.0;
  TrpSolution inner;
};

/// TrainingError(lambda) + C1 * min over routes, the inner minimum solved exactly.
SimultaneousValue SimultaneousObjective(const ModelParams& lambda, const MltrpProblem& problem,
                                        const MltrpConfig& config);

MltrpSolution SequentialPipeline(const MltrpProblem& problem, const MltrpConfig& config);

/// Derivative-free search over lambda. Defaults to a warm start at the
/// logistic optimum.
MltrpSolution NelderMead(const MltrpProblem& problem, const MltrpConfig& config,
                         std::optional<ModelParams> lambda0 = std::nullopt);

/// Alternates exact route solves with gradient descent in lambda; stops early
/// when a route repeats.
MltrpSolution AlternatingMinimization(const MltrpProblem& problem, const MltrpConfig& config,
                                      std::optional<ModelParams> lambda0 = std::nullopt);

MltrpSolution Solve(const MltrpProblem& problem, const MltrpConfig& config, Method method,
                    std::optional<ModelParams> lambda0 = std::nullopt);

struct SweepRow {
  double c1 = 0.0;
  double train_auc = 0.0;
  std::optional<double> test_auc;
  double traversal_cost = 0.0;
  double train_loss = 0.0;
  Route route;
};

/// One solve per C1 value, every solve from the same lambda0.
std::vector<SweepRow> C1Sweep(const MltrpProblem& problem, const std::optional<LabeledDataset>& test,
                              const MltrpConfig& base, Method method, const std::vector<double>& c1_grid);

/// AUC when both classes are present, otherwise nullopt.
std::optional<double> ModelAuc(const ModelParams& lambda, const LabeledDataset& data);

std::string SweepCsv(const std::vector<SweepRow>& rows);

/// Training error and optimal traversal cost on every point of a square
/// lambda grid (d = 2 only). Used to find global optima by enumeration.
struct LambdaGrid {
  std::vector<Eigen::Vector2d> points;
  std::vector<double> training_error;
  std::vector<double> traversal_cost;

  /// Index of the grid point minimizing training_error + c1 * traversal_cost.
  std::size_t Argmin(double c1) const;
};

LambdaGrid EvaluateLambdaGrid(const MltrpProblem& problem, const MltrpConfig& config, double lo,
                              double hi, double step);

}  // namespace mltrp
