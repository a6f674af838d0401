#include "mltrp/opt.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "mltrp/core.h"

namespace mltrp {
namespace {

std::string FormatVector(const Eigen::VectorXd& v) {
  std::ostringstream out;
  out.precision(17);
  out << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  out << ']';
  return out.str();
}

std::string Number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void Finalize(MltrpSolution& solution, const MltrpProblem& problem, const MltrpConfig& config) {
  solution.training_error = TrainingError(solution.lambda, problem.data, config.c2);
  solution.traversal_cost = TraversalCost(solution.lambda, solution.route, problem, config.cost_model);
  solution.combined_objective = solution.training_error + config.c1 * solution.traversal_cost;
}

ModelParams DefaultStart(const MltrpProblem& problem, const MltrpConfig& config,
                         std::optional<ModelParams> lambda0) {
  if (lambda0) {
    if (lambda0->size() != problem.data.dim()) throw DimensionMismatch("lambda0 has the wrong dimension");
    return *std::move(lambda0);
  }
  return FitLogistic(problem.data, config.TrainerConfig()).lambda;
}

}  // namespace

std::string ToString(CostModel model) { return model == CostModel::kCost1 ? "cost1" : "cost2"; }

std::string ToString(Method method) {
  switch (method) {
    case Method::kSequential: return "sequential";
    case Method::kNelderMead: return "nm";
    case Method::kAlternating: return "am";
  }
  return "unknown";
}

CostModel ParseCostModel(const std::string& text) {
  if (text == "cost1") return CostModel::kCost1;
  if (text == "cost2") return CostModel::kCost2Surrogate;
  throw ValidationError("unknown cost model '" + text + "' (expected cost1 or cost2)");
}

Method ParseMethod(const std::string& text) {
  if (text == "sequential") return Method::kSequential;
  if (text == "nm") return Method::kNelderMead;
  if (text == "am") return Method::kAlternating;
  throw ValidationError("unknown method '" + text + "' (expected sequential, nm or am)");
}

void MltrpConfig::Validate() const {
  if (!(c1 >= 0.0) || !std::isfinite(c1)) throw ValidationError("C1 must be finite and nonnegative");
  if (!(c2 >= 0.0) || !std::isfinite(c2)) throw ValidationError("C2 must be finite and nonnegative");
  if (am.iterations < 1) throw ValidationError("alternating minimization needs T >= 1");
  if (nm.max_evaluations < 1) throw ValidationError("Nelder-Mead needs a positive evaluation budget");
  if (!(nm.diameter_tol > 0.0)) throw ValidationError("Nelder-Mead diameter tolerance must be positive");
  if (!(nm.initial_scale > 0.0)) throw ValidationError("Nelder-Mead initial scale must be positive");
}

TrainConfig MltrpConfig::TrainerConfig() const {
  TrainConfig out = train;
  out.c2 = c2;
  return out;
}

MltrpProblem::MltrpProblem(LabeledDataset data_in, NodeSet nodes_in, DistanceMatrix distances_in)
    : data(std::move(data_in)), nodes(std::move(nodes_in)), distances(std::move(distances_in)) {
  if (data.dim() != nodes.dim()) {
    throw DimensionMismatch("training features have dimension " + std::to_string(data.dim()) +
                            " but node features have dimension " + std::to_string(nodes.dim()));
  }
  if (nodes.size() != distances.size()) {
    throw DimensionMismatch("node set has " + std::to_string(nodes.size()) +
                            " nodes but distance matrix has " + std::to_string(distances.size()));
  }
}

NodeWeights RouteWeights(const ModelParams& lambda, const NodeSet& nodes, CostModel model) {
  return model == CostModel::kCost1 ? FailureProbabilities(lambda, nodes)
                                    : Cost2SurrogateWeights(lambda, nodes);
}

double TraversalCost(const ModelParams& lambda, const Route& route, const MltrpProblem& problem,
                     CostModel model) {
  return Cost1(route, RouteWeights(lambda, problem.nodes, model), problem.distances);
}

double Obj(const ModelParams& lambda, const Route& route, const MltrpProblem& problem,
           const MltrpConfig& config) {
  const double training = TrainingError(lambda, problem.data, config.c2);
  if (config.c1 == 0.0) return training;
  return training + config.c1 * TraversalCost(lambda, route, problem, config.cost_model);
}

Eigen::VectorXd ObjGradient(const ModelParams& lambda, const Route& route,
                            const MltrpProblem& problem, const MltrpConfig& config) {
  Eigen::VectorXd grad = TrainingGradient(lambda, problem.data, config.c2);
  if (config.c1 == 0.0) return grad;
  const Eigen::VectorXd latency = Latency(route, problem.distances);
  const Eigen::VectorXd scores = Scores(lambda, problem.nodes.features());
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    const double p = Sigmoid(scores[i]);
    // d/dz sigmoid = p (1 - p); d/dz softplus = sigmoid
    const double slope = config.cost_model == CostModel::kCost1 ? p * (1.0 - p) : p;
    grad += (config.c1 * latency[i] * slope) * problem.nodes.features().row(i).transpose();
  }
  return grad;
}

SimultaneousValue SimultaneousObjective(const ModelParams& lambda, const MltrpProblem& problem,
                                        const MltrpConfig& config) {
  SimultaneousValue out;
  out.training_error = TrainingError(lambda, problem.data, config.c2);
  out.inner = SolveWeightedTrpDp(RouteWeights(lambda, problem.nodes, config.cost_model), problem.distances);
  out.value = out.training_error + config.c1 * out.inner.cost;
  return out;
}

MltrpSolution SequentialPipeline(const MltrpProblem& problem, const MltrpConfig& config) {
  config.Validate();
  const FitResult fit = FitLogistic(problem.data, config.TrainerConfig());
  MltrpSolution solution;
  solution.method = Method::kSequential;
  solution.lambda = fit.lambda;
  solution.route =
      SolveWeightedTrpDp(RouteWeights(fit.lambda, problem.nodes, config.cost_model), problem.distances).route;
  solution.iterations = fit.iterations;
  solution.lambda_solves = 1;
  solution.route_solves = 1;
  solution.converged = fit.converged;
  Finalize(solution, problem, config);
  solution.trace = {solution.combined_objective};
  return solution;
}

MltrpSolution NelderMead(const MltrpProblem& problem, const MltrpConfig& config,
                         std::optional<ModelParams> lambda0) {
  config.Validate();
  const NelderMeadOptions& nm = config.nm;
  const ModelParams start = DefaultStart(problem, config, std::move(lambda0));
  const Eigen::Index dim = start.size();

  MltrpSolution solution;
  solution.method = Method::kNelderMead;
  auto evaluate = [&](const Eigen::VectorXd& lambda) {
    ++solution.evaluations;
    ++solution.route_solves;
    const double value = SimultaneousObjective(lambda, problem, config).value;
    if (!std::isfinite(value)) throw SolverError("non-finite objective at vertex " + FormatVector(lambda));
    return value;
  };

  const double offset = nm.initial_scale * std::max(1.0, start.lpNorm<Eigen::Infinity>());
  std::vector<Eigen::VectorXd> vertex(dim + 1, start);
  for (Eigen::Index k = 0; k < dim; ++k) vertex[k + 1][k] += offset;
  std::vector<double> value(dim + 1);
  for (std::size_t k = 0; k < vertex.size(); ++k) value[k] = evaluate(vertex[k]);

  std::vector<std::size_t> rank(vertex.size());
  for (;;) {
    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
    const std::size_t best = rank.front(), worst = rank.back(), second_worst = rank[rank.size() - 2];
    solution.trace.push_back(value[best]);

    double diameter = 0.0;
    for (const auto& v : vertex) diameter = std::max(diameter, (v - vertex[best]).norm());
    if (diameter < nm.diameter_tol) {
      solution.converged = true;
      break;
    }
    if (solution.evaluations >= nm.max_evaluations) break;
    ++solution.iterations;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (std::size_t k = 0; k < vertex.size(); ++k) {
      if (k != worst) centroid += vertex[k];
    }
    centroid /= static_cast<double>(dim);

    const Eigen::VectorXd reflected = centroid + nm.reflection * (centroid - vertex[worst]);
    const double f_reflected = evaluate(reflected);
    if (f_reflected < value[best]) {
      const Eigen::VectorXd expanded = centroid + nm.expansion * (reflected - centroid);
      const double f_expanded = evaluate(expanded);
      if (f_expanded < f_reflected) {
        vertex[worst] = expanded;
        value[worst] = f_expanded;
      } else {
        vertex[worst] = reflected;
        value[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < value[second_worst]) {
      vertex[worst] = reflected;
      value[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < value[worst];
    const Eigen::VectorXd contracted = outside ? Eigen::VectorXd(centroid + nm.contraction * (reflected - centroid))
                                               : Eigen::VectorXd(centroid + nm.contraction * (vertex[worst] - centroid));
    const double f_contracted = evaluate(contracted);
    if (outside ? f_contracted <= f_reflected : f_contracted < value[worst]) {
      vertex[worst] = contracted;
      value[worst] = f_contracted;
      continue;
    }
    for (std::size_t k = 0; k < vertex.size(); ++k) {
      if (k == best) continue;
      vertex[k] = vertex[best] + nm.shrink * (vertex[k] - vertex[best]);
      value[k] = evaluate(vertex[k]);
    }
  }

  solution.lambda = vertex[rank.front()];
  solution.route = SimultaneousObjective(solution.lambda, problem, config).inner.route;
  Finalize(solution, problem, config);
  return solution;
}

MltrpSolution AlternatingMinimization(const MltrpProblem& problem, const MltrpConfig& config,
                                      std::optional<ModelParams> lambda0) {
  config.Validate();
  MltrpSolution solution;
  solution.method = Method::kAlternating;
  ModelParams lambda = DefaultStart(problem, config, std::move(lambda0));
  TrainConfig inner = config.am.inner;
  inner.c2 = config.c2;

  std::optional<Route> previous;
  for (int t = 1; t <= config.am.iterations; ++t) {
    const Route route =
        SolveWeightedTrpDp(RouteWeights(lambda, problem.nodes, config.cost_model), problem.distances).route;
    ++solution.route_solves;
    if (previous && route == *previous) {
      solution.converged = true;
      break;
    }
    DescentResult step;
    try {
      step = MinimizeGradientDescent(
          [&](const Eigen::VectorXd& x) { return Obj(x, route, problem, config); },
          [&](const Eigen::VectorXd& x) { return ObjGradient(x, route, problem, config); }, lambda, inner);
    } catch (const SolverError& e) {
      throw SolverError(std::string("inner trainer diverged at iteration ") + std::to_string(t) + ": " + e.what());
    }
    ++solution.lambda_solves;
    ++solution.iterations;
    lambda = std::move(step.x);
    solution.trace.push_back(step.value);
    previous = route;
  }

  // Report the route that is optimal for the final lambda; it can only lower Obj.
  solution.lambda = lambda;
  solution.route =
      SolveWeightedTrpDp(RouteWeights(lambda, problem.nodes, config.cost_model), problem.distances).route;
  Finalize(solution, problem, config);
  return solution;
}

MltrpSolution Solve(const MltrpProblem& problem, const MltrpConfig& config, Method method,
                    std::optional<ModelParams> lambda0) {
  switch (method) {
    case Method::kSequential: return SequentialPipeline(problem, config);
    case Method::kNelderMead: return NelderMead(problem, config, std::move(lambda0));
    case Method::kAlternating: return AlternatingMinimization(problem, config, std::move(lambda0));
  }
  throw ValidationError("unknown method");
}

std::optional<double> ModelAuc(const ModelParams& lambda, const LabeledDataset& data) {
  const Eigen::VectorXd& labels = data.labels();
  const bool has_pos = (labels.array() == 1.0).any();
  const bool has_neg = (labels.array() == -1.0).any();
  if (!has_pos || !has_neg) return std::nullopt;
  const Eigen::VectorXd scores = Scores(lambda, data.features());
  return Auc(std::span<const double>(scores.data(), scores.size()),
             std::span<const double>(labels.data(), labels.size()));
}

std::vector<SweepRow> C1Sweep(const MltrpProblem& problem, const std::optional<LabeledDataset>& test,
                              const MltrpConfig& base, Method method, const std::vector<double>& c1_grid) {
  if (c1_grid.empty()) throw ValidationError("C1 grid is empty");
  base.Validate();
  if (test && test->dim() != problem.data.dim()) throw DimensionMismatch("test features have the wrong dimension");
  const ModelParams start = FitLogistic(problem.data, base.TrainerConfig()).lambda;
  std::vector<SweepRow> rows;
  for (double c1 : c1_grid) {
    MltrpConfig config = base;
    config.c1 = c1;
    const MltrpSolution solution = Solve(problem, config, method, start);
    SweepRow row;
    row.c1 = c1;
    row.train_auc = ModelAuc(solution.lambda, problem.data).value_or(std::nan(""));
    if (test) row.test_auc = ModelAuc(solution.lambda, *test);
    row.traversal_cost = solution.traversal_cost;
    row.train_loss = solution.training_error;
    row.route = solution.route;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string SweepCsv(const std::vector<SweepRow>& rows) {
  std::string out = "C1,train_auc,test_auc,traversal_cost,train_loss,route\n";
  for (const SweepRow& row : rows) {
    out += Number(row.c1) + ",";
    out += (std::isnan(row.train_auc) ? "" : Number(row.train_auc)) + ",";
    out += (row.test_auc ? Number(*row.test_auc) : "") + ",";
    out += Number(row.traversal_cost) + "," + Number(row.train_loss) + "," + row.route.ToString() + "\n";
  }
  return out;
}

std::size_t LambdaGrid::Argmin(double c1) const {
  std::size_t best = 0;
  double best_value = training_error[0] + c1 * traversal_cost[0];
  for (std::size_t k = 1; k < points.size(); ++k) {
    const double v = training_error[k] + c1 * traversal_cost[k];
    if (v < best_value) {
      best_value = v;
      best = k;
    }
  }
  return best;
}

LambdaGrid EvaluateLambdaGrid(const MltrpProblem& problem, const MltrpConfig& config, double lo,
                              double hi, double step) {
  if (problem.data.dim() != 2) throw DimensionMismatch("lambda grid search needs d = 2");
  if (!(step > 0.0) || !(hi >= lo)) throw ValidationError("invalid lambda grid");
  const int count = static_cast<int>(std::llround((hi - lo) / step)) + 1;
  LambdaGrid grid;
  for (int a = 0; a < count; ++a) {
    for (int b = 0; b < count; ++b) {
      const Eigen::Vector2d lambda(lo + a * step, lo + b * step);
      grid.points.push_back(lambda);
      grid.training_error.push_back(TrainingError(lambda, problem.data, config.c2));
      grid.traversal_cost.push_back(
          SolveWeightedTrpDp(RouteWeights(lambda, problem.nodes, config.cost_model), problem.distances).cost);
    }
  }
  return grid;
}

}  // namespace mltrp
