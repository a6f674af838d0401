#include "mltrp/commands.h"

#include <cmath>

#include "json.hpp"
#include "mltrp/bound.h"
#include "mltrp/core.h"
#include "mltrp/demo.h"
#include "mltrp/io.h"
#include "mltrp/milp.h"
#include "mltrp/sim.h"

namespace mltrp {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

Json ToJson(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json ToJson(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

const fs::path& Require(const std::optional<fs::path>& path, const char* flag, const char* command) {
  if (!path) throw ValidationError(std::string(flag) + " is required for '" + command + "'");
  return *path;
}

fs::path Output(const RunConfig& config, const std::string& name) {
  fs::create_directories(config.out_dir);
  return config.out_dir / name;
}

fs::path WriteJson(const fs::path& path, const Json& json) {
  WriteFileAtomic(path, json.dump(2) + "\n");
  return path;
}

MltrpConfig BaseConfig(const RunConfig& config) {
  MltrpConfig out;
  out.c1 = config.c1.value_or(0.0);
  out.c2 = config.c2;
  out.cost_model = config.cost_model;
  out.Validate();
  return out;
}

MltrpProblem LoadProblem(const RunConfig& config, const char* command) {
  LabeledDataset data = ReadLabeledCsv(Require(config.train, "--train", command));
  NodeSet nodes = ReadNodesCsv(Require(config.nodes, "--nodes", command));
  DistanceMatrix distances = ReadDistancesCsv(Require(config.distances, "--distances", command));
  return MltrpProblem(std::move(data), std::move(nodes), std::move(distances));
}

std::optional<LabeledDataset> LoadTest(const RunConfig& config) {
  if (!config.test) return std::nullopt;
  return ReadLabeledCsv(*config.test);
}

// Route diagnostics shared by route, simultaneous and demo outputs.
Json RouteJson(const ModelParams& lambda, const Route& route, const MltrpProblem& problem) {
  const NodeWeights p = FailureProbabilities(lambda, problem.nodes);
  Json out;
  out["route"] = route.ToString();
  out["route_nodes"] = route.OneBased();
  out["latencies"] = ToJson(Latency(route, problem.distances));
  out["probabilities"] = ToJson(p);
  out["cost1"] = Cost1(route, p, problem.distances);
  out["cost2_exact"] = Cost2Exact(route, lambda, problem.nodes, problem.distances);
  return out;
}

Json SolutionJson(const MltrpSolution& s, const MltrpProblem& problem, const std::optional<LabeledDataset>& test) {
  Json out;
  out["method"] = ToString(s.method);
  out["lambda"] = ToJson(s.lambda);
  out["training_error"] = s.training_error;
  out["traversal_cost"] = s.traversal_cost;
  out["combined_objective"] = s.combined_objective;
  out.update(RouteJson(s.lambda, s.route, problem));
  out["train_auc"] = ToJson(ModelAuc(s.lambda, problem.data));
  out["test_auc"] = test ? ToJson(ModelAuc(s.lambda, *test)) : Json(nullptr);
  out["trace"] = s.trace;
  out["iterations"] = s.iterations;
  out["evaluations"] = s.evaluations;
  out["route_solves"] = s.route_solves;
  out["lambda_solves"] = s.lambda_solves;
  out["converged"] = s.converged;
  return out;
}

std::string RouteCsv(const ModelParams& lambda, const Route& route, const MltrpProblem& problem,
                     CostModel model) {
  const Eigen::VectorXd latency = Latency(route, problem.distances);
  const NodeWeights p = FailureProbabilities(lambda, problem.nodes);
  const NodeWeights w = RouteWeights(lambda, problem.nodes, model);
  std::string out = "position,node,latency,probability,weight";
  for (Eigen::Index j = 0; j < problem.nodes.dim(); ++j) out += ",f" + std::to_string(j + 1);
  out += '\n';
  for (int k = 0; k < route.size(); ++k) {
    const int node = route[k];
    out += std::to_string(k + 1) + ',' + std::to_string(node + 1) + ',' + FormatDouble(latency[node]) + ',' +
           FormatDouble(p[node]) + ',' + FormatDouble(w[node]);
    for (Eigen::Index j = 0; j < problem.nodes.dim(); ++j) out += ',' + FormatDouble(problem.nodes.features()(node, j));
    out += '\n';
  }
  return out;
}

}  // namespace

std::vector<fs::path> CmdTrain(const RunConfig& config) {
  const LabeledDataset data = ReadLabeledCsv(Require(config.train, "--train", "train"));
  MltrpConfig mc = BaseConfig(config);
  const FitResult fit = FitLogistic(data, mc.TrainerConfig());
  Eigen::VectorXd probabilities(data.size());
  for (Eigen::Index i = 0; i < data.size(); ++i) probabilities[i] = SigmoidProb(fit.lambda, data.features().row(i));
  Json out;
  out["command"] = "train";
  out["d"] = data.dim();
  out["m"] = data.size();
  out["c2"] = config.c2;
  out["lambda"] = ToJson(fit.lambda);
  out["loss"] = fit.loss;
  out["grad_norm"] = fit.grad_norm;
  out["iterations"] = fit.iterations;
  out["converged"] = fit.converged;
  out["train_probabilities"] = ToJson(probabilities);
  out["train_auc"] = ToJson(ModelAuc(fit.lambda, data));
  return {WriteJson(Output(config, "model.json"), out)};
}

std::vector<fs::path> CmdRoute(const RunConfig& config) {
  const MltrpProblem problem = LoadProblem(config, "route");
  const MltrpConfig mc = BaseConfig(config);
  const MltrpSolution s = SequentialPipeline(problem, mc);
  const NodeWeights weights = RouteWeights(s.lambda, problem.nodes, mc.cost_model);
  const Route naive = NaiveRoute(FailureProbabilities(s.lambda, problem.nodes));

  Json out;
  out["command"] = "route";
  out["cost_model"] = ToString(mc.cost_model);
  out["c2"] = mc.c2;
  out["lambda"] = ToJson(s.lambda);
  out["training_error"] = s.training_error;
  out["traversal_cost"] = s.traversal_cost;
  out.update(RouteJson(s.lambda, s.route, problem));
  out["weights"] = ToJson(weights);
  out["standard_trp_cost"] = StandardTrpCost(s.route, problem.distances);
  out["naive"] = RouteJson(s.lambda, naive, problem);
  return {WriteJson(Output(config, "route.json"), out),
          [&] {
            const fs::path csv = Output(config, "route.csv");
            WriteFileAtomic(csv, RouteCsv(s.lambda, s.route, problem, mc.cost_model));
            return csv;
          }()};
}

std::vector<fs::path> CmdSimultaneous(const RunConfig& config) {
  const MltrpProblem problem = LoadProblem(config, "simultaneous");
  const std::optional<LabeledDataset> test = LoadTest(config);
  const MltrpConfig mc = BaseConfig(config);
  const MltrpSolution s = Solve(problem, mc, config.method);
  Json out;
  out["command"] = "simultaneous";
  out["cost_model"] = ToString(mc.cost_model);
  out["c1"] = mc.c1;
  out["c2"] = mc.c2;
  out.update(SolutionJson(s, problem, test));
  std::vector<fs::path> written = {WriteJson(Output(config, "solution.json"), out)};
  if (!config.c1_grid.empty()) {
    const fs::path csv = Output(config, "sweep.csv");
    WriteFileAtomic(csv, SweepCsv(C1Sweep(problem, test, mc, config.method, config.c1_grid)));
    written.push_back(csv);
  }
  return written;
}

std::vector<fs::path> CmdExportMilp(const RunConfig& config) {
  const MltrpProblem problem = LoadProblem(config, "export-milp");
  const MltrpConfig mc = BaseConfig(config);
  const ModelParams lambda = FitLogistic(problem.data, mc.TrainerConfig()).lambda;
  const MilpInstance milp = BuildMilp(RouteWeights(lambda, problem.nodes, mc.cost_model), problem.distances);
  fs::path path = config.lp_out ? *config.lp_out : Output(config, "model.lp");
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  WriteFileAtomic(path, ExportLp(milp));
  return {path};
}

std::vector<fs::path> CmdDemo(const RunConfig& config) {
  const DemoKind kind = ParseDemoKind(config.demo);
  const DemoInstance demo = MakeDemo(kind, config.seed);
  RunConfig sub = config;
  sub.out_dir = config.out_dir / ToString(kind);
  std::vector<fs::path> written;
  auto write = [&](const std::string& name, const std::string& text) {
    const fs::path path = Output(sub, name);
    WriteFileAtomic(path, text);
    written.push_back(path);
  };
  write("train.csv", LabeledCsv(demo.train));
  write("test.csv", LabeledCsv(demo.test));
  write("nodes.csv", NodesCsv(demo.nodes));
  write("positions.csv", NodesCsv(NodeSet(demo.positions)));
  write("distances.csv", DistancesCsv(demo.distances));

  const MltrpProblem problem(demo.train, demo.nodes, demo.distances);
  MltrpConfig mc;
  mc.c1 = config.c1.value_or(demo.c1);
  mc.c2 = demo.c2;
  mc.cost_model = CostModel::kCost1;
  mc.Validate();
  const Method method = config.method == Method::kSequential ? Method::kNelderMead : config.method;
  const MltrpSolution seq = SequentialPipeline(problem, mc);
  const MltrpSolution sim = Solve(problem, mc, method, seq.lambda);

  const NodeWeights p_seq = FailureProbabilities(seq.lambda, demo.nodes);
  const NodeWeights p_sim = FailureProbabilities(sim.lambda, demo.nodes);
  const Eigen::VectorXd shift = (p_sim - p_seq).cwiseAbs();
  Eigen::Index max_node = 0;
  shift.maxCoeff(&max_node);
  double train_shift = 0.0;
  for (Eigen::Index i = 0; i < demo.train.size(); ++i) {
    const Eigen::VectorXd x = demo.train.features().row(i);
    train_shift = std::max(train_shift, std::fabs(SigmoidProb(sim.lambda, x) - SigmoidProb(seq.lambda, x)));
  }
  const double cost_seq = Cost1(seq.route, p_seq, demo.distances);
  const double cost_sim = Cost1(sim.route, p_sim, demo.distances);

  Json out;
  out["command"] = "demo";
  out["demo"] = ToString(kind);
  out["seed"] = config.seed;
  out["c1"] = mc.c1;
  out["c2"] = mc.c2;
  out["sequential"] = SolutionJson(seq, problem, demo.test);
  out["simultaneous"] = SolutionJson(sim, problem, demo.test);
  out["route_changed"] = seq.route != sim.route;
  out["cost1_change_percent"] = 100.0 * (cost_sim - cost_seq) / cost_seq;
  out["probability_shift"] = ToJson(shift);
  out["max_shift_node"] = max_node + 1;
  out["max_shift_share"] = shift.sum() > 0.0 ? shift[max_node] / shift.sum() : 0.0;
  out["train_probability_max_shift"] = train_shift;
  const fs::path summary = Output(sub, "summary.json");
  WriteJson(summary, out);
  written.push_back(summary);
  return written;
}

std::vector<fs::path> CmdSimulate(const RunConfig& config) {
  const MltrpProblem problem = LoadProblem(config, "simulate");
  const MltrpConfig mc = BaseConfig(config);
  const MltrpSolution seq = SequentialPipeline(problem, mc);
  const Route route = config.route ? Route::Parse(*config.route) : seq.route;
  CheckRouteSize(route, problem.distances.size());
  const SimModel model = mc.cost_model == CostModel::kCost1 ? SimModel::kCost1 : SimModel::kCost2;
  SimConfig sc;
  sc.trials = config.trials;
  sc.seed = config.seed;
  sc.steps_per_unit = config.steps_per_unit;
  const RouteSimulation r =
      SimulateRouteCost(route, FailureProbabilities(seq.lambda, problem.nodes), problem.distances, model, sc);
  Json out;
  out["command"] = "simulate";
  out["model"] = ToString(model);
  out["trials"] = sc.trials;
  out["seed"] = sc.seed;
  out["steps_per_unit"] = sc.steps_per_unit;
  out["rng"] = kSimulationRng;
  out["route"] = route.ToString();
  out["estimate"] = r.estimate.mean;
  out["std_error"] = r.estimate.std_error;
  out["analytic"] = r.analytic;
  out["analytic_continuous"] = r.analytic_continuous;
  out["floor_discrepancy"] = r.analytic_continuous - r.analytic;
  out["z_score"] = r.z_score;
  return {WriteJson(Output(config, "simulate.json"), out)};
}

std::vector<fs::path> CmdBound(const RunConfig& config) {
  BoundInputs in;
  in.nodes = ReadNodesCsv(Require(config.nodes, "--nodes", "bound"));
  in.distances = ReadDistancesCsv(Require(config.distances, "--distances", "bound"));
  std::optional<LabeledDataset> data;
  if (config.train) data = ReadLabeledCsv(*config.train);
  if (config.weight_norm_cap) {
    in.weight_norm_cap = *config.weight_norm_cap;
  } else {
    if (!data) throw ValidationError("bound needs --m1 or --train to derive the weight norm cap");
    MltrpConfig mc = BaseConfig(config);
    in.weight_norm_cap = FitLogistic(*data, mc.TrainerConfig()).lambda.norm();
  }
  if (config.feature_norm_cap) {
    in.feature_norm_cap = *config.feature_norm_cap;
  } else {
    in.feature_norm_cap = in.nodes.features().rowwise().norm().maxCoeff();
    if (data) in.feature_norm_cap = std::max(in.feature_norm_cap, data->features().rowwise().norm().maxCoeff());
  }
  if (!config.traversal_cost_cap) throw ValidationError("--cg is required for 'bound'");
  in.traversal_cost_cap = *config.traversal_cost_cap;
  in.epsilon = config.epsilon;
  if (config.sample_size) {
    in.sample_size = *config.sample_size;
  } else {
    if (!data) throw ValidationError("bound needs --m or --train to set the sample size");
    in.sample_size = data->size();
  }
  const BoundReport r = GeneralizationBound(in);
  Json out;
  out["command"] = "bound";
  out["m1"] = in.weight_norm_cap;
  out["m2"] = in.feature_norm_cap;
  out["d"] = in.dim();
  out["cg"] = in.traversal_cost_cap;
  out["epsilon"] = in.epsilon;
  out["m"] = in.sample_size;
  out["d_i"] = r.shortest;
  out["line_slope"] = r.line.slope;
  out["line_intercept"] = r.line.intercept;
  out["c_tilde"] = ToJson(r.c_tilde);
  out["c_tilde0"] = r.c_tilde0;
  out["c"] = ToJson(r.c);
  out["c_norm_inv"] = std::isfinite(r.c_norm_inv) ? Json(r.c_norm_inv) : Json(nullptr);
  out["z_prime"] = std::isfinite(r.z_prime) ? Json(r.z_prime) : Json(nullptr);
  out["r_prime"] = r.r_prime;
  out["alpha"] = r.alpha;
  out["covering_factor"] = r.covering_factor;
  out["concentration_factor"] = r.concentration_factor;
  out["bound"] = r.bound;
  out["log_bound"] = r.log_bound;
  return {WriteJson(Output(config, "bound.json"), out)};
}

std::vector<fs::path> RunCommand(const std::string& name, const RunConfig& config) {
  if (name == "train") return CmdTrain(config);
  if (name == "route") return CmdRoute(config);
  if (name == "simultaneous") return CmdSimultaneous(config);
  if (name == "export-milp") return CmdExportMilp(config);
  if (name == "demo") return CmdDemo(config);
  if (name == "simulate") return CmdSimulate(config);
  if (name == "bound") return CmdBound(config);
  throw ValidationError("unknown command '" + name + "'");
}

}  // namespace mltrp
