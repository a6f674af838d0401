#include "mltrp/commands.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "mltrp/bound.h"
#include "mltrp/core.h"
#include "mltrp/io.h"
#include "mltrp/learn.h"
#include "mltrp/milp.h"
#include "test_util.h"

namespace mltrp {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::AllRoutes;
using testing::Rng;

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mltrp_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

json ReadJson(const fs::path& path) { return json::parse(ReadFile(path)); }

// Writes a small problem to `dir` and returns a config pointing at it.
RunConfig WriteProblem(const fs::path& dir, const LabeledDataset& train, const NodeSet& nodes,
                       const DistanceMatrix& distances) {
  WriteFileAtomic(dir / "train.csv", LabeledCsv(train));
  WriteFileAtomic(dir / "nodes.csv", NodesCsv(nodes));
  WriteFileAtomic(dir / "distances.csv", DistancesCsv(distances));
  RunConfig c;
  c.train = dir / "train.csv";
  c.nodes = dir / "nodes.csv";
  c.distances = dir / "distances.csv";
  c.out_dir = dir / "out";
  return c;
}

RunConfig SeededProblem(const fs::path& dir, std::uint64_t seed, int num_nodes, int dim = 2) {
  Rng rng(seed);
  const LabeledDataset train = testing::Blobs(rng, 30, dim);
  const NodeSet nodes(testing::RandomMatrix(rng, num_nodes, dim, -2.0, 2.0));
  return WriteProblem(dir, train, nodes, testing::RandomDistances(rng, num_nodes, 0.5, 10.0));
}

int RunCli(const std::string& args) {
  const std::string cmd = std::string(MLTRP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(TrainCommandTest, SeparablePairGrowsWeights) {
  const fs::path dir = TempDir("train_pair");
  WriteFileAtomic(dir / "train.csv", "f1,label\n1,1\n-1,-1\n");
  RunConfig c;
  c.train = dir / "train.csv";
  c.out_dir = dir;
  c.c2 = 0.1;
  const json out = ReadJson(RunCommand("train", c).at(0));
  // Optimum of 2 ln(1 + e^{-l}) + 0.1 l^2 solves l = 10 sigmoid(-l).
  const double l = out["lambda"][0].get<double>();
  EXPECT_NEAR(l, 10.0 * Sigmoid(-l), 1e-6);
  EXPECT_GT(l, 0.0);
  EXPECT_EQ(out["train_auc"].get<double>(), 1.0);
}

TEST(TrainCommandTest, LossMatchesLibrary) {
  const fs::path dir = TempDir("train_blobs");
  Rng rng(120);
  const LabeledDataset data = testing::Blobs(rng, 40, 3);
  WriteFileAtomic(dir / "train.csv", LabeledCsv(data));
  RunConfig c;
  c.train = dir / "train.csv";
  c.out_dir = dir;
  c.c2 = 0.5;
  const json out = ReadJson(RunCommand("train", c).at(0));
  Eigen::VectorXd lambda(3);
  for (int j = 0; j < 3; ++j) lambda[j] = out["lambda"][j].get<double>();
  EXPECT_NEAR(out["loss"].get<double>(), TrainingError(lambda, data, 0.5), 1e-12);
  EXPECT_LT(TrainingGradient(lambda, data, 0.5).norm(), 1e-6);
}

TEST(TrainCommandTest, DuplicateHeaderIsValidationError) {
  const fs::path dir = TempDir("train_dup");
  WriteFileAtomic(dir / "train.csv", "f1,f1,label\n1,2,1\n");
  RunConfig c;
  c.train = dir / "train.csv";
  c.out_dir = dir;
  EXPECT_THROW(RunCommand("train", c), ValidationError);
}

TEST(RouteCommandTest, TwoNodesHaveOneRoute) {
  const fs::path dir = TempDir("route_two");
  RunConfig c = SeededProblem(dir, 121, 2);
  const json out = ReadJson(RunCommand("route", c).at(0));
  EXPECT_EQ(out["route"].get<std::string>(), "1-2-1");
}

TEST(RouteCommandTest, EqualProbabilitiesReduceToStandardTrp) {
  const fs::path dir = TempDir("route_equal");
  Rng rng(122);
  const DistanceMatrix d = testing::RandomDistances(rng, 6, 0.5, 10.0);
  RunConfig c = WriteProblem(dir, testing::Blobs(rng, 20, 2), NodeSet(Eigen::MatrixXd::Zero(6, 2)), d);
  const json out = ReadJson(RunCommand("route", c).at(0));
  double best = std::numeric_limits<double>::infinity();
  for (const Route& r : AllRoutes(6)) best = std::min(best, StandardTrpCost(r, d));
  EXPECT_NEAR(out["cost1"].get<double>(), 0.5 * best, 1e-12 * best);
  EXPECT_NEAR(out["standard_trp_cost"].get<double>(), best, 1e-12 * best);
}

TEST(RouteCommandTest, NaiveRouteIsNeverCheaper) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const fs::path dir = TempDir("route_naive");
    const json out = ReadJson(RunCommand("route", SeededProblem(dir, 130 + seed, 7)).at(0));
    EXPECT_LE(out["cost1"].get<double>(), out["naive"]["cost1"].get<double>());
  }
}

TEST(RouteCommandTest, CsvListsRouteInOrder) {
  const fs::path dir = TempDir("route_csv");
  const std::vector<fs::path> written = RunCommand("route", SeededProblem(dir, 123, 5));
  ASSERT_EQ(written.size(), 2u);
  const json out = ReadJson(written[0]);
  const CsvTable csv = ParseCsv(ReadFile(written[1]), true, "route.csv");
  ASSERT_EQ(csv.values.rows(), 5);
  for (int k = 0; k < 5; ++k) EXPECT_EQ(csv.values(k, 1), out["route_nodes"][k].get<int>());
}

TEST(SimultaneousCommandTest, ZeroCouplingMatchesRouteCommand) {
  const fs::path dir = TempDir("sim_zero");
  RunConfig c = SeededProblem(dir, 124, 5);
  const json route = ReadJson(RunCommand("route", c).at(0));
  c.c1 = 0.0;
  for (Method m : {Method::kNelderMead, Method::kAlternating}) {
    c.method = m;
    const json sol = ReadJson(RunCommand("simultaneous", c).at(0));
    EXPECT_EQ(sol["route"], route["route"]) << ToString(m);
    EXPECT_NEAR(sol["training_error"].get<double>(), route["training_error"].get<double>(), 1e-4);
  }
}

TEST(SimultaneousCommandTest, SweepWritesOneRowPerGridPoint) {
  const fs::path dir = TempDir("sim_sweep");
  RunConfig c = SeededProblem(dir, 125, 4);
  c.c1 = 0.5;
  c.method = Method::kNelderMead;
  c.c1_grid = {0.25};
  const std::vector<fs::path> written = RunCommand("simultaneous", c);
  ASSERT_EQ(written.size(), 2u);
  const std::string sweep = ReadFile(written[1]);
  EXPECT_EQ(sweep.substr(0, sweep.find('\n')), "C1,train_auc,test_auc,traversal_cost,train_loss,route");
  EXPECT_EQ(std::count(sweep.begin(), sweep.end(), '\n'), 2);
  EXPECT_EQ(sweep.find("0.25,"), sweep.find('\n') + 1);
}

TEST(SimultaneousCommandTest, AlternatingTraceIsMonotone) {
  const fs::path dir = TempDir("sim_am");
  RunConfig c = SeededProblem(dir, 126, 6);
  c.c1 = 1.0;
  c.c2 = 0.1;
  c.method = Method::kAlternating;
  const json sol = ReadJson(RunCommand("simultaneous", c).at(0));
  const std::vector<double> trace = sol["trace"].get<std::vector<double>>();
  for (std::size_t t = 1; t < trace.size(); ++t) EXPECT_LE(trace[t], trace[t - 1] + 1e-7);
}

TEST(ExportMilpCommandTest, MatchesLibraryEncoding) {
  const fs::path dir = TempDir("milp");
  RunConfig c = SeededProblem(dir, 128, 4);
  c.lp_out = dir / "nested" / "m.lp";
  const fs::path path = RunCommand("export-milp", c).at(0);
  EXPECT_EQ(path, *c.lp_out);
  const LabeledDataset train = ReadLabeledCsv(*c.train);
  const ModelParams lambda = FitLogistic(train, TrainConfig{}).lambda;
  const NodeSet nodes = ReadNodesCsv(*c.nodes);
  const std::string want =
      ExportLp(BuildMilp(FailureProbabilities(lambda, nodes), ReadDistancesCsv(*c.distances)));
  EXPECT_EQ(ReadFile(path), want);
}

TEST(ExportMilpCommandTest, TwoNodeModelHasEightVariables) {
  const fs::path dir = TempDir("milp_two");
  RunConfig c = SeededProblem(dir, 129, 2);
  const std::string lp = ReadFile(RunCommand("export-milp", c).at(0));
  // Two arcs, each with a binary x_ij, a flow z_ij and a linearization pair.
  const MilpInstance milp = BuildMilp(Eigen::VectorXd::Constant(2, 0.5), ReadDistancesCsv(*c.distances));
  EXPECT_EQ(milp.variables.size(), 8u);
  EXPECT_NE(lp.find("Binaries"), std::string::npos);
}

TEST(DemoCommandTest, SixNodeRouteChangesAndCostDrops) {
  const fs::path dir = TempDir("demo_six");
  RunConfig c;
  c.out_dir = dir;
  c.demo = "six_node";
  const std::vector<fs::path> written = RunCommand("demo", c);
  const json summary = ReadJson(dir / "six_node" / "summary.json");
  EXPECT_TRUE(summary["route_changed"].get<bool>());
  EXPECT_LT(summary["simultaneous"]["traversal_cost"].get<double>(),
            summary["sequential"]["traversal_cost"].get<double>());
  EXPECT_LT(summary["cost1_change_percent"].get<double>(), 0.0);
  EXPECT_EQ(summary["max_shift_node"].get<int>(), 6);
  for (const char* name : {"train.csv", "test.csv", "nodes.csv", "positions.csv", "distances.csv"}) {
    EXPECT_TRUE(fs::exists(dir / "six_node" / name)) << name;
  }
}

TEST(DemoCommandTest, ZeroCouplingKeepsSequentialRoute) {
  const fs::path dir = TempDir("demo_four");
  RunConfig c;
  c.out_dir = dir;
  c.demo = "four_node";
  c.c1 = 0.0;
  RunCommand("demo", c);
  const json summary = ReadJson(dir / "four_node" / "summary.json");
  EXPECT_FALSE(summary["route_changed"].get<bool>());
  EXPECT_EQ(summary["simultaneous"]["route"], summary["sequential"]["route"]);
}

TEST(DemoCommandTest, UnknownDemoIsValidationError) {
  RunConfig c;
  c.out_dir = TempDir("demo_bad");
  c.demo = "seven_node";
  EXPECT_THROW(RunCommand("demo", c), ValidationError);
}

TEST(SimulateCommandTest, EchoesSettingsAndAgreesWithAnalytic) {
  const fs::path dir = TempDir("simulate");
  RunConfig c = SeededProblem(dir, 131, 4);
  c.trials = 20000;
  c.seed = 7;
  c.route = "1-3-2-4-1";
  const json out = ReadJson(RunCommand("simulate", c).at(0));
  EXPECT_EQ(out["trials"].get<std::int64_t>(), 20000);
  EXPECT_EQ(out["seed"].get<std::uint64_t>(), 7u);
  EXPECT_EQ(out["route"].get<std::string>(), "1-3-2-4-1");
  EXPECT_LE(std::abs(out["z_score"].get<double>()), 5.0);
}

TEST(SimulateCommandTest, BadRouteIsValidationError) {
  const fs::path dir = TempDir("simulate_bad");
  RunConfig c = SeededProblem(dir, 132, 4);
  c.route = "1-2-2-1";
  EXPECT_THROW(RunCommand("simulate", c), ValidationError);
  c.route = "1-2-3-1";
  EXPECT_THROW(RunCommand("simulate", c), ValidationError);
  c.route = std::nullopt;
  c.trials = 0;
  EXPECT_THROW(RunCommand("simulate", c), ValidationError);
}

TEST(BoundCommandTest, MatchesLibraryReport) {
  const fs::path dir = TempDir("bound");
  RunConfig c = SeededProblem(dir, 133, 4);
  c.weight_norm_cap = 1.0;
  c.feature_norm_cap = 3.0;
  BoundInputs in;
  in.nodes = ReadNodesCsv(*c.nodes);
  in.distances = ReadDistancesCsv(*c.distances);
  in.weight_norm_cap = 1.0;
  in.feature_norm_cap = 3.0;
  in.sample_size = 30;
  double total = 0.0;
  for (double v : ShortestDistances(in.distances)) total += v;
  in.traversal_cost_cap = total;
  const double floor = ComputeCVector(in).c_tilde0;
  in.traversal_cost_cap = 0.5 * (floor + total);
  c.traversal_cost_cap = in.traversal_cost_cap;
  const json out = ReadJson(RunCommand("bound", c).at(0));
  const BoundReport want = GeneralizationBound(in);
  EXPECT_EQ(out["m"].get<std::int64_t>(), 30);
  EXPECT_EQ(out["alpha"].get<double>(), want.alpha);
  EXPECT_EQ(out["bound"].get<double>(), want.bound);
  EXPECT_EQ(out["c_tilde0"].get<double>(), want.c_tilde0);
}

TEST(BoundCommandTest, RejectsMissingOrInfeasibleCap) {
  const fs::path dir = TempDir("bound_bad");
  RunConfig c = SeededProblem(dir, 134, 4);
  EXPECT_THROW(RunCommand("bound", c), ValidationError);
  c.traversal_cost_cap = 1e9;
  EXPECT_THROW(RunCommand("bound", c), ValidationError);
  c.traversal_cost_cap = 0.0;
  EXPECT_THROW(RunCommand("bound", c), ValidationError);
}

TEST(JsonTest, OutputsRoundTrip) {
  const fs::path dir = TempDir("json");
  RunConfig c = SeededProblem(dir, 135, 4);
  for (const std::string name : {"train", "route"}) {
    const fs::path path = RunCommand(name, c).at(0);
    const std::string text = ReadFile(path);
    const json parsed = json::parse(text);
    EXPECT_EQ(json::parse(parsed.dump()), parsed);
    EXPECT_EQ(text.back(), '\n');
  }
}

TEST(CliBinaryTest, ExitCodes) {
  const fs::path dir = TempDir("binary");
  RunConfig c = SeededProblem(dir, 136, 4);
  const std::string files =
      " --train " + c.train->string() + " --nodes " + c.nodes->string() + " --distances " + c.distances->string();
  EXPECT_EQ(RunCli("route" + files + " --out-dir " + (dir / "ok").string()), 0);
  EXPECT_EQ(RunCli("route --nodes " + c.nodes->string() + " --out-dir " + (dir / "x").string()), 2);
  EXPECT_EQ(RunCli("frobnicate"), 2);
  EXPECT_EQ(RunCli("route" + files + " --cost-model cost3"), 2);
  EXPECT_EQ(RunCli("route" + files + " --c1 abc"), 2);
  EXPECT_EQ(RunCli("route --train " + (dir / "absent.csv").string() + " --nodes " + c.nodes->string() +
                   " --distances " + c.distances->string()),
            2);
  EXPECT_EQ(RunCli("--help"), 0);
}

TEST(CliBinaryTest, RerunIsByteIdentical) {
  const fs::path dir = TempDir("binary_rerun");
  ASSERT_EQ(RunCli("demo four_node --seed 3 --out-dir " + (dir / "a").string()), 0);
  ASSERT_EQ(RunCli("demo four_node --seed 3 --out-dir " + (dir / "b").string()), 0);
  for (const auto& entry : fs::directory_iterator(dir / "a" / "four_node")) {
    EXPECT_EQ(ReadFile(entry.path()), ReadFile(dir / "b" / "four_node" / entry.path().filename()))
        << entry.path().filename();
  }
}

}  // namespace
}  // namespace mltrp
