#include "mltrp/sim.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mltrp/core.h"
#include "test_util.h"

namespace mltrp {
namespace {

using testing::IntegerDistances;
using testing::RandomMatrix;
using testing::RandomRoute;
using testing::RandomVector;
using testing::Rng;

SimConfig Cfg(std::int64_t trials, std::uint64_t seed) {
  SimConfig c;
  c.trials = trials;
  c.seed = seed;
  return c;
}

void ExpectWithin3Se(const Estimate& e, double want) {
  EXPECT_LE(std::abs(e.mean - want), 3.0 * e.std_error) << "mean " << e.mean << " want " << want << " se " << e.std_error;
}

// For indicator estimates near 0 or 1 the sample SE can collapse to zero, so
// compare against the exact binomial SE instead.
void ExpectWithin3BinomialSe(const Estimate& e, double want, std::int64_t trials) {
  const double se = std::sqrt(want * (1 - want) / trials);
  EXPECT_LE(std::abs(e.mean - want), 3.0 * se) << "mean " << e.mean << " want " << want << " se " << se;
}

TEST(ExpectedFailuresTest, ZeroProbability) {
  const Estimate e = SimulateExpectedFailures(0.0, 12.0, Cfg(1000, 1));
  EXPECT_EQ(e.mean, 0.0);
  EXPECT_EQ(e.std_error, 0.0);
}

TEST(ExpectedFailuresTest, BinomialMean) {
  ExpectWithin3Se(SimulateExpectedFailures(0.1, 10.0, Cfg(100000, 2)), 1.0);
  ExpectWithin3Se(SimulateExpectedFailures(0.37, 7.0, Cfg(100000, 3)), 0.37 * 7);
}

TEST(ExpectedFailuresTest, RejectsBadProbability) {
  EXPECT_THROW(SimulateExpectedFailures(-0.1, 3.0, Cfg(10, 0)), ValidationError);
  EXPECT_THROW(SimulateExpectedFailures(1.1, 3.0, Cfg(10, 0)), ValidationError);
  EXPECT_THROW(SimulateExpectedFailures(0.5, 3.0, Cfg(0, 0)), ValidationError);
}

TEST(FirstFailureTest, CertainFailure) {
  const Estimate e = SimulateFirstFailureBefore(1.0, 1.0, Cfg(1000, 4));
  EXPECT_EQ(e.mean, 1.0);
}

TEST(FirstFailureTest, GeometricTail) {
  ExpectWithin3Se(SimulateFirstFailureBefore(0.1, 10.0, Cfg(100000, 5)), 1.0 - std::pow(0.9, 10));
  ExpectWithin3Se(SimulateFirstFailureBefore(0.25, 4.0, Cfg(100000, 6)), 1.0 - std::pow(0.75, 4));
  EXPECT_NEAR(1.0 - std::pow(0.9, 10), 0.651322, 1e-6);
  EXPECT_NEAR(1.0 - std::pow(0.75, 4), 0.683594, 1e-6);
}

TEST(FirstFailureTest, RejectsBadProbability) {
  EXPECT_THROW(SimulateFirstFailureBefore(2.0, 3.0, Cfg(10, 0)), ValidationError);
}

TEST(SimConfigTest, FloorsLatencies) {
  SimConfig c;
  EXPECT_EQ(c.Steps(3.0), 3);
  EXPECT_EQ(c.Steps(3.999), 3);
  EXPECT_EQ(c.Steps(0.1 + 0.2 + 2.7), 3);  // representation noise below the integer
  c.steps_per_unit = 4;
  EXPECT_EQ(c.Steps(2.5), 10);
}

TEST(DeterminismTest, SameSeedSameBits) {
  const Estimate a = SimulateExpectedFailures(0.3, 9.0, Cfg(20000, 77));
  const Estimate b = SimulateExpectedFailures(0.3, 9.0, Cfg(20000, 77));
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
  const Estimate c = SimulateExpectedFailures(0.3, 9.0, Cfg(20000, 78));
  EXPECT_NE(a.mean, c.mean);
}

TEST(DeterminismTest, SubstreamIsPlatformIndependent) {
  // Reference outputs: SplitMix64 from state 0, and the 10000th draw of a
  // default-seeded mt19937_64 as fixed by the C++ standard.
  EXPECT_EQ(SplitMix64(0), 0xe220a8397b1dcdafull);
  std::mt19937_64 reference;
  reference.discard(9999);
  EXPECT_EQ(reference(), 9981545732273789042ull);
  std::mt19937_64 engine(SplitMix64(SplitMix64(0) ^ SplitMix64(~0ull)));
  const double first = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  Substream s(0, 0);
  EXPECT_EQ(s.Uniform(), first);
  Substream other(0, 1);
  EXPECT_NE(other.Uniform(), first);
}

TEST(ConvergenceTest, DoublingTrialsShrinksStdError) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Estimate a = SimulateExpectedFailures(0.2, 15.0, Cfg(40000, seed));
    const Estimate b = SimulateExpectedFailures(0.2, 15.0, Cfg(80000, seed));
    const double ratio = b.std_error / a.std_error;
    EXPECT_NEAR(ratio, 1.0 / std::sqrt(2.0), 0.1 / std::sqrt(2.0));
  }
}

TEST(RouteSimulationTest, ZeroProbabilities) {
  Rng rng(80);
  const DistanceMatrix d = IntegerDistances(rng, 4, 1, 5);
  for (SimModel model : {SimModel::kCost1, SimModel::kCost2}) {
    const RouteSimulation r = SimulateRouteCost(RandomRoute(rng, 4), Eigen::VectorXd::Zero(4), d, model, Cfg(1000, 1));
    EXPECT_EQ(r.estimate.mean, 0.0);
    EXPECT_EQ(r.analytic, 0.0);
  }
}

TEST(RouteSimulationTest, MatchesAnalyticCosts) {
  Rng rng(81);
  const NodeSet nodes(RandomMatrix(rng, 4, 2, -1.0, 1.0));
  const ModelParams lambda = RandomVector(rng, 2, -2.0, 2.0);
  const DistanceMatrix d = IntegerDistances(rng, 4, 1, 6);
  const Route route = RandomRoute(rng, 4);
  const NodeWeights p = FailureProbabilities(lambda, nodes);

  const RouteSimulation c1 = SimulateRouteCost(route, p, d, SimModel::kCost1, Cfg(100000, 5));
  EXPECT_NEAR(c1.analytic, Cost1(route, p, d), 1e-12);
  ExpectWithin3Se(c1.estimate, Cost1(route, p, d));

  const RouteSimulation c2 = SimulateRouteCost(route, p, d, SimModel::kCost2, Cfg(100000, 6));
  EXPECT_NEAR(c2.analytic, Cost2Exact(route, lambda, nodes, d), 1e-12);
  ExpectWithin3Se(c2.estimate, Cost2Exact(route, lambda, nodes, d));
}

TEST(RouteSimulationTest, PerNodeFirstFailureMatchesCost2Terms) {
  Rng rng(82);
  const NodeSet nodes(RandomMatrix(rng, 5, 3, -1.0, 1.0));
  const ModelParams lambda = RandomVector(rng, 3, -1.5, 1.5);
  const DistanceMatrix d = IntegerDistances(rng, 5, 1, 4);
  const Route route = RandomRoute(rng, 5);
  const Eigen::VectorXd l = Latency(route, d);
  const Eigen::VectorXd f = Scores(lambda, nodes.features());
  for (int i = 0; i < 5; ++i) {
    const Estimate e = SimulateFirstFailureBefore(Sigmoid(f[i]), l[i], Cfg(100000, 100 + i));
    ExpectWithin3BinomialSe(e, FirstFailureBefore(f[i], l[i]), 100000);
  }
}

TEST(RouteSimulationTest, PostVisitDrawsDoNotChangeCost1) {
  Rng rng(83);
  const Eigen::VectorXd p = RandomVector(rng, 5, 0.05, 0.6);
  const DistanceMatrix d = IntegerDistances(rng, 5, 1, 5);
  const Route route = RandomRoute(rng, 5);
  const RouteSimulation a = SimulateRouteCost(route, p, d, SimModel::kCost1, Cfg(20000, 9), false);
  const RouteSimulation b = SimulateRouteCost(route, p, d, SimModel::kCost1, Cfg(20000, 9), true);
  EXPECT_EQ(a.estimate.mean, b.estimate.mean);
  EXPECT_EQ(a.estimate.std_error, b.estimate.std_error);
}

TEST(RouteSimulationTest, ReportsFloorDiscrepancy) {
  Eigen::MatrixXd m(2, 2);
  m << 0, 2.5, 2.5, 0;
  const Eigen::VectorXd p = Eigen::VectorXd::Constant(2, 0.2);
  const RouteSimulation r = SimulateRouteCost(Route({0, 1}), p, DistanceMatrix(m), SimModel::kCost1, Cfg(100, 1));
  EXPECT_DOUBLE_EQ(r.analytic, 0.2 * 2 + 0.2 * 5);
  EXPECT_DOUBLE_EQ(r.analytic_continuous, 0.2 * 2.5 + 0.2 * 5);
}

TEST(RouteSimulationTest, RejectsBadInputs) {
  const Eigen::VectorXd p = Eigen::VectorXd::Constant(3, 1.5);
  EXPECT_THROW(SimulateRouteCost(Route({0, 1, 2}), p, testing::UnitDistances(3), SimModel::kCost1, Cfg(10, 0)),
               ValidationError);
  EXPECT_THROW(SimulateRouteCost(Route({0, 1, 2}), Eigen::VectorXd::Zero(2), testing::UnitDistances(3),
                                 SimModel::kCost1, Cfg(10, 0)),
               DimensionMismatch);
}

}  // namespace
}  // namespace mltrp
