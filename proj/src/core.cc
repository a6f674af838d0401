#include "mltrp/core.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace mltrp {
namespace {

void CheckBeta(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw ValidationError("beta must lie in [0, 1], got " + std::to_string(beta));
  }
}

void CheckWeights(const NodeWeights& weights, const DistanceMatrix& distances) {
  if (weights.size() != distances.size()) {
    throw DimensionMismatch("weights have " + std::to_string(weights.size()) +
                            " entries for " + std::to_string(distances.size()) + " nodes");
  }
}

void CheckNodes(const NodeSet& nodes, const DistanceMatrix& distances) {
  if (nodes.size() != distances.size()) {
    throw DimensionMismatch("node set has " + std::to_string(nodes.size()) +
                            " nodes but distance matrix has " + std::to_string(distances.size()));
  }
}

}  // namespace

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double Softplus(double z) {
  if (std::isinf(z)) return z > 0 ? z : 0.0;
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

Eigen::VectorXd Scores(const ModelParams& lambda, const Eigen::MatrixXd& features) {
  if (lambda.size() != features.cols()) {
    throw DimensionMismatch("model has dimension " + std::to_string(lambda.size()) +
                            " but features have dimension " + std::to_string(features.cols()));
  }
  return features * lambda;
}

Eigen::VectorXd Latency(const Route& route, const DistanceMatrix& distances) {
  const int n = static_cast<int>(distances.size());
  CheckRouteSize(route, n);
  Eigen::VectorXd latency(n);
  double elapsed = 0.0;
  for (int k = 1; k < n; ++k) {
    elapsed += distances(route[k - 1], route[k]);
    latency[route[k]] = elapsed;
  }
  latency[route[0]] = elapsed + distances(route[n - 1], route[0]);
  return latency;
}

double Cost1(const Route& route, const NodeWeights& weights, const DistanceMatrix& distances) {
  CheckWeights(weights, distances);
  const Eigen::VectorXd latency = Latency(route, distances);
  double total = 0.0;
  for (Eigen::Index i = 0; i < latency.size(); ++i) total += weights[i] * latency[i];
  return total;
}

double Cost1General(const Route& route, const NodeWeights& weights,
                    const DistanceMatrix& distances, double beta) {
  CheckBeta(beta);
  CheckWeights(weights, distances);
  const Eigen::VectorXd latency = Latency(route, distances);
  const double tour = latency[route[0]];
  double total = 0.0;
  for (Eigen::Index i = 0; i < latency.size(); ++i) {
    total += beta * (tour - latency[i]) * weights[i] + latency[i] * weights[i];
  }
  return total;
}

double FirstFailureBefore(double score, double latency) {
  if (latency == 0.0) return 0.0;
  // (1 + e^f)^(-L) = exp(-L * softplus(f))
  return -std::expm1(-latency * Softplus(score));
}

double Cost2Exact(const Route& route, const ModelParams& lambda, const NodeSet& nodes,
                  const DistanceMatrix& distances) {
  CheckNodes(nodes, distances);
  const Eigen::VectorXd scores = Scores(lambda, nodes.features());
  const Eigen::VectorXd latency = Latency(route, distances);
  double total = 0.0;
  for (Eigen::Index i = 0; i < latency.size(); ++i) total += FirstFailureBefore(scores[i], latency[i]);
  return total;
}

double Cost2General(const Route& route, const ModelParams& lambda, const NodeSet& nodes,
                    const DistanceMatrix& distances, double beta) {
  CheckBeta(beta);
  CheckNodes(nodes, distances);
  const Eigen::VectorXd scores = Scores(lambda, nodes.features());
  const Eigen::VectorXd latency = Latency(route, distances);
  double total = 0.0;
  for (Eigen::Index i = 0; i < latency.size(); ++i) {
    const double before = FirstFailureBefore(scores[i], latency[i]);
    const double after = latency[i] == 0.0 ? 1.0 : std::exp(-latency[i] * Softplus(scores[i]));
    total += before + beta * after;
  }
  return total;
}

NodeWeights Cost2SurrogateWeights(const ModelParams& lambda, const NodeSet& nodes) {
  return Scores(lambda, nodes.features()).unaryExpr([](double z) { return Softplus(z); });
}

NodeWeights FailureProbabilities(const ModelParams& lambda, const NodeSet& nodes) {
  return Scores(lambda, nodes.features()).unaryExpr([](double z) { return Sigmoid(z); });
}

double StandardTrpCost(const Route& route, const DistanceMatrix& distances) {
  const int n = static_cast<int>(distances.size());
  CheckRouteSize(route, n);
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    const int next = route[(k + 1) % n];
    total += distances(route[k], next) * static_cast<double>(n - k);
  }
  return total;
}

}  // namespace mltrp
