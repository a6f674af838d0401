#pragma once

#include <Eigen/Core>

#include "mltrp/types.h"

namespace mltrp {

// Numerically stable scalar maps. Both shift by max(0, z) so that large |z|
// neither overflows nor loses the small tail.
double Sigmoid(double z);
/// ln(1 + e^z)
double Softplus(double z);

/// Visit time of every node, keyed by node id. The depot's entry is the
/// length of the full closed tour.
Eigen::VectorXd Latency(const Route& route, const DistanceMatrix& distances);

/// Sum over nodes of w_i * L(i): expected number of failures before the crew
/// arrives when w holds per-step failure probabilities.
double Cost1(const Route& route, const NodeWeights& weights, const DistanceMatrix& distances);

/// Cost 1 with a residual post-visit failure rate `beta` in [0, 1].
double Cost1General(const Route& route, const NodeWeights& weights,
                    const DistanceMatrix& distances, double beta);

/// Probability that the first failure at a node with score f precedes a visit at
/// time `latency`: 1 - (1 + e^f)^(-latency). Zero latency costs nothing.
double FirstFailureBefore(double score, double latency);

/// Sum over nodes of the first-failure-before-visit probability.
double Cost2Exact(const Route& route, const ModelParams& lambda, const NodeSet& nodes,
                  const DistanceMatrix& distances);

/// Cost 2 plus `beta` times the probability that the first failure comes after the visit.
double Cost2General(const Route& route, const ModelParams& lambda, const NodeSet& nodes,
                    const DistanceMatrix& distances, double beta);

/// Softplus weights ln(1 + e^{lambda . x_i}); routing on them with Cost1 gives
/// the log surrogate of Cost 2 (minus the constant M).
NodeWeights Cost2SurrogateWeights(const ModelParams& lambda, const NodeSet& nodes);

/// Sigmoid weights 1 / (1 + e^{-lambda . x_i}).
NodeWeights FailureProbabilities(const ModelParams& lambda, const NodeSet& nodes);

/// Unweighted repairman objective sum_k d(pi_k, pi_{k+1}) * (M + 1 - k).
double StandardTrpCost(const Route& route, const DistanceMatrix& distances);

/// Node scores lambda . x_i; throws DimensionMismatch on width mismatch.
Eigen::VectorXd Scores(const ModelParams& lambda, const Eigen::MatrixXd& features);

}  // namespace mltrp
