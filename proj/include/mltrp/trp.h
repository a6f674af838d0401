#pragma once

#include <cstdint>
#include <string>

#include "mltrp/types.h"

namespace mltrp {

enum class TrpSolver { kDp, kBruteForce };

std::string ToString(TrpSolver solver);

/// Optimal route for the weighted repairman subproblem. `cost` is recomputed
/// with Cost1 from the returned route, so two solvers that agree on the route
/// report bit-identical costs.
struct TrpSolution {
  Route route;
  double cost = 0.0;
  TrpSolver solver = TrpSolver::kDp;
  std::int64_t nodes_expanded = 0;
};

inline constexpr int kMaxDpNodes = 20;
inline constexpr int kMaxBruteForceNodes = 10;
inline constexpr int kMaxTourNodes = 18;

/// Costs within this tolerance of each other are treated as tied; ties go to
/// the lexicographically smallest route.
double TieTolerance(double cost);

/// Exact dynamic program over (visited subset, current node). The edge leaving
/// a partial route carries every weight not yet dropped, including the
/// depot's own weight, which is only dropped on the return edge.
TrpSolution SolveWeightedTrpDp(const NodeWeights& weights, const DistanceMatrix& distances);

/// Enumerates all (M-1)! routes starting at the depot.
TrpSolution SolveWeightedTrpBruteForce(const NodeWeights& weights, const DistanceMatrix& distances);

/// Depot first, then the remaining nodes by decreasing weight (ties by id).
Route NaiveRoute(const NodeWeights& weights);

/// Length of the shortest closed tour through every node (Held-Karp).
double ShortestTourLength(const DistanceMatrix& distances);

}  // namespace mltrp
