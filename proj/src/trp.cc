#include "mltrp/trp.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "mltrp/core.h"

namespace mltrp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckWeights(const NodeWeights& weights, const DistanceMatrix& distances) {
  if (weights.size() != distances.size()) {
    throw DimensionMismatch("weights have " + std::to_string(weights.size()) + " entries for " +
                            std::to_string(distances.size()) + " nodes");
  }
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
      throw ValidationError("node weight " + std::to_string(i + 1) + " must be finite and nonnegative");
    }
  }
}

}  // namespace

std::string ToString(TrpSolver solver) {
  return solver == TrpSolver::kDp ? "dp" : "brute_force";
}

double TieTolerance(double cost) { return 1e-12 * std::max(1.0, std::abs(cost)); }

TrpSolution SolveWeightedTrpDp(const NodeWeights& weights, const DistanceMatrix& distances) {
  CheckWeights(weights, distances);
  const int n = static_cast<int>(distances.size());
  if (n > kMaxDpNodes) {
    throw ValidationError("DP solver supports at most " + std::to_string(kMaxDpNodes) + " nodes, got " +
                          std::to_string(n));
  }
  // Subsets of the non-depot nodes 1..n-1; node k is bit k-1. Position j in
  // the table is the current node k = j + 1.
  const int others = n - 1;
  const std::uint32_t full = (1u << others) - 1;
  const std::size_t num_masks = std::size_t{1} << others;

  std::vector<double> dropped(num_masks, 0.0);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int low = std::countr_zero(mask);
    dropped[mask] = dropped[mask & (mask - 1)] + weights[low + 1];
  }
  const double total = weights.sum();

  // cost_to_go[mask * others + j]: cheapest completion after visiting `mask`
  // and standing at node j + 1 (which is in mask).
  std::vector<double> cost_to_go(num_masks * others, kInf);
  std::int64_t expanded = 0;
  for (int j = 0; j < others; ++j) {
    cost_to_go[static_cast<std::size_t>(full) * others + j] = distances(j + 1, 0) * weights[0];
  }
  for (std::uint32_t mask = full; mask-- > 1;) {
    const double flow = total - dropped[mask];
    for (int j = 0; j < others; ++j) {
      if (!(mask >> j & 1u)) continue;
      ++expanded;
      double best = kInf;
      for (int k = 0; k < others; ++k) {
        if (mask >> k & 1u) continue;
        const double c = distances(j + 1, k + 1) * flow +
                         cost_to_go[static_cast<std::size_t>(mask | 1u << k) * others + k];
        best = std::min(best, c);
      }
      cost_to_go[static_cast<std::size_t>(mask) * others + j] = best;
    }
  }
  double optimum = kInf;
  for (int k = 0; k < others; ++k) {
    optimum = std::min(optimum, distances(0, k + 1) * total + cost_to_go[(std::size_t{1} << k) * others + k]);
  }
  ++expanded;

  // Forward pass: smallest next node whose completion stays within tolerance.
  std::vector<int> order{0};
  std::uint32_t mask = 0;
  double remaining = optimum;
  int current = 0;
  while (static_cast<int>(order.size()) < n) {
    const double flow = total - dropped[mask];
    for (int k = 0; k < others; ++k) {
      if (mask >> k & 1u) continue;
      const std::uint32_t next = mask | 1u << k;
      const double tail = cost_to_go[static_cast<std::size_t>(next) * others + k];
      const double c = distances(current, k + 1) * flow + tail;
      if (c <= remaining + TieTolerance(remaining)) {
        order.push_back(k + 1);
        mask = next;
        current = k + 1;
        remaining = tail;
        break;
      }
    }
  }

  TrpSolution solution;
  solution.route = Route(std::move(order));
  solution.cost = Cost1(solution.route, weights, distances);
  solution.solver = TrpSolver::kDp;
  solution.nodes_expanded = expanded;
  return solution;
}

TrpSolution SolveWeightedTrpBruteForce(const NodeWeights& weights, const DistanceMatrix& distances) {
  CheckWeights(weights, distances);
  const int n = static_cast<int>(distances.size());
  if (n > kMaxBruteForceNodes) {
    throw ValidationError("brute force supports at most " + std::to_string(kMaxBruteForceNodes) +
                          " nodes, got " + std::to_string(n));
  }
  std::vector<int> tail(n - 1);
  std::iota(tail.begin(), tail.end(), 1);
  std::vector<double> costs;
  std::vector<int> order(n);
  order[0] = 0;
  // Lexicographic enumeration; costs[r] belongs to the r-th permutation.
  do {
    std::copy(tail.begin(), tail.end(), order.begin() + 1);
    costs.push_back(Cost1(Route(order), weights, distances));
  } while (std::next_permutation(tail.begin(), tail.end()));

  const double optimum = *std::min_element(costs.begin(), costs.end());
  std::iota(tail.begin(), tail.end(), 1);
  std::size_t index = 0;
  while (costs[index] > optimum + TieTolerance(optimum)) {
    std::next_permutation(tail.begin(), tail.end());
    ++index;
  }
  std::copy(tail.begin(), tail.end(), order.begin() + 1);

  TrpSolution solution;
  solution.route = Route(order);
  solution.cost = costs[index];
  solution.solver = TrpSolver::kBruteForce;
  solution.nodes_expanded = static_cast<std::int64_t>(costs.size());
  return solution;
}

Route NaiveRoute(const NodeWeights& weights) {
  const int n = static_cast<int>(weights.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin() + 1, order.end(), [&](int a, int b) { return weights[a] > weights[b]; });
  return Route(std::move(order));
}

double ShortestTourLength(const DistanceMatrix& distances) {
  const int n = static_cast<int>(distances.size());
  if (n > kMaxTourNodes) {
    throw ValidationError("exact tour length supports at most " + std::to_string(kMaxTourNodes) +
                          " nodes, got " + std::to_string(n));
  }
  const int others = n - 1;
  const std::uint32_t full = (1u << others) - 1;
  // path[mask * others + j]: shortest path from the depot through `mask` ending at j + 1.
  std::vector<double> path((std::size_t{1} << others) * others, kInf);
  for (int j = 0; j < others; ++j) path[(std::size_t{1} << j) * others + j] = distances(0, j + 1);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    for (int j = 0; j < others; ++j) {
      const double here = path[static_cast<std::size_t>(mask) * others + j];
      if (!(mask >> j & 1u) || here == kInf) continue;
      for (int k = 0; k < others; ++k) {
        if (mask >> k & 1u) continue;
        double& slot = path[static_cast<std::size_t>(mask | 1u << k) * others + k];
        slot = std::min(slot, here + distances(j + 1, k + 1));
      }
    }
  }
  double best = kInf;
  for (int j = 0; j < others; ++j) {
    best = std::min(best, path[static_cast<std::size_t>(full) * others + j] + distances(j + 1, 0));
  }
  return best;
}

}  // namespace mltrp
