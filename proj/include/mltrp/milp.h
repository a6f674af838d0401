#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "mltrp/types.h"

namespace mltrp {

enum class RowSense { kLessEqual, kEqual };

struct LinearTerm {
  int variable = 0;
  double coefficient = 0.0;
};

struct LinearConstraint {
  std::string name;
  std::vector<LinearTerm> terms;
  RowSense sense = RowSense::kEqual;
  double rhs = 0.0;
};

struct MilpVariable {
  std::string name;
  bool binary = false;
  double lower = 0.0;
  double upper = 0.0;
};

/// Flow formulation of the weighted repairman problem. The crew leaves the
/// depot carrying the total weight and drops w_k on first reaching node k; the
/// depot's own weight rides along until the closing edge.
///
/// Variables are z_i_j (flow on edge i->j) followed by y_i_j (edge used), both
/// row-major over 1-based (i, j). Rows, in order: deg_in_j, deg_out_i, ret,
/// flow_k, link_i_j.
struct MilpInstance {
  int num_nodes = 0;
  std::vector<MilpVariable> variables;
  std::vector<double> objective;
  std::vector<LinearConstraint> constraints;
  Eigen::MatrixXd caps;  ///< r_{i,j} in z_{i,j} <= r_{i,j} y_{i,j}
  Eigen::VectorXd weights;

  int ZIndex(int i, int j) const { return i * num_nodes + j; }
  int YIndex(int i, int j) const { return num_nodes * num_nodes + i * num_nodes + j; }
};

/// Upper bound on the flow along edge (i, j), 0-based.
Eigen::MatrixXd FlowCaps(const NodeWeights& weights);

MilpInstance BuildMilp(const NodeWeights& weights, const DistanceMatrix& distances);

/// Edge indicators and flows, both M x M (0-based).
struct FlowAssignment {
  Eigen::MatrixXd y;
  Eigen::MatrixXd z;
};

/// The unique flow a route induces in the formulation.
FlowAssignment RouteToFlow(const Route& route, const NodeWeights& weights);

struct RowResidual {
  std::string name;
  double residual = 0.0;  ///< lhs - rhs; bounds report the amount outside the box
  bool violated = false;
};

struct FeasibilityReport {
  bool feasible = true;
  double objective = 0.0;
  std::vector<RowResidual> rows;

  std::vector<std::string> Violations() const;
};

inline constexpr double kFeasibilityTolerance = 1e-9;

/// Evaluates every constraint row plus variable bounds and integrality.
FeasibilityReport CheckFeasible(const MilpInstance& instance, const FlowAssignment& assignment);

/// CPLEX LP text. Byte-deterministic; numbers use 17 significant digits.
std::string ExportLp(const MilpInstance& instance);

}  // namespace mltrp
