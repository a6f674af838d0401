#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "mltrp/types.h"

namespace mltrp {

struct BoundInputs {
  double weight_norm_cap = 1.0;       ///< M1: bound on ||lambda||_2
  double feature_norm_cap = 1.0;      ///< M2: bound on ||x||_2
  double traversal_cost_cap = 1.0;    ///< Cg
  double epsilon = 0.1;
  std::int64_t sample_size = 1;       ///< m
  NodeSet nodes;
  DistanceMatrix distances;

  int dim() const { return static_cast<int>(nodes.dim()); }
  /// Checks the scalar ranges and that every node feature lies inside the M2 ball.
  void Validate() const;
};

/// Entry 0 is the shortest closed tour; entry i > 0 is the shortest path from
/// the depot to node i through any intermediate nodes.
std::vector<double> ShortestDistances(const DistanceMatrix& distances);

/// Tangent line m1 * z + m0 that stays below the sigmoid on [-r, r], r = M1 * M2.
struct SigmoidLowerLine {
  double slope = 0.0;
  double intercept = 0.0;
};

SigmoidLowerLine LowerLine(double radius);

struct CVector {
  SigmoidLowerLine line;
  std::vector<double> shortest;
  Eigen::VectorXd c_tilde;
  double c_tilde0 = 0.0;
  Eigen::VectorXd c;
};

/// Throws ValidationError when Cg <= c_tilde0: the half-space would flip.
CVector ComputeCVector(const BoundInputs& inputs);

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double RegIncBeta(double x, double a, double b);

/// Fraction of the radius-r ball in dimension `dim` lying on the centre side of
/// a hyperplane at distance `offset` from the centre. 1 when offset >= r.
double BallFractionBelow(int dim, double offset, double radius);

struct BoundReport {
  SigmoidLowerLine line;
  std::vector<double> shortest;
  Eigen::VectorXd c_tilde;
  double c_tilde0 = 0.0;
  Eigen::VectorXd c;
  double c_norm_inv = 0.0;  ///< +inf when c = 0
  double z_prime = 0.0;
  double r_prime = 0.0;
  double alpha = 1.0;
  double covering_factor = 0.0;     ///< (32 M1 M2 / eps + 1)^d
  double concentration_factor = 0.0;  ///< exp(-m eps^2 / (512 (M1 M2)^2))
  double bound = 0.0;
  double log_bound = 0.0;
};

/// Evaluates alpha from the c vector and the shifted radii.
double Alpha(const BoundInputs& inputs, const Eigen::VectorXd& c);

/// 4 alpha (32 M1 M2 / eps + 1)^d exp(-m eps^2 / (512 (M1 M2)^2)).
BoundReport GeneralizationBound(const BoundInputs& inputs);

}  // namespace mltrp
