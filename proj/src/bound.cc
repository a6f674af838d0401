#include "mltrp/bound.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mltrp/trp.h"

namespace mltrp {
namespace {

void RequirePositive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) throw ValidationError(std::string(name) + " must be positive and finite");
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
double BetaContinuedFraction(double x, double a, double b) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  constexpr int kMaxIterations = 100000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return h;
  }
  throw SolverError("incomplete beta continued fraction did not converge");
}

}  // namespace

void BoundInputs::Validate() const {
  RequirePositive(weight_norm_cap, "weight norm cap");
  RequirePositive(feature_norm_cap, "feature norm cap");
  RequirePositive(traversal_cost_cap, "traversal cost cap");
  RequirePositive(epsilon, "epsilon");
  if (sample_size < 1) throw ValidationError("sample size must be at least 1");
  if (nodes.size() != distances.size()) throw DimensionMismatch("node count and distance matrix size differ");
  const double slack = 1e-12 * std::max(1.0, feature_norm_cap);
  for (Eigen::Index i = 0; i < nodes.features().rows(); ++i) {
    const double norm = nodes.features().row(i).norm();
    if (norm > feature_norm_cap + slack) {
      throw ValidationError("node " + std::to_string(i + 1) + " has feature norm " + std::to_string(norm) +
                            " above the feature norm cap " + std::to_string(feature_norm_cap));
    }
  }
}

std::vector<double> ShortestDistances(const DistanceMatrix& distances) {
  const Eigen::Index n = distances.size();
  if (n > kMaxTourNodes) {
    throw ValidationError("shortest tour needs at most " + std::to_string(kMaxTourNodes) + " nodes");
  }
  Eigen::MatrixXd path = distances.matrix();
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) path(i, j) = std::min(path(i, j), path(i, k) + path(k, j));
    }
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  out[0] = ShortestTourLength(distances);
  for (Eigen::Index i = 1; i < n; ++i) out[i] = path(0, i);
  return out;
}

SigmoidLowerLine LowerLine(double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw ValidationError("radius must be finite and nonnegative");
  // e^r / (1 + e^r)^2 written as s(1 - s) with s = 1 / (1 + e^r).
  const double s = 1.0 / (1.0 + std::exp(radius));
  SigmoidLowerLine line;
  line.slope = s * (1.0 - s);
  line.intercept = radius * line.slope + s;
  return line;
}

CVector ComputeCVector(const BoundInputs& inputs) {
  inputs.Validate();
  CVector out;
  out.line = LowerLine(inputs.weight_norm_cap * inputs.feature_norm_cap);
  out.shortest = ShortestDistances(inputs.distances);
  const Eigen::MatrixXd& x = inputs.nodes.features();
  out.c_tilde = Eigen::VectorXd::Zero(x.cols());
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out.c_tilde += out.shortest[i] * x.row(i).transpose();
    total += out.shortest[i];
  }
  out.c_tilde *= out.line.slope;
  out.c_tilde0 = out.line.intercept * total;
  if (inputs.traversal_cost_cap > total) {
    throw ValidationError("traversal cost cap " + std::to_string(inputs.traversal_cost_cap) +
                          " exceeds the sum of shortest distances " + std::to_string(total) +
                          "; the constraint would be vacuous");
  }
  if (inputs.traversal_cost_cap <= out.c_tilde0) {
    throw ValidationError("traversal cost cap " + std::to_string(inputs.traversal_cost_cap) +
                          " must exceed the line intercept term " + std::to_string(out.c_tilde0));
  }
  out.c = out.c_tilde / (inputs.traversal_cost_cap - out.c_tilde0);
  return out;
}

double RegIncBeta(double x, double a, double b) {
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("incomplete beta argument must lie in [0, 1]");
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ValidationError("incomplete beta parameters must be positive and finite");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * BetaContinuedFraction(x, a, b) / a;
  return 1.0 - front * BetaContinuedFraction(1.0 - x, b, a) / b;
}

double BallFractionBelow(int dim, double offset, double radius) {
  if (dim < 1) throw ValidationError("dimension must be at least 1");
  RequirePositive(radius, "ball radius");
  if (!(offset >= 0.0)) throw ValidationError("hyperplane offset must be nonnegative");
  if (offset >= radius) return 1.0;
  const double ratio = offset / radius;
  return 1.0 - 0.5 * RegIncBeta(1.0 - ratio * ratio, 0.5 * (dim + 1), 0.5);
}

double Alpha(const BoundInputs& inputs, const Eigen::VectorXd& c) {
  const double norm = c.norm();
  if (norm == 0.0) return 1.0;
  const double shift = inputs.epsilon / (32.0 * inputs.feature_norm_cap);
  return BallFractionBelow(inputs.dim(), 1.0 / norm + shift, inputs.weight_norm_cap + shift);
}

BoundReport GeneralizationBound(const BoundInputs& inputs) {
  const CVector cv = ComputeCVector(inputs);
  BoundReport r;
  r.line = cv.line;
  r.shortest = cv.shortest;
  r.c_tilde = cv.c_tilde;
  r.c_tilde0 = cv.c_tilde0;
  r.c = cv.c;
  const double norm = cv.c.norm();
  r.c_norm_inv = norm == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / norm;
  const double shift = inputs.epsilon / (32.0 * inputs.feature_norm_cap);
  r.z_prime = r.c_norm_inv + shift;
  r.r_prime = inputs.weight_norm_cap + shift;
  r.alpha = Alpha(inputs, cv.c);

  const double mm = inputs.weight_norm_cap * inputs.feature_norm_cap;
  const double d = static_cast<double>(inputs.dim());
  const double cover_base = 32.0 * mm / inputs.epsilon + 1.0;
  const double exponent = -static_cast<double>(inputs.sample_size) * inputs.epsilon * inputs.epsilon / (512.0 * mm * mm);
  r.covering_factor = std::pow(cover_base, d);
  r.concentration_factor = std::exp(exponent);
  r.log_bound = std::log(4.0 * r.alpha) + d * std::log(cover_base) + exponent;
  if (std::isfinite(r.covering_factor) && r.concentration_factor > 0.0) {
    r.bound = 4.0 * r.alpha * r.covering_factor * r.concentration_factor;
  } else {
    r.bound = std::exp(r.log_bound);
  }
  return r;
}

}  // namespace mltrp
