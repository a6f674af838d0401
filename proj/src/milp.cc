#include "mltrp/milp.h"

#include <cmath>
#include <cstdio>
#include <string>

namespace mltrp {
namespace {

std::string Name(const char* prefix, int i, int j) {
  return std::string(prefix) + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

std::string Number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

double Evaluate(const std::vector<double>& values, const LinearConstraint& row) {
  double lhs = 0.0;
  for (const LinearTerm& term : row.terms) lhs += term.coefficient * values[term.variable];
  return lhs - row.rhs;
}

// Writes " + 3 z_1_2 - 2 y_1_2 ..." wrapping every few terms.
void AppendTerms(std::string& out, const MilpInstance& instance, const std::vector<LinearTerm>& terms) {
  int on_line = 0;
  bool first = true;
  for (const LinearTerm& term : terms) {
    if (on_line == 8) {
      out += "\n   ";
      on_line = 0;
    }
    const bool negative = std::signbit(term.coefficient);
    if (first) {
      out += negative ? " -" : "";
    } else {
      out += negative ? " -" : " +";
    }
    out += " " + Number(std::abs(term.coefficient)) + " " + instance.variables[term.variable].name;
    first = false;
    ++on_line;
  }
  if (terms.empty()) out += " 0 " + instance.variables.front().name;
}

}  // namespace

Eigen::MatrixXd FlowCaps(const NodeWeights& weights) {
  const Eigen::Index n = weights.size();
  const double total = weights.sum();
  Eigen::MatrixXd caps(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == 0) {
        caps(i, j) = weights[0];
      } else if (i == 0) {
        caps(i, j) = total;
      } else {
        caps(i, j) = total - weights[i];
      }
    }
  }
  return caps;
}

MilpInstance BuildMilp(const NodeWeights& weights, const DistanceMatrix& distances) {
  const int n = static_cast<int>(distances.size());
  if (weights.size() != n) throw DimensionMismatch("weights and distance matrix differ in size");
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] < 0.0) throw ValidationError("MILP weights must be nonnegative");
  }
  MilpInstance instance;
  instance.num_nodes = n;
  instance.weights = weights;
  instance.caps = FlowCaps(weights);
  instance.variables.resize(2 * n * n);
  instance.objective.assign(2 * n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const bool diagonal = i == j;
      instance.variables[instance.ZIndex(i, j)] = {Name("z_", i, j), false, 0.0,
                                                   diagonal ? 0.0 : instance.caps(i, j)};
      instance.variables[instance.YIndex(i, j)] = {Name("y_", i, j), true, 0.0, diagonal ? 0.0 : 1.0};
      instance.objective[instance.ZIndex(i, j)] = distances(i, j);
    }
  }

  auto& rows = instance.constraints;
  for (int j = 0; j < n; ++j) {
    LinearConstraint row{"deg_in_" + std::to_string(j + 1), {}, RowSense::kEqual, 1.0};
    for (int i = 0; i < n; ++i) row.terms.push_back({instance.YIndex(i, j), 1.0});
    rows.push_back(std::move(row));
  }
  for (int i = 0; i < n; ++i) {
    LinearConstraint row{"deg_out_" + std::to_string(i + 1), {}, RowSense::kEqual, 1.0};
    for (int j = 0; j < n; ++j) row.terms.push_back({instance.YIndex(i, j), 1.0});
    rows.push_back(std::move(row));
  }
  {
    LinearConstraint row{"ret", {}, RowSense::kEqual, weights[0]};
    for (int i = 0; i < n; ++i) row.terms.push_back({instance.ZIndex(i, 0), 1.0});
    rows.push_back(std::move(row));
  }
  const double total = weights.sum();
  for (int k = 0; k < n; ++k) {
    LinearConstraint row{"flow_" + std::to_string(k + 1), {}, RowSense::kEqual,
                         k == 0 ? weights[0] - total : weights[k]};
    // z_k_k enters with +1 and -1 and cancels.
    for (int i = 0; i < n; ++i) {
      if (i != k) row.terms.push_back({instance.ZIndex(i, k), 1.0});
    }
    for (int j = 0; j < n; ++j) {
      if (j != k) row.terms.push_back({instance.ZIndex(k, j), -1.0});
    }
    rows.push_back(std::move(row));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      rows.push_back({Name("link_", i, j),
                      {{instance.ZIndex(i, j), 1.0}, {instance.YIndex(i, j), -instance.caps(i, j)}},
                      RowSense::kLessEqual,
                      0.0});
    }
  }
  return instance;
}

FlowAssignment RouteToFlow(const Route& route, const NodeWeights& weights) {
  const int n = route.size();
  if (weights.size() != n) throw DimensionMismatch("weights and route differ in size");
  FlowAssignment flow{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  double carried = weights.sum();
  for (int t = 0; t < n; ++t) {
    const int from = route[t];
    const int to = route[(t + 1) % n];
    if (t > 0) carried -= weights[from];
    flow.y(from, to) = 1.0;
    flow.z(from, to) = carried;
  }
  // The closing edge carries exactly the depot weight; set it directly so the
  // return row holds without accumulated rounding.
  flow.z(route[n - 1], route[0]) = weights[route[0]];
  return flow;
}

std::vector<std::string> FeasibilityReport::Violations() const {
  std::vector<std::string> names;
  for (const RowResidual& row : rows) {
    if (row.violated) names.push_back(row.name);
  }
  return names;
}

FeasibilityReport CheckFeasible(const MilpInstance& instance, const FlowAssignment& assignment) {
  const int n = instance.num_nodes;
  if (assignment.y.rows() != n || assignment.y.cols() != n || assignment.z.rows() != n ||
      assignment.z.cols() != n) {
    throw DimensionMismatch("assignment dimensions do not match the instance");
  }
  std::vector<double> values(instance.variables.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      values[instance.ZIndex(i, j)] = assignment.z(i, j);
      values[instance.YIndex(i, j)] = assignment.y(i, j);
    }
  }

  FeasibilityReport report;
  for (std::size_t v = 0; v < values.size(); ++v) report.objective += instance.objective[v] * values[v];

  auto add = [&](std::string name, double residual, bool violated) {
    report.rows.push_back({std::move(name), residual, violated});
    report.feasible = report.feasible && !violated;
  };
  for (const LinearConstraint& row : instance.constraints) {
    const double residual = Evaluate(values, row);
    const bool violated = row.sense == RowSense::kEqual ? std::abs(residual) > kFeasibilityTolerance
                                                        : residual > kFeasibilityTolerance;
    add(row.name, residual, violated);
  }
  for (std::size_t v = 0; v < values.size(); ++v) {
    const MilpVariable& var = instance.variables[v];
    const double outside = std::max({var.lower - values[v], values[v] - var.upper, 0.0});
    add("bound_" + var.name, outside, outside > kFeasibilityTolerance);
    if (var.binary) {
      const double gap = std::abs(values[v] - std::round(values[v]));
      add("binary_" + var.name, gap, gap > kFeasibilityTolerance);
    }
  }
  return report;
}

std::string ExportLp(const MilpInstance& instance) {
  const int n = instance.num_nodes;
  std::string out;
  out += "\\ weighted traveling repairman, flow formulation, " + std::to_string(n) + " nodes\n";
  out += "Minimize\n obj:";
  std::vector<LinearTerm> objective;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) objective.push_back({instance.ZIndex(i, j), instance.objective[instance.ZIndex(i, j)]});
    }
  }
  AppendTerms(out, instance, objective);
  out += "\nSubject To\n";
  for (const LinearConstraint& row : instance.constraints) {
    out += " " + row.name + ":";
    AppendTerms(out, instance, row.terms);
    out += row.sense == RowSense::kEqual ? " = " : " <= ";
    out += Number(row.rhs) + "\n";
  }
  out += "Bounds\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const MilpVariable& z = instance.variables[instance.ZIndex(i, j)];
      if (i == j || z.upper == 0.0) {
        out += " " + z.name + " = 0\n";
      } else {
        out += " 0 <= " + z.name + " <= " + Number(z.upper) + "\n";
      }
    }
  }
  for (int i = 0; i < n; ++i) out += " " + instance.variables[instance.YIndex(i, i)].name + " = 0\n";
  out += "Binaries\n";
  for (int i = 0; i < n; ++i) {
    out += " ";
    for (int j = 0; j < n; ++j) {
      out += instance.variables[instance.YIndex(i, j)].name;
      out += j + 1 < n ? " " : "\n";
    }
  }
  out += "End\n";
  return out;
}

}  // namespace mltrp
