#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mltrp {

/// Raised for malformed or inconsistent user input. The CLI maps it to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Raised when a numerical routine cannot produce a meaningful result
/// (non-finite loss, diverging inner solver).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Weight vector of the linear scoring function f(x) = lambda . x.
using ModelParams = Eigen::VectorXd;
/// Per-node route weights (failure probabilities or softplus scores).
using NodeWeights = Eigen::VectorXd;

/// Training examples stored row-wise with labels in {-1, +1}.
class LabeledDataset {
 public:
  LabeledDataset() = default;
  LabeledDataset(Eigen::MatrixXd features, Eigen::VectorXd labels);

  const Eigen::MatrixXd& features() const { return features_; }
  const Eigen::VectorXd& labels() const { return labels_; }
  Eigen::Index size() const { return features_.rows(); }
  Eigen::Index dim() const { return features_.cols(); }

 private:
  Eigen::MatrixXd features_;
  Eigen::VectorXd labels_;
};

/// Unlabeled graph nodes; row i holds the features of node i (node 0 is the depot).
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(Eigen::MatrixXd features);

  const Eigen::MatrixXd& features() const { return features_; }
  Eigen::Index size() const { return features_.rows(); }
  Eigen::Index dim() const { return features_.cols(); }

 private:
  Eigen::MatrixXd features_;
};

/// Complete directed graph with nonnegative, finite, possibly asymmetric
/// travel distances and a zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(Eigen::MatrixXd d);

  double operator()(Eigen::Index i, Eigen::Index j) const { return d_(i, j); }
  const Eigen::MatrixXd& matrix() const { return d_; }
  Eigen::Index size() const { return d_.rows(); }

 private:
  Eigen::MatrixXd d_;
};

/// A closed tour starting and ending at node 0. Stored with 0-based node ids;
/// textual forms use the 1-based "1-3-2-1" notation.
class Route {
 public:
  Route() = default;
  explicit Route(std::vector<int> order);

  static Route FromOneBased(const std::vector<int>& order);
  /// Parses "1-3-2-4-1" or "1-3-2-4" (closing depot optional).
  static Route Parse(std::string_view text);
  static Route Identity(int num_nodes);

  const std::vector<int>& order() const { return order_; }
  int size() const { return static_cast<int>(order_.size()); }
  int operator[](int position) const { return order_[position]; }

  std::string ToString() const;
  std::vector<int> OneBased() const;

  friend bool operator==(const Route&, const Route&) = default;
  friend auto operator<=>(const Route& a, const Route& b) { return a.order_ <=> b.order_; }

 private:
  std::vector<int> order_;
};

/// Throws DimensionMismatch unless route covers exactly `num_nodes` nodes.
void CheckRouteSize(const Route& route, Eigen::Index num_nodes);

}  // namespace mltrp
