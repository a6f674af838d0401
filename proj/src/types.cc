#include "mltrp/types.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace mltrp {
namespace {

bool AllFinite(const Eigen::MatrixXd& m) { return m.allFinite(); }

}  // namespace

LabeledDataset::LabeledDataset(Eigen::MatrixXd features, Eigen::VectorXd labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (features_.rows() < 1) throw ValidationError("dataset must contain at least one example");
  if (features_.cols() < 1) throw ValidationError("feature dimension must be at least 1");
  if (labels_.size() != features_.rows()) {
    throw DimensionMismatch("dataset has " + std::to_string(features_.rows()) + " rows but " +
                            std::to_string(labels_.size()) + " labels");
  }
  if (!AllFinite(features_)) throw ValidationError("dataset features must be finite");
  for (Eigen::Index i = 0; i < labels_.size(); ++i) {
    if (labels_[i] != 1.0 && labels_[i] != -1.0) {
      throw ValidationError("label of example " + std::to_string(i + 1) + " must be -1 or +1");
    }
  }
}

NodeSet::NodeSet(Eigen::MatrixXd features) : features_(std::move(features)) {
  if (features_.rows() < 2) throw ValidationError("node set needs at least 2 nodes");
  if (features_.cols() < 1) throw ValidationError("feature dimension must be at least 1");
  if (!AllFinite(features_)) throw ValidationError("node features must be finite");
}

DistanceMatrix::DistanceMatrix(Eigen::MatrixXd d) : d_(std::move(d)) {
  if (d_.rows() != d_.cols()) throw ValidationError("distance matrix must be square");
  if (d_.rows() < 2) throw ValidationError("distance matrix needs at least 2 nodes");
  for (Eigen::Index i = 0; i < d_.rows(); ++i) {
    for (Eigen::Index j = 0; j < d_.cols(); ++j) {
      const double v = d_(i, j);
      const std::string where = "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
      if (!std::isfinite(v)) throw ValidationError("distance " + where + " is not finite");
      if (v < 0.0) throw ValidationError("distance " + where + " is negative");
      if (i == j && v != 0.0) throw ValidationError("distance " + where + " must be zero");
    }
  }
}

Route::Route(std::vector<int> order) : order_(std::move(order)) {
  const int n = static_cast<int>(order_.size());
  if (n < 1) throw ValidationError("route is empty");
  if (order_.front() != 0) throw ValidationError("route must start at node 1");
  std::vector<bool> seen(n, false);
  for (int node : order_) {
    if (node < 0 || node >= n) {
      throw ValidationError("route visits node " + std::to_string(node + 1) + " outside 1.." +
                            std::to_string(n));
    }
    if (seen[node]) throw ValidationError("route visits node " + std::to_string(node + 1) + " twice");
    seen[node] = true;
  }
}

Route Route::FromOneBased(const std::vector<int>& order) {
  std::vector<int> zero_based(order.size());
  std::transform(order.begin(), order.end(), zero_based.begin(), [](int v) { return v - 1; });
  return Route(std::move(zero_based));
}

Route Route::Parse(std::string_view text) {
  std::vector<int> ids;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t dash = std::min(text.find('-', pos), text.size());
    const std::string_view token = text.substr(pos, dash - pos);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
      throw ValidationError("malformed route string '" + std::string(text) + "'");
    }
    ids.push_back(value);
    pos = dash + 1;
  }
  if (ids.size() >= 2 && ids.back() == ids.front()) ids.pop_back();
  return FromOneBased(ids);
}

Route Route::Identity(int num_nodes) {
  std::vector<int> order(num_nodes);
  for (int i = 0; i < num_nodes; ++i) order[i] = i;
  return Route(std::move(order));
}

std::string Route::ToString() const {
  std::ostringstream out;
  for (int node : order_) out << node + 1 << '-';
  out << order_.front() + 1;
  return out.str();
}

std::vector<int> Route::OneBased() const {
  std::vector<int> ids(order_.size());
  std::transform(order_.begin(), order_.end(), ids.begin(), [](int v) { return v + 1; });
  return ids;
}

void CheckRouteSize(const Route& route, Eigen::Index num_nodes) {
  if (route.size() != num_nodes) {
    throw DimensionMismatch("route has " + std::to_string(route.size()) + " nodes, expected " +
                            std::to_string(num_nodes));
  }
}

}  // namespace mltrp
