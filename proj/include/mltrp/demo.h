#pragma once

#include <cstdint>
#include <string>

#include "mltrp/types.h"

namespace mltrp {

enum class DemoKind { kFourNode, kSixNode };

std::string ToString(DemoKind kind);
DemoKind ParseDemoKind(const std::string& text);

/// A small synthetic instance: two labeled training clusters in the plane,
/// a held-out test set from the same distribution, and a handful of graph
/// nodes with physical positions that define Euclidean distances.
struct DemoInstance {
  DemoKind kind = DemoKind::kFourNode;
  LabeledDataset train;
  LabeledDataset test;
  NodeSet nodes;
  Eigen::MatrixXd positions;  ///< physical coordinates of the graph nodes
  DistanceMatrix distances;
  double c1 = 0.0;  ///< default coupling strength for the demo
  double c2 = 0.0;
};

/// four_node: opposing square clusters, four nodes whose route flips under a
/// small rotation of the decision boundary.
/// six_node: two triangles pointing tip to tip; node 6 sits in an empty region
/// of feature space and far away physically.
DemoInstance MakeDemo(DemoKind kind, std::uint64_t seed);

}  // namespace mltrp
