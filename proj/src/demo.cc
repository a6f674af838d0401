#include "mltrp/demo.h"

#include <functional>

#include "mltrp/sim.h"

namespace mltrp {
namespace {

using Eigen::Vector2d;

Vector2d UniformTriangle(Substream& rng, const Vector2d& a, const Vector2d& b, const Vector2d& c) {
  double u = rng.Uniform();
  double v = rng.Uniform();
  if (u + v > 1.0) {
    u = 1.0 - u;
    v = 1.0 - v;
  }
  return a + u * (b - a) + v * (c - a);
}

Vector2d UniformBox(Substream& rng, const Vector2d& lo, const Vector2d& hi) {
  const double u = rng.Uniform();
  const double v = rng.Uniform();
  return {lo.x() + u * (hi.x() - lo.x()), lo.y() + v * (hi.y() - lo.y())};
}

// Positives and negatives alternate so the class balance is exact.
template <typename Sampler>
LabeledDataset SampleClusters(int per_class, Sampler&& positive, Sampler&& negative) {
  Eigen::MatrixXd x(2 * per_class, 2);
  Eigen::VectorXd y(2 * per_class);
  for (int i = 0; i < per_class; ++i) {
    x.row(2 * i) = positive().transpose();
    y[2 * i] = 1.0;
    x.row(2 * i + 1) = negative().transpose();
    y[2 * i + 1] = -1.0;
  }
  return LabeledDataset(std::move(x), std::move(y));
}

DistanceMatrix EuclideanDistances(const Eigen::MatrixXd& positions) {
  const Eigen::Index n = positions.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) d(i, j) = (positions.row(i) - positions.row(j)).norm();
    }
  }
  return DistanceMatrix(std::move(d));
}

DemoInstance FourNode(std::uint64_t seed) {
  DemoInstance demo;
  demo.kind = DemoKind::kFourNode;
  const Vector2d pos_lo(0.3, 0.3), pos_hi(1.5, 1.5);
  auto sample = [&](std::uint64_t stream, int per_class) {
    Substream rng(seed, stream);
    std::function<Vector2d()> positive = [&] { return UniformBox(rng, pos_lo, pos_hi); };
    std::function<Vector2d()> negative = [&] { return Vector2d(-UniformBox(rng, pos_lo, pos_hi)); };
    return SampleClusters(per_class, positive, negative);
  };
  demo.train = sample(0, 10);
  demo.test = sample(1, 10);
  Eigen::MatrixXd features(4, 2);
  features << 0.0, 0.0,
              0.6, -0.2,
              -0.2, 0.6,
              0.2, 0.2;
  demo.nodes = NodeSet(features);
  demo.positions.resize(4, 2);
  demo.positions << 0.0, 0.0,
                    0.75, 0.0,
                    2.0, 2.0,
                    0.0, 2.0;
  demo.distances = EuclideanDistances(demo.positions);
  demo.c1 = 2.0;
  demo.c2 = 1.0;
  return demo;
}

DemoInstance SixNode(std::uint64_t seed) {
  DemoInstance demo;
  demo.kind = DemoKind::kSixNode;
  const Vector2d a(0.15, 0.15), b(2.0, 0.6), c(0.6, 2.0);
  auto sample = [&](std::uint64_t stream, int per_class) {
    Substream rng(seed, stream);
    std::function<Vector2d()> positive = [&] { return UniformTriangle(rng, a, b, c); };
    std::function<Vector2d()> negative = [&] { return Vector2d(-UniformTriangle(rng, a, b, c)); };
    return SampleClusters(per_class, positive, negative);
  };
  demo.train = sample(0, 15);
  demo.test = sample(1, 15);
  Eigen::MatrixXd features(6, 2);
  features << 0.0, 0.0,
              1.0, 0.9,
              0.9, 1.1,
              -0.35, -0.25,
              -0.25, -0.4,
              -1.6, 1.6;
  demo.nodes = NodeSet(features);
  demo.positions.resize(6, 2);
  demo.positions << 0.0, 0.0,
                    1.0, 0.0,
                    2.0, 0.0,
                    2.0, -1.5,
                    1.0, -1.5,
                    4.5, -0.5;
  demo.distances = EuclideanDistances(demo.positions);
  demo.c1 = 0.5;
  demo.c2 = 1.0;
  return demo;
}

}  // namespace

std::string ToString(DemoKind kind) { return kind == DemoKind::kFourNode ? "four_node" : "six_node"; }

DemoKind ParseDemoKind(const std::string& text) {
  if (text == "four_node") return DemoKind::kFourNode;
  if (text == "six_node") return DemoKind::kSixNode;
  throw ValidationError("unknown demo '" + text + "' (expected four_node or six_node)");
}

DemoInstance MakeDemo(DemoKind kind, std::uint64_t seed) {
  return kind == DemoKind::kFourNode ? FourNode(seed) : SixNode(seed);
}

}  // namespace mltrp
