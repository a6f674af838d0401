#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "mltrp/types.h"

namespace mltrp {

/// Name recorded in simulation reports for the generator below.
inline constexpr const char* kSimulationRng = "mt19937_64/splitmix64-substreams";

/// Deterministic substream: std::mt19937_64 seeded with SplitMix64(seed, stream).
/// Uniforms are built from the top 53 bits, so the sequence is identical on
/// every platform.
class Substream {
 public:
  Substream(std::uint64_t seed, std::uint64_t stream);
  /// Uniform on [0, 1).
  double Uniform();
  bool Bernoulli(double p) { return Uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t SplitMix64(std::uint64_t x);

struct SimConfig {
  std::int64_t trials = 100000;
  std::uint64_t seed = 0;
  int steps_per_unit = 1;  ///< Bernoulli steps per distance unit

  void Validate() const;
  /// floor(latency * steps_per_unit), guarded against representation noise.
  std::int64_t Steps(double latency) const;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Mean number of Bernoulli(p) successes in the discretized latency.
Estimate SimulateExpectedFailures(double p, double latency, const SimConfig& config);

/// Fraction of trials whose first success happens within the discretized latency.
Estimate SimulateFirstFailureBefore(double p, double latency, const SimConfig& config);

enum class SimModel { kCost1, kCost2 };

std::string ToString(SimModel model);
SimModel ParseSimModel(const std::string& text);

struct RouteSimulation {
  Estimate estimate;
  /// Closed form evaluated on the floored step counts (what the simulation targets).
  double analytic = 0.0;
  /// Closed form at the real-valued latencies; differs from `analytic` only by flooring.
  double analytic_continuous = 0.0;
  double z_score = 0.0;
};

/// Simulates each node's failure process independently (one substream per node).
/// Cost 1 counts failures before the visit; Cost 2 counts nodes whose first
/// failure precedes the visit. With `simulate_post_visit`, failures after the
/// visit are drawn from a separate substream and never counted.
RouteSimulation SimulateRouteCost(const Route& route, const NodeWeights& probabilities,
                                  const DistanceMatrix& distances, SimModel model,
                                  const SimConfig& config, bool simulate_post_visit = false);

}  // namespace mltrp
