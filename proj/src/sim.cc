#include "mltrp/sim.h"

#include <cmath>
#include <limits>
#include <vector>

#include "mltrp/core.h"

namespace mltrp {
namespace {

void CheckProbability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("probability must lie in [0, 1]");
}

// Streams reserved per node: pre-visit draws and optional post-visit draws.
constexpr std::uint64_t kPostVisitStream = 1ull << 32;

// Welford accumulation of a per-trial total.
class Accumulator {
 public:
  void Add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }
  Estimate Result() const {
    Estimate e;
    e.mean = mean_;
    e.std_error = count_ > 1 ? std::sqrt(m2_ / static_cast<double>(count_ - 1) / static_cast<double>(count_)) : 0.0;
    return e;
  }

 private:
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

std::int64_t CountFailures(Substream& stream, double p, std::int64_t steps) {
  std::int64_t failures = 0;
  for (std::int64_t s = 0; s < steps; ++s) failures += stream.Bernoulli(p);
  return failures;
}

bool FailsWithin(Substream& stream, double p, std::int64_t steps) {
  for (std::int64_t s = 0; s < steps; ++s) {
    if (stream.Bernoulli(p)) return true;
  }
  return false;
}

}  // namespace

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

Substream::Substream(std::uint64_t seed, std::uint64_t stream)
    : engine_(SplitMix64(SplitMix64(seed) ^ SplitMix64(~stream))) {}

double Substream::Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

void SimConfig::Validate() const {
  if (trials < 1) throw ValidationError("trials must be at least 1");
  if (steps_per_unit < 1) throw ValidationError("steps per distance unit must be at least 1");
}

std::int64_t SimConfig::Steps(double latency) const {
  if (!(latency >= 0.0) || !std::isfinite(latency)) throw ValidationError("latency must be finite and nonnegative");
  const double scaled = latency * steps_per_unit;
  return static_cast<std::int64_t>(std::floor(scaled + 1e-9 * std::max(1.0, scaled)));
}

Estimate SimulateExpectedFailures(double p, double latency, const SimConfig& config) {
  CheckProbability(p);
  config.Validate();
  const std::int64_t steps = config.Steps(latency);
  Substream stream(config.seed, 0);
  Accumulator acc;
  for (std::int64_t t = 0; t < config.trials; ++t) acc.Add(static_cast<double>(CountFailures(stream, p, steps)));
  return acc.Result();
}

Estimate SimulateFirstFailureBefore(double p, double latency, const SimConfig& config) {
  CheckProbability(p);
  config.Validate();
  const std::int64_t steps = config.Steps(latency);
  Substream stream(config.seed, 0);
  Accumulator acc;
  for (std::int64_t t = 0; t < config.trials; ++t) acc.Add(FailsWithin(stream, p, steps) ? 1.0 : 0.0);
  return acc.Result();
}

std::string ToString(SimModel model) { return model == SimModel::kCost1 ? "cost1" : "cost2"; }

SimModel ParseSimModel(const std::string& text) {
  if (text == "cost1") return SimModel::kCost1;
  if (text == "cost2") return SimModel::kCost2;
  throw ValidationError("unknown simulation model '" + text + "' (expected cost1 or cost2)");
}

RouteSimulation SimulateRouteCost(const Route& route, const NodeWeights& probabilities,
                                  const DistanceMatrix& distances, SimModel model,
                                  const SimConfig& config, bool simulate_post_visit) {
  config.Validate();
  const Eigen::Index n = distances.size();
  if (probabilities.size() != n) throw DimensionMismatch("probabilities and distance matrix differ in size");
  for (Eigen::Index i = 0; i < n; ++i) CheckProbability(probabilities[i]);
  const Eigen::VectorXd latency = Latency(route, distances);
  const std::int64_t tour_steps = config.Steps(latency[route[0]]);

  std::vector<double> totals(static_cast<std::size_t>(config.trials), 0.0);
  RouteSimulation out;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = probabilities[i];
    const std::int64_t steps = config.Steps(latency[i]);
    Substream stream(config.seed, static_cast<std::uint64_t>(i));
    Substream after(config.seed, kPostVisitStream + static_cast<std::uint64_t>(i));
    for (std::int64_t t = 0; t < config.trials; ++t) {
      totals[t] += model == SimModel::kCost1 ? static_cast<double>(CountFailures(stream, p, steps))
                                             : (FailsWithin(stream, p, steps) ? 1.0 : 0.0);
      if (simulate_post_visit) CountFailures(after, p, tour_steps - steps);
    }
    const double scale = static_cast<double>(config.steps_per_unit);
    if (model == SimModel::kCost1) {
      out.analytic += p * static_cast<double>(steps);
      out.analytic_continuous += p * latency[i] * scale;
    } else {
      out.analytic += 1.0 - std::pow(1.0 - p, static_cast<double>(steps));
      out.analytic_continuous += 1.0 - std::pow(1.0 - p, latency[i] * scale);
    }
  }
  Accumulator acc;
  for (double total : totals) acc.Add(total);
  out.estimate = acc.Result();
  const double diff = out.estimate.mean - out.analytic;
  if (out.estimate.std_error > 0.0) {
    out.z_score = diff / out.estimate.std_error;
  } else {
    out.z_score = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  return out;
}

}  // namespace mltrp
