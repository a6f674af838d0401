#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mltrp/opt.h"

namespace mltrp {

/// Everything a CLI invocation can configure. Unset optionals fall back to
/// per-command defaults.
struct RunConfig {
  std::optional<std::filesystem::path> train;
  std::optional<std::filesystem::path> test;
  std::optional<std::filesystem::path> nodes;
  std::optional<std::filesystem::path> distances;

  std::optional<double> c1;
  double c2 = 0.0;
  CostModel cost_model = CostModel::kCost1;
  Method method = Method::kSequential;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = ".";
  std::vector<double> c1_grid;

  // simulate
  std::int64_t trials = 100000;
  int steps_per_unit = 1;
  std::optional<std::string> route;

  // export-milp
  std::optional<std::filesystem::path> lp_out;

  // demo
  std::string demo = "six_node";

  // bound
  std::optional<double> weight_norm_cap;
  std::optional<double> feature_norm_cap;
  std::optional<double> traversal_cost_cap;
  double epsilon = 0.1;
  std::optional<std::int64_t> sample_size;
};

inline const std::vector<std::string>& CommandNames() {
  static const std::vector<std::string> names = {"train",       "route", "simultaneous", "export-milp",
                                                 "demo",        "simulate", "bound"};
  return names;
}

/// Each command writes its outputs under `out_dir` and returns the paths written.
std::vector<std::filesystem::path> CmdTrain(const RunConfig& config);
std::vector<std::filesystem::path> CmdRoute(const RunConfig& config);
std::vector<std::filesystem::path> CmdSimultaneous(const RunConfig& config);
std::vector<std::filesystem::path> CmdExportMilp(const RunConfig& config);
std::vector<std::filesystem::path> CmdDemo(const RunConfig& config);
std::vector<std::filesystem::path> CmdSimulate(const RunConfig& config);
std::vector<std::filesystem::path> CmdBound(const RunConfig& config);

std::vector<std::filesystem::path> RunCommand(const std::string& name, const RunConfig& config);

}  // namespace mltrp
