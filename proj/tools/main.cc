#include <cstdio>
#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "mltrp/commands.h"

int main(int argc, char** argv) {
  mltrp::RunConfig config;
  std::string command;
  std::string cost_model = "cost1";
  std::string method = "sequential";
  std::optional<std::string> demo;

  CLI::App app{"Joint failure-model training and repair routing"};
  app.add_option("command", command, "train | route | simultaneous | export-milp | demo | simulate | bound")
      ->required()
      ->check(CLI::IsMember(mltrp::CommandNames()));
  app.add_option("demo", demo, "demo instance for 'demo': four_node | six_node");
  app.add_option("--train", config.train, "training CSV (f1..fd,label)");
  app.add_option("--test", config.test, "test CSV (f1..fd,label)");
  app.add_option("--nodes", config.nodes, "graph node features CSV (f1..fd)");
  app.add_option("--distances", config.distances, "M x M distance CSV without header");
  app.add_option("--c1", config.c1, "weight of the traversal cost");
  app.add_option("--c2", config.c2, "l2 penalty on lambda");
  app.add_option("--cost-model", cost_model, "cost1 | cost2")->check(CLI::IsMember({"cost1", "cost2"}));
  app.add_option("--method", method, "sequential | nm | am")->check(CLI::IsMember({"sequential", "nm", "am"}));
  app.add_option("--seed", config.seed, "seed for every random draw");
  app.add_option("--out-dir", config.out_dir, "output directory");
  app.add_option("--c1-grid", config.c1_grid, "C1 values for a sweep")->delimiter(',');
  app.add_option("--trials", config.trials, "Monte Carlo trials");
  app.add_option("--steps-per-unit", config.steps_per_unit, "Bernoulli steps per distance unit");
  app.add_option("--route", config.route, "route to simulate, e.g. 1-3-2-1");
  app.add_option("--lp-out", config.lp_out, "LP file path for export-milp");
  app.add_option("--m1", config.weight_norm_cap, "bound: cap on ||lambda||");
  app.add_option("--m2", config.feature_norm_cap, "bound: cap on ||x||");
  app.add_option("--cg", config.traversal_cost_cap, "bound: traversal cost cap");
  app.add_option("--epsilon", config.epsilon, "bound: accuracy epsilon");
  app.add_option("--m", config.sample_size, "bound: training sample size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    config.cost_model = mltrp::ParseCostModel(cost_model);
    config.method = mltrp::ParseMethod(method);
    if (demo) {
      if (command != "demo") throw mltrp::ValidationError("unexpected argument '" + *demo + "'");
      config.demo = *demo;
    }
    for (const auto& path : mltrp::RunCommand(command, config)) std::cout << path.string() << '\n';
    return 0;
  } catch (const mltrp::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
