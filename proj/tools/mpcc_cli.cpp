// mpcc: divisible-load allocation, sizing, and admission experiments for
// relay-centred satellite clusters. See README.md for file formats.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mpcc/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Divisible-load scheduling toolkit for relay-centred satellite clusters"};
  app.require_subcommand(1);

  mpcc::cli::AllocateArgs alloc;
  CLI::App* allocate = app.add_subcommand("allocate", "Optimally split one task");
  allocate->add_option("--cluster", alloc.cluster_file,
                       "Cluster description file (default: built-in reference topology)");
  allocate->add_option("--ci", alloc.compute_intensity,
                       "Compute intensity in Flops/MB for explicit tasks (default 1e8)");
  allocate->add_option("--class", alloc.task_class, "Sample the task from this task class");
  allocate->add_option("--task-seed", alloc.task_seed, "Seed for --class sampling (default 1)");
  allocate->add_option("--gamma", alloc.gamma, "Explicit task: divisible fraction in (0,1]");
  allocate->add_option("--beta", alloc.beta, "Explicit task: result-size ratio (default 0)");
  allocate->add_option("--f", alloc.seq_frac,
                       "Sequential-fraction override (default: 1 - gamma)");
  allocate->add_option("--load", alloc.load_mb, "Task size in MB");
  allocate->add_option("--csv", alloc.csv, "Also write one CSV row per node to this path");

  mpcc::cli::SizeArgs size;
  CLI::App* sizecmd = app.add_subcommand("size", "Minimum fleet for a deadline");
  sizecmd->add_option("--cluster", size.cluster_file,
                      "Cluster description file (default: built-in reference topology)");
  sizecmd->add_option("--ci", size.compute_intensity, "Compute intensity in Flops/MB");
  sizecmd->add_option("--t-req", size.required_unit_time, "Deadline in seconds per MB")
      ->required();
  sizecmd->add_option("--beta", size.beta, "Result-size ratio (default 0.2)");
  sizecmd->add_option("--csv", size.csv, "Also write the rank table to this path");

  mpcc::cli::ExperimentArgs experiment;
  std::uint64_t seed_flag = 0;
  CLI::App* expcmd = app.add_subcommand("experiment", "Run an experiment config");
  expcmd->add_option("config", experiment.config_file, "Experiment config file")->required();
  expcmd->add_option("--output", experiment.output_override, "Override the config's output path");
  CLI::Option* seed_opt = expcmd->add_option("--seed", seed_flag, "Override the config's seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the parse message
    return code == 0 ? 0 : mpcc::cli::kExitInputError;
  }

  if (allocate->parsed()) return mpcc::cli::cmd_allocate(alloc, std::cout, std::cerr);
  if (sizecmd->parsed()) return mpcc::cli::cmd_size(size, std::cout, std::cerr);
  if (seed_opt->count() > 0) experiment.seed_override = seed_flag;
  return mpcc::cli::cmd_experiment(experiment, std::cout, std::cerr);
}
