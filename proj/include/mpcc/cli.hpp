#pragma once

// Command implementations behind the command-line tool. They take plain
// argument structs and write to caller-supplied streams, so tests can drive
// them without a process boundary or an argument parser.
//
// Exit codes: 0 success, 1 infeasible-but-valid query (sizing shortfall),
// 2 input error (unparseable file, bad value, unknown name).

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mpcc/constellation.hpp"
#include "mpcc/core.hpp"
#include "mpcc/experiments.hpp"
#include "mpcc/io.hpp"
#include "mpcc/sizing.hpp"
#include "mpcc/workload.hpp"

namespace mpcc::cli {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitInputError = 2;

struct AllocateArgs {
  std::string cluster_file;        // empty = built-in reference cluster
  double compute_intensity = 1e8;  // Flops/MB for explicit tasks
  std::string task_class;          // sample the task from this class
  std::uint64_t task_seed = 1;
  double gamma = -1.0;             // explicit task: divisible fraction
  double beta = 0.0;               // explicit task: result ratio
  double seq_frac = -1.0;          // negative = natural f = 1 - gamma
  double load_mb = -1.0;           // negative = sampled size (class) or 1 MB
  std::string csv;                 // optional per-node CSV path
};

struct SizeArgs {
  std::string cluster_file;
  double compute_intensity = 1e8;
  double required_unit_time = 0.0;  // deadline per MB, required
  double beta = 0.2;
  std::string csv;  // optional rank table CSV path
};

struct ExperimentArgs {
  std::string config_file;
  std::string output_override;              // overrides the config's output path
  std::optional<std::uint64_t> seed_override;
};

namespace clidetail {

inline Cluster cluster_from(const std::string& file) {
  return file.empty() ? reference_cluster() : parse_cluster(file);
}

inline int report_error(const std::exception& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  return kExitInputError;
}

}  // namespace clidetail

inline int cmd_allocate(const AllocateArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const Cluster cluster = clidetail::cluster_from(args.cluster_file);

    std::optional<TaskSpec> task;
    if (!args.task_class.empty()) {
      if (args.gamma >= 0.0)
        throw std::domain_error("give either --class or --gamma/--beta, not both");
      Rng rng(args.task_seed);
      TaskSpec sampled = sample_task(find_class(args.task_class), rng);
      if (args.load_mb >= 0.0)
        task = TaskSpec(args.load_mb, sampled.compute_intensity, sampled.divisible_fraction,
                        sampled.result_ratio, sampled.sequential_fraction);
      else
        task = sampled;
    } else {
      if (args.gamma < 0.0)
        throw std::domain_error("task undefined: pass --class <name> or --gamma <g> [--beta <b>]");
      const double load = args.load_mb >= 0.0 ? args.load_mb : 1.0;
      if (args.seq_frac >= 0.0)
        task = TaskSpec(load, args.compute_intensity, args.gamma, args.beta, args.seq_frac);
      else
        task = TaskSpec(load, args.compute_intensity, args.gamma, args.beta);
    }

    const NormalizedPlatform platform = normalize(cluster, task->compute_intensity);
    const Allocation alloc = allocate(platform, task->divisibility());

    out << "cluster=" << (cluster.label.empty() ? "(unnamed)" : cluster.label)
        << " neighbors=" << platform.neighbor_count() << " w0=" << format_g6(platform.relay_compute_time)
        << '\n';
    out << "task L=" << format_g6(task->size_mb) << " gamma=" << format_g6(task->divisible_fraction)
        << " beta=" << format_g6(task->result_ratio) << " f=" << format_g6(task->sequential_fraction)
        << " ci=" << format_g6(task->compute_intensity) << '\n';
    out << "regime=" << to_string(alloc.regime) << '\n';
    out << "t_star=" << format_g6(alloc.unit_makespan) << '\n';
    out << "makespan=" << format_g6(makespan_for_load(alloc, task->size_mb)) << '\n';
    out << "alpha_0=" << format_g6(alloc.relay_fraction) << '\n';
    for (std::size_t i = 0; i < alloc.neighbor_fractions.size(); ++i)
      out << "alpha_" << i + 1 << "=" << format_g6(alloc.neighbor_fractions[i]) << '\n';

    if (!args.csv.empty()) {
      std::vector<std::vector<std::string>> rows;
      const double f = task->sequential_fraction;
      rows.push_back({"0", format_g6(alloc.relay_fraction),
                      format_g6(platform.relay_compute_time),
                      format_g6((f + alloc.relay_fraction) * platform.relay_compute_time)});
      for (std::size_t i = 0; i < platform.neighbor_count(); ++i) {
        const NeighborCost& n = platform.neighbors[i];
        const double cost = child_cost(n.compute_time, n.link_time, task->result_ratio);
        rows.push_back({std::to_string(i + 1), format_g6(alloc.neighbor_fractions[i]),
                        format_g6(cost), format_g6(alloc.neighbor_fractions[i] * cost)});
      }
      write_csv(args.csv, {"node", "alpha", "unit_cost", "finish"}, rows);
    }
    return kExitOk;
  } catch (const std::exception& e) {
    return clidetail::report_error(e, err);
  }
}

inline int cmd_size(const SizeArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const Cluster cluster = clidetail::cluster_from(args.cluster_file);
    const NormalizedPlatform platform = normalize(cluster, args.compute_intensity);
    const SizingReport report =
        n_min(DeadlineQuery(args.required_unit_time, platform, args.beta));

    out << "t_req=" << format_g6(args.required_unit_time)
        << " w0=" << format_g6(platform.relay_compute_time) << " beta=" << format_g6(args.beta)
        << '\n';
    out << "deficit=" << format_g6(report.deficit) << '\n';
    for (std::size_t r = 0; r < report.sorted_order.size(); ++r) {
      const std::size_t idx = report.sorted_order[r];
      out << "rank=" << r + 1 << " neighbor=" << cluster.neighbors[idx].id
          << " g=" << format_g6(report.contributions[idx])
          << " cumulative=" << format_g6(report.cumulative[r]) << '\n';
    }
    if (report.min_satellites)
      out << "n_min=" << *report.min_satellites << '\n';
    else
      out << "n_min=INFEASIBLE" << '\n';

    if (!args.csv.empty()) {
      std::vector<std::vector<std::string>> rows;
      for (std::size_t r = 0; r < report.sorted_order.size(); ++r) {
        const bool selected = report.min_satellites && r < *report.min_satellites;
        rows.push_back({std::to_string(r + 1), format_g6(report.contributions[report.sorted_order[r]]),
                        format_g6(report.cumulative[r]), format_g6(report.deficit),
                        selected ? "1" : "0"});
      }
      write_csv(args.csv, {"rank", "g", "cumulative", "threshold", "selected"}, rows);
    }
    return report.min_satellites ? kExitOk : kExitInfeasible;
  } catch (const std::exception& e) {
    return clidetail::report_error(e, err);
  }
}

inline int cmd_experiment(const ExperimentArgs& args, std::ostream& out, std::ostream& err) {
  try {
    ExperimentConfig cfg = ExperimentConfig::from_file(args.config_file);
    if (!args.output_override.empty()) {
      cfg.output = args.output_override;
      cfg.means_output.clear();  // keep the derived means path next to the override
    }
    if (args.seed_override) cfg.seed = *args.seed_override;
    for (const std::string& path : run_experiment(cfg)) out << "wrote " << path << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    return clidetail::report_error(e, err);
  }
}

}  // namespace mpcc::cli
