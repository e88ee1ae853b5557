#pragma once

// Six experiment families, driven by a flat config file and emitting
// plot-ready CSV. Everything is deterministic in
// the config seed: platforms, workloads, pilot calibration, and arrival
// streams all hang off derived sub-streams, so rerunning a config file
// reproduces its output byte for byte.
//
// Batch families (closed-form, no simulation):
//   scale        t_star and makespan versus task size, per class
//   sensitivity  t_star for sampled tasks, per class, with per-class means
//   sizing       cumulative contribution versus fleet size at a deadline
//
// Real-time families (admission simulation, replicated over seeds):
//   rt-load      blocking versus offered load a
//   rt-seqfrac   blocking versus enforced sequential fraction f
//   rt-bandwidth blocking versus a uniform ISL bandwidth scale
//
// Calibration anchors for the real-time sweeps deserve a note. Arrival
// rates always come from lambda = a / E[S] pilots, but the pilot's task
// stream is the sweep's *reference point*, held fixed while the sweep knob
// moves: rt-seqfrac calibrates on fully divisible tasks (f = 0) and then
// degrades them, and rt-bandwidth calibrates at scale 1 and then moves the
// scale. Re-calibrating at every sweep point would cancel the very effect
// being measured (any uniform service-time change is absorbed into lambda),
// leaving flat curves that say nothing.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mpcc/constellation.hpp"
#include "mpcc/core.hpp"
#include "mpcc/io.hpp"
#include "mpcc/random.hpp"
#include "mpcc/rt_sim.hpp"
#include "mpcc/sizing.hpp"
#include "mpcc/workload.hpp"

namespace mpcc {

struct ExperimentConfig {
  std::string experiment;  // scale | sensitivity | sizing | rt-load | rt-seqfrac | rt-bandwidth
  std::string output = "out.csv";
  std::uint64_t seed = 42;

  // Platform source. Batch families use the cluster (file or built-in
  // reference) normalized per task; real-time families sample one platform
  // per replication from the ranges below.
  std::string cluster_file;  // empty = built-in reference cluster
  double compute_intensity = 1e8;  // Flops/MB for sizing and rt normalization
  std::size_t n_neighbors = 12;
  Interval w_range{0.02, 0.08};
  Interval z_range{0.01, 0.06};

  // Batch knobs.
  std::vector<std::string> classes;  // empty = family default
  std::string class_file;            // extra task classes for scale/sensitivity
  std::vector<double> l_multipliers{1.0, 2.0, 4.0, 8.0};
  std::size_t samples_per_class = 12;
  std::string means_output;  // sensitivity only; default = output stem + "_means"
  double t_req_factor = 0.6;  // sizing deadline as a fraction of w0
  double beta = 0.2;          // sizing result ratio

  // Real-time knobs.
  std::vector<double> loads{0.3, 0.7, 1.2};
  std::vector<double> seq_fracs{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  std::vector<double> bw_scales{0.5, 1.0, 2.0, 4.0};
  double offered_load = 0.7;  // anchor load for rt-seqfrac and rt-bandwidth
  double slack = 0.5;
  std::size_t replications = 20;
  std::size_t arrivals = 10000;
  std::size_t pilot = 2000;
  double warmup = 0.1;
  double base_load_mb = 100.0;

  static ExperimentConfig from_config(Config& cfg) {
    ExperimentConfig e;
    e.experiment = cfg.get_string("experiment", "");
    e.output = cfg.get_string("output", e.output);
    e.seed = cfg.get_u64("seed", e.seed);
    e.cluster_file = cfg.get_string("cluster_file", e.cluster_file);
    e.compute_intensity = cfg.get_double("ci", e.compute_intensity);
    e.n_neighbors = cfg.get_size("n_neighbors", e.n_neighbors);
    e.w_range = cfg.get_interval("w_range", e.w_range);
    e.z_range = cfg.get_interval("z_range", e.z_range);
    e.classes = cfg.get_string_list("classes", e.classes);
    e.class_file = cfg.get_string("class_file", e.class_file);
    e.l_multipliers = cfg.get_double_list("l_multipliers", e.l_multipliers);
    e.samples_per_class = cfg.get_size("samples_per_class", e.samples_per_class);
    e.means_output = cfg.get_string("means_output", e.means_output);
    e.t_req_factor = cfg.get_double("t_req_factor", e.t_req_factor);
    e.beta = cfg.get_double("beta", e.beta);
    e.loads = cfg.get_double_list("loads", e.loads);
    e.seq_fracs = cfg.get_double_list("seq_fracs", e.seq_fracs);
    e.bw_scales = cfg.get_double_list("bw_scales", e.bw_scales);
    e.offered_load = cfg.get_double("offered_load", e.offered_load);
    e.slack = cfg.get_double("delta", e.slack);
    e.replications = cfg.get_size("replications", e.replications);
    e.arrivals = cfg.get_size("arrivals", e.arrivals);
    e.pilot = cfg.get_size("pilot", e.pilot);
    e.warmup = cfg.get_double("warmup", e.warmup);
    e.base_load_mb = cfg.get_double("base_load", e.base_load_mb);
    cfg.finish();
    e.validate();
    return e;
  }

  static ExperimentConfig from_file(const std::string& path) {
    Config cfg = Config::from_file(path);
    return from_config(cfg);
  }

  void validate() const {
    static const std::vector<std::string> known = {"scale",   "sensitivity",  "sizing",
                                                   "rt-load", "rt-seqfrac", "rt-bandwidth"};
    if (std::find(known.begin(), known.end(), experiment) == known.end()) {
      std::string all;
      for (const auto& k : known) all += (all.empty() ? "" : ", ") + k;
      throw std::domain_error("unknown experiment '" + experiment + "' (known: " + all + ")");
    }
    detail::require(!output.empty(), "experiment config: output path must not be empty");
    detail::require(!l_multipliers.empty() && !loads.empty() && !seq_fracs.empty() &&
                        !bw_scales.empty(),
                    "experiment config: sweep grids must not be empty");
    detail::require(samples_per_class >= 1, "experiment config: need at least one sample per class");
    detail::require(replications >= 2, "experiment config: need at least two replications");
    detail::require(arrivals >= 1, "experiment config: need at least one arrival");
    detail::require(std::isfinite(offered_load) && offered_load > 0.0,
                    "experiment config: offered load must be positive");
    detail::require(std::isfinite(slack) && slack > 0.0,
                    "experiment config: delta must be positive");
    detail::require(std::isfinite(base_load_mb) && base_load_mb > 0.0,
                    "experiment config: base load must be positive");
    for (double f : seq_fracs)
      detail::require(std::isfinite(f) && f >= 0.0 && f <= 1.0,
                      "experiment config: seq_fracs values must lie in [0, 1]");
    for (double s : bw_scales)
      detail::require(std::isfinite(s) && s > 0.0,
                      "experiment config: bw_scales values must be positive");
    for (double a : loads)
      detail::require(std::isfinite(a) && a > 0.0,
                      "experiment config: loads values must be positive");
  }
};

namespace expdetail {

// Stream ids hung off each replication's master seed.
enum StreamId : std::uint64_t { kPlatform = 1, kPilot = 2, kWorkload = 3, kArrival = 4 };

inline Cluster load_cluster(const ExperimentConfig& cfg) {
  return cfg.cluster_file.empty() ? reference_cluster() : parse_cluster(cfg.cluster_file);
}

// Batch class roster: built-ins plus any file-defined classes, filtered to
// the configured names (or all of them), in name order.
inline std::vector<TaskClass> resolve_classes(const ExperimentConfig& cfg) {
  std::vector<TaskClass> all = builtin_classes();
  if (!cfg.class_file.empty()) {
    for (TaskClass& extra : parse_class_file(cfg.class_file)) {
      for (const TaskClass& existing : all)
        if (existing.name == extra.name)
          throw std::domain_error("class '" + extra.name + "' from " + cfg.class_file +
                                  " collides with a built-in class");
      all.push_back(std::move(extra));
    }
  }
  std::vector<TaskClass> picked;
  if (cfg.classes.empty()) {
    picked = all;
  } else {
    for (const std::string& name : cfg.classes)
      picked.push_back(detail::find_by_name(all, name, "task class"));
  }
  std::sort(picked.begin(), picked.end(),
            [](const TaskClass& a, const TaskClass& b) { return a.name < b.name; });
  return picked;
}

inline std::vector<RtTaskClass> resolve_rt_classes(const ExperimentConfig& cfg,
                                                   std::vector<std::string> fallback) {
  const std::vector<std::string>& names = cfg.classes.empty() ? fallback : cfg.classes;
  std::vector<RtTaskClass> picked;
  for (const std::string& name : names) picked.push_back(find_rt_class(name));
  std::sort(picked.begin(), picked.end(),
            [](const RtTaskClass& a, const RtTaskClass& b) { return a.name < b.name; });
  return picked;
}

inline double geometric_mid(const Interval& iv) {
  return std::exp(0.5 * (std::log(iv.lo) + std::log(iv.hi)));
}

inline double arithmetic_mid(const Interval& iv) { return 0.5 * (iv.lo + iv.hi); }

inline std::string means_path(const ExperimentConfig& cfg) {
  if (!cfg.means_output.empty()) return cfg.means_output;
  const auto dot = cfg.output.rfind('.');
  if (dot == std::string::npos || cfg.output.find('/', dot) != std::string::npos)
    return cfg.output + "_means";
  return cfg.output.substr(0, dot) + "_means" + cfg.output.substr(dot);
}

inline std::vector<std::uint64_t> master_seeds(const ExperimentConfig& cfg) {
  std::vector<std::uint64_t> seeds;
  seeds.reserve(cfg.replications);
  for (std::size_t k = 1; k <= cfg.replications; ++k)
    seeds.push_back(derive_stream(cfg.seed, k));
  return seeds;
}

// One replicated admission measurement. make_platform/make_sampler/
// calibration are factored out so each rt family can pin its own reference
// point; the master seed fans out into platform, pilot, workload, and
// arrival streams.
struct RtPoint {
  double mean_blocking = 0.0;
  double ci95 = 0.0;
};

template <class SamplerFactory, class ReferenceSamplerFactory, class PlatformMap>
RtPoint measure_blocking(const ExperimentConfig& cfg, const RtTaskClass& cls,
                         double target_load, SamplerFactory&& make_sampler,
                         ReferenceSamplerFactory&& make_reference_sampler,
                         PlatformMap&& map_platform) {
  const auto run_one = [&](std::uint64_t master) {
    const NormalizedPlatform base = sample_cluster(cfg.n_neighbors, cfg.w_range, cfg.z_range,
                                                   derive_stream(master, kPlatform));
    Rng pilot_rng(derive_stream(master, kPilot));
    const double lambda = calibrate_lambda(target_load, make_reference_sampler(cls), base,
                                           cfg.pilot, pilot_rng);
    const NormalizedPlatform platform = map_platform(base);
    return run_simulation(platform, make_sampler(cls), derive_stream(master, kWorkload),
                          AdmissionPolicy{cfg.slack, OccupancyModel::ExclusiveCluster},
                          ArrivalProcess(lambda, cfg.arrivals, derive_stream(master, kArrival)),
                          cfg.warmup);
  };
  const std::vector<std::uint64_t> seeds = master_seeds(cfg);
  const SimStats pooled = replicate(run_one, seeds);
  return RtPoint{pooled.blocking_probability, pooled.ci95_halfwidth};
}

}  // namespace expdetail

// --- scale: closed-form makespan versus task size -------------------------
//
// Each class is frozen at its representative point (interval midpoints;
// geometric midpoint for the log-ranged size and intensity) and only the
// task size moves, as multiples of the class's smallest size. CSV:
// class, L, t_star, makespan.
inline std::vector<std::string> run_scale(const ExperimentConfig& cfg) {
  const Cluster cluster = expdetail::load_cluster(cfg);
  std::vector<std::vector<std::string>> rows;
  for (const TaskClass& cls : expdetail::resolve_classes(cfg)) {
    const double ci = expdetail::geometric_mid(cls.compute_intensity);
    const double gamma = expdetail::arithmetic_mid(cls.divisible_fraction);
    const double beta = expdetail::arithmetic_mid(cls.result_ratio);
    const NormalizedPlatform platform = normalize(cluster, ci);
    const Allocation alloc = allocate(platform, DivisibilitySpec(1.0 - gamma, beta));
    std::vector<double> sizes;
    for (double m : cfg.l_multipliers) sizes.push_back(cls.size_mb.lo * m);
    std::sort(sizes.begin(), sizes.end());
    for (double load : sizes)
      rows.push_back({cls.name, format_g6(load), format_g6(alloc.unit_makespan),
                      format_g6(makespan_for_load(alloc, load))});
  }
  write_csv(cfg.output, {"class", "L", "t_star", "makespan"}, rows);
  return {cfg.output};
}

// --- sensitivity: t_star across sampled tasks -----------------------------
//
// Per class, samples_per_class tasks are drawn and each is allocated on the
// cluster normalized to its own compute intensity. The raw CSV mirrors the
// per-task rows (class, L, gamma, beta, ci, t_star_seconds); a second CSV
// holds one mean row per class in the same columns.
inline std::vector<std::string> run_sensitivity(const ExperimentConfig& cfg) {
  const Cluster cluster = expdetail::load_cluster(cfg);
  const std::vector<TaskClass> classes = expdetail::resolve_classes(cfg);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::vector<std::string>> mean_rows;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const TaskClass& cls = classes[c];
    Rng rng(derive_stream(cfg.seed, 100 + c));
    struct Sample {
      double load, gamma, beta, ci, t_star_seconds;
    };
    std::vector<Sample> samples;
    for (std::size_t s = 0; s < cfg.samples_per_class; ++s) {
      const TaskSpec task = sample_task(cls, rng);
      const NormalizedPlatform platform = normalize(cluster, task.compute_intensity);
      const Allocation alloc = allocate(platform, task.divisibility());
      samples.push_back({task.size_mb, task.divisible_fraction, task.result_ratio,
                         task.compute_intensity,
                         makespan_for_load(alloc, task.size_mb)});
    }
    std::sort(samples.begin(), samples.end(),
              [](const Sample& a, const Sample& b) { return a.load < b.load; });
    Sample mean{0, 0, 0, 0, 0};
    for (const Sample& s : samples) {
      rows.push_back({cls.name, format_g6(s.load), format_g6(s.gamma), format_g6(s.beta),
                      format_g6(s.ci), format_g6(s.t_star_seconds)});
      mean.load += s.load;
      mean.gamma += s.gamma;
      mean.beta += s.beta;
      mean.ci += s.ci;
      mean.t_star_seconds += s.t_star_seconds;
    }
    const double n = static_cast<double>(samples.size());
    mean_rows.push_back({cls.name, format_g6(mean.load / n), format_g6(mean.gamma / n),
                         format_g6(mean.beta / n), format_g6(mean.ci / n),
                         format_g6(mean.t_star_seconds / n)});
  }
  const std::vector<std::string> header = {"class", "L", "gamma", "beta", "ci",
                                           "t_star_seconds"};
  const std::string means = expdetail::means_path(cfg);
  write_csv(cfg.output, header, rows);
  write_csv(means, header, mean_rows);
  return {cfg.output, means};
}

// --- sizing: fleet size versus a relay-relative deadline ------------------
//
// The deadline is t_req_factor * w0 (tighter than the relay alone can meet
// whenever the factor is below 1), so the CSV walks n = 0..N and shows
// where cumulative contribution crosses the deficit. CSV: n, cumulative_g,
// threshold, feasible.
inline std::vector<std::string> run_sizing(const ExperimentConfig& cfg) {
  const NormalizedPlatform platform =
      normalize(expdetail::load_cluster(cfg), cfg.compute_intensity);
  detail::require(std::isfinite(cfg.t_req_factor) && cfg.t_req_factor > 0.0,
                  "sizing experiment: t_req_factor must be positive");
  const double t_req = cfg.t_req_factor * platform.relay_compute_time;
  const SizingReport report = n_min(DeadlineQuery(t_req, platform, cfg.beta));
  std::vector<std::vector<std::string>> rows;
  for (std::size_t n = 0; n <= report.cumulative.size(); ++n) {
    const double cumulative = n == 0 ? 0.0 : report.cumulative[n - 1];
    const bool feasible = cumulative >= report.deficit;
    rows.push_back({std::to_string(n), format_g6(cumulative), format_g6(report.deficit),
                    feasible ? "1" : "0"});
  }
  write_csv(cfg.output, {"n", "cumulative_g", "threshold", "feasible"}, rows);
  return {cfg.output};
}

// --- rt-load: blocking versus offered load --------------------------------
//
// Natural task streams (f = 1 - gamma), lambda calibrated per point so the
// sweep variable is exactly the offered load a. CSV: class, a,
// mean_blocking, ci95.
inline std::vector<std::string> run_rt_load(const ExperimentConfig& cfg) {
  std::vector<double> loads = cfg.loads;
  std::sort(loads.begin(), loads.end());
  const auto natural = [&cfg](const RtTaskClass& cls) {
    return [&cfg, &cls](Rng& rng) {
      return sample_rt_task(cls, cfg.base_load_mb, cfg.compute_intensity, rng);
    };
  };
  std::vector<std::vector<std::string>> rows;
  for (const RtTaskClass& cls :
       expdetail::resolve_rt_classes(cfg, {"A", "B", "C", "D"})) {
    for (double a : loads) {
      const expdetail::RtPoint p = expdetail::measure_blocking(
          cfg, cls, a, natural, natural, [](const NormalizedPlatform& p) { return p; });
      rows.push_back({cls.name, format_g6(a), format_g6(p.mean_blocking), format_g6(p.ci95)});
    }
  }
  write_csv(cfg.output, {"class", "a", "mean_blocking", "ci95"}, rows);
  return {cfg.output};
}

// --- rt-seqfrac: blocking versus enforced sequential fraction -------------
//
// The sweep pins each task's sequential fraction to max(f, 1 - gamma): a
// task can never be more parallel than its divisible share allows, so the
// knob only ever adds sequentiality. Lambda is calibrated once per class on
// the fully divisible reference stream (f = 0) at the configured offered
// load; as f grows, services stretch and the same arrival rate congests the
// cluster more. CSV: class, f, mean_blocking, ci95.
inline std::vector<std::string> run_rt_seqfrac(const ExperimentConfig& cfg) {
  std::vector<double> fracs = cfg.seq_fracs;
  std::sort(fracs.begin(), fracs.end());
  const auto reference = [&cfg](const RtTaskClass& cls) {
    return [&cfg, &cls](Rng& rng) {
      TaskSpec t = sample_rt_task(cls, cfg.base_load_mb, cfg.compute_intensity, rng);
      return TaskSpec(t.size_mb, t.compute_intensity, t.divisible_fraction, t.result_ratio,
                      0.0);
    };
  };
  std::vector<std::vector<std::string>> rows;
  for (const RtTaskClass& cls : expdetail::resolve_rt_classes(cfg, {"A", "D"})) {
    for (double f : fracs) {
      const auto swept = [&cfg, f](const RtTaskClass& c) {
        return [&cfg, &c, f](Rng& rng) {
          TaskSpec t = sample_rt_task(c, cfg.base_load_mb, cfg.compute_intensity, rng);
          const double pinned = std::max(f, t.sequential_fraction);
          return TaskSpec(t.size_mb, t.compute_intensity, t.divisible_fraction,
                          t.result_ratio, pinned);
        };
      };
      const expdetail::RtPoint p = expdetail::measure_blocking(
          cfg, cls, cfg.offered_load, swept, reference,
          [](const NormalizedPlatform& p) { return p; });
      rows.push_back({cls.name, format_g6(f), format_g6(p.mean_blocking), format_g6(p.ci95)});
    }
  }
  write_csv(cfg.output, {"class", "f", "mean_blocking", "ci95"}, rows);
  return {cfg.output};
}

// --- rt-bandwidth: blocking versus a uniform ISL bandwidth scale ----------
//
// Tasks run fully divisible (f = 0) so the communication term is actually
// exercised; with the classes' natural sequential fractions the relay's
// mandatory work dominates on this platform and bandwidth would be
// invisible. Lambda is calibrated once per class at scale 1; scaling then
// shortens or stretches services against a fixed arrival rate. CSV: class,
// bw_scale, mean_blocking, ci95.
inline std::vector<std::string> run_rt_bandwidth(const ExperimentConfig& cfg) {
  std::vector<double> scales = cfg.bw_scales;
  std::sort(scales.begin(), scales.end());
  const auto divisible = [&cfg](const RtTaskClass& cls) {
    return [&cfg, &cls](Rng& rng) {
      TaskSpec t = sample_rt_task(cls, cfg.base_load_mb, cfg.compute_intensity, rng);
      return TaskSpec(t.size_mb, t.compute_intensity, t.divisible_fraction, t.result_ratio,
                      0.0);
    };
  };
  std::vector<std::vector<std::string>> rows;
  for (const RtTaskClass& cls : expdetail::resolve_rt_classes(cfg, {"B", "C"})) {
    for (double scale : scales) {
      const expdetail::RtPoint p = expdetail::measure_blocking(
          cfg, cls, cfg.offered_load, divisible, divisible,
          [scale](const NormalizedPlatform& p) { return scale_bandwidth(p, scale); });
      rows.push_back(
          {cls.name, format_g6(scale), format_g6(p.mean_blocking), format_g6(p.ci95)});
    }
  }
  write_csv(cfg.output, {"class", "bw_scale", "mean_blocking", "ci95"}, rows);
  return {cfg.output};
}

// Dispatch by experiment id; returns the list of files written.
inline std::vector<std::string> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.experiment == "scale") return run_scale(cfg);
  if (cfg.experiment == "sensitivity") return run_sensitivity(cfg);
  if (cfg.experiment == "sizing") return run_sizing(cfg);
  if (cfg.experiment == "rt-load") return run_rt_load(cfg);
  if (cfg.experiment == "rt-seqfrac") return run_rt_seqfrac(cfg);
  return run_rt_bandwidth(cfg);
}

}  // namespace mpcc
