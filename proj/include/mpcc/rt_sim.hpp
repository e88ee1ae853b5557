#pragma once

// Admission control for a stream of divisible tasks arriving at one relay
// cluster. Tasks arrive as a Poisson process; each is scheduled with the
// closed-form allocator, which makes its service time known at arrival. The
// cluster serves one task at a time (admitting a task occupies every node
// until its makespan elapses), and a task is admitted only if it can finish
// within its deadline budget; otherwise it is dropped, not queued.
//
// The deadline budget is proportional to the task's own service time,
// deadline = (1 + slack) * service, so the experiments sweep dimensionless
// quantities: offered load a = lambda * E[service] and the slack factor.

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mpcc/core.hpp"
#include "mpcc/random.hpp"
#include "mpcc/workload.hpp"

namespace mpcc {

// Poisson arrival stream: exponential gaps at the given rate, a fixed
// number of arrivals, and a dedicated seed so arrival times are independent
// of task sampling.
struct ArrivalProcess {
  double rate = 1.0;         // arrivals per second
  std::size_t count = 0;     // total arrivals to generate
  std::uint64_t seed = 1;

  ArrivalProcess(double rate_, std::size_t count_, std::uint64_t seed_)
      : rate(rate_), count(count_), seed(seed_) {
    detail::require(std::isfinite(rate) && rate > 0.0,
                    "ArrivalProcess: rate must be positive and finite");
    detail::require(count >= 1, "ArrivalProcess: need at least one arrival");
  }
};

// ExclusiveCluster: an admitted task holds the whole cluster for its entire
// makespan. This is the natural occupancy model for the one-shot allocator,
// which plans every node's time from the task's start.
enum class OccupancyModel { ExclusiveCluster };

struct AdmissionPolicy {
  double slack = 0.5;  // deadline budget = (1 + slack) * service time
  OccupancyModel occupancy = OccupancyModel::ExclusiveCluster;
};

struct AdmissionDecision {
  bool admitted = false;
  double busy_until = 0.0;  // cluster release time after the decision
};

// Accept the task iff, starting when the cluster frees up, it would still
// meet its deadline. Blocked tasks leave the cluster state untouched.
inline AdmissionDecision admit_or_block(double arrival_time, double service_time,
                                        double deadline_budget, double busy_until) {
  detail::require(std::isfinite(service_time) && service_time >= 0.0,
                  "admit_or_block: service time must be nonnegative and finite");
  detail::require(std::isfinite(deadline_budget) && deadline_budget >= 0.0,
                  "admit_or_block: deadline budget must be nonnegative and finite");
  const double finish = std::max(arrival_time, busy_until) + service_time;
  if (finish <= arrival_time + deadline_budget) return {true, finish};
  return {false, busy_until};
}

// Makespan of one task on this platform under the optimal split.
inline double service_time(const TaskSpec& task, const NormalizedPlatform& platform) {
  return makespan_for_load(allocate(platform, task.divisibility()), task.size_mb);
}

// Arrival rate that produces a target offered load a = lambda * E[service],
// with E[service] estimated from n_pilot sampled tasks. The pilot draws
// come from the caller's rng, so calibration is reproducible and cannot
// perturb the simulation streams.
template <class Sampler>
double calibrate_lambda(double target_offered_load, Sampler&& sample_one,
                        const NormalizedPlatform& platform, std::size_t n_pilot, Rng& rng) {
  detail::require(std::isfinite(target_offered_load) && target_offered_load > 0.0,
                  "calibrate_lambda: target offered load must be positive and finite");
  detail::require(n_pilot >= 1000, "calibrate_lambda: need at least 1000 pilot samples");
  double total = 0.0;
  for (std::size_t i = 0; i < n_pilot; ++i)
    total += service_time(sample_one(rng), platform);
  return target_offered_load / (total / static_cast<double>(n_pilot));
}

// Counters from one run (or, via replicate, from a batch of runs). All
// statistics cover only post-warmup arrivals; warmup tasks still occupy the
// cluster so the measured window starts from a realistic busy state.
struct SimStats {
  std::size_t arrivals = 0;  // arrivals counted after warmup
  std::size_t admitted = 0;
  std::size_t blocked = 0;
  double blocking_probability = 0.0;
  double ci95_halfwidth = 0.0;        // across replications; 0 for a single run
  double mean_admitted_latency = 0.0; // arrival-to-finish time of admitted tasks
};

// Simulates one arrival stream. The task sampler is any callable mapping
// Rng& to TaskSpec; it consumes only the workload stream, never the arrival
// stream, so the two stay decoupled draw for draw.
template <class Sampler>
SimStats run_simulation(const NormalizedPlatform& platform, Sampler&& sample_one,
                        std::uint64_t workload_seed, const AdmissionPolicy& policy,
                        const ArrivalProcess& arrivals, double warmup_fraction = 0.1) {
  detail::require(std::isfinite(policy.slack) && policy.slack > 0.0,
                  "run_simulation: slack must be positive and finite");
  detail::require(std::isfinite(warmup_fraction) && warmup_fraction >= 0.0 &&
                      warmup_fraction < 1.0,
                  "run_simulation: warmup fraction must lie in [0, 1)");
  Rng workload_rng(workload_seed);
  Rng arrival_rng(arrivals.seed);
  const std::size_t warmup_count =
      static_cast<std::size_t>(warmup_fraction * static_cast<double>(arrivals.count));

  SimStats stats;
  double clock = 0.0;
  double busy_until = 0.0;
  double latency_total = 0.0;
  for (std::size_t k = 0; k < arrivals.count; ++k) {
    clock += arrival_rng.exponential(arrivals.rate);
    const TaskSpec task = sample_one(workload_rng);
    const double service = service_time(task, platform);
    const double budget = (1.0 + policy.slack) * service;
    const AdmissionDecision decision = admit_or_block(clock, service, budget, busy_until);
    busy_until = decision.busy_until;
    if (k < warmup_count) continue;
    ++stats.arrivals;
    if (decision.admitted) {
      ++stats.admitted;
      latency_total += decision.busy_until - clock;
    } else {
      ++stats.blocked;
    }
  }
  stats.blocking_probability =
      stats.arrivals ? static_cast<double>(stats.blocked) / static_cast<double>(stats.arrivals)
                     : 0.0;
  stats.mean_admitted_latency =
      stats.admitted ? latency_total / static_cast<double>(stats.admitted) : 0.0;
  return stats;
}

// Runs one replication per seed and pools the results. The blocking
// probability is the unweighted mean across replications and the halfwidth
// is the normal-approximation 95% interval of that mean, so seeds act as
// independent measurements.
inline SimStats replicate(const std::function<SimStats(std::uint64_t)>& run_one,
                          std::span<const std::uint64_t> seeds) {
  detail::require(seeds.size() >= 2, "replicate: need at least two seeds for an interval");
  std::vector<double> blocking;
  blocking.reserve(seeds.size());
  SimStats pooled;
  double latency_sum = 0.0;
  std::size_t latency_runs = 0;
  for (std::uint64_t seed : seeds) {
    const SimStats s = run_one(seed);
    blocking.push_back(s.blocking_probability);
    pooled.arrivals += s.arrivals;
    pooled.admitted += s.admitted;
    pooled.blocked += s.blocked;
    if (s.admitted) {
      latency_sum += s.mean_admitted_latency;
      ++latency_runs;
    }
  }
  const double k = static_cast<double>(blocking.size());
  double mean = 0.0;
  for (double p : blocking) mean += p;
  mean /= k;
  // Identical replications must report an exactly zero-width interval; the
  // summed squares would otherwise leave rounding noise of order epsilon.
  bool all_equal = true;
  for (double p : blocking) all_equal = all_equal && p == blocking.front();
  double var = 0.0;
  if (!all_equal) {
    for (double p : blocking) var += (p - mean) * (p - mean);
    var /= (k - 1.0);
  }
  pooled.blocking_probability = all_equal ? blocking.front() : mean;
  pooled.ci95_halfwidth = 1.96 * std::sqrt(var / k);
  pooled.mean_admitted_latency = latency_runs ? latency_sum / static_cast<double>(latency_runs) : 0.0;
  return pooled;
}

}  // namespace mpcc
