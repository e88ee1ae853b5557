// End-to-end tour of the closed-form scheduler: take the built-in reference
// cluster, normalize it for one task, print the optimal per-node schedule,
// then ask how many neighbors a tighter deadline would actually need.

#include <cstdio>

#include "mpcc/constellation.hpp"
#include "mpcc/core.hpp"
#include "mpcc/sizing.hpp"
#include "mpcc/workload.hpp"

int main() {
  using namespace mpcc;

  // A 600 MB inference-style task: 95% of it can be farmed out, results come
  // back at a tenth of the input size, 2e8 Flops per MB of input. Divisible
  // enough that the relay keeps a share and every node finishes together.
  const TaskSpec task(600.0, 2e8, 0.95, 0.1);

  const Cluster& cluster = reference_cluster();
  const NormalizedPlatform platform = normalize(cluster, task.compute_intensity);
  const Allocation plan = allocate(platform, task.divisibility());

  std::printf("cluster %s: relay %s plus %zu neighbors\n", cluster.label.c_str(),
              cluster.relay.id.c_str(), cluster.neighbors.size());
  std::printf("task: %.0f MB, %.0f%% divisible, result ratio %.2f\n", task.size_mb,
              100.0 * task.divisible_fraction, task.result_ratio);
  std::printf("regime %s, makespan %.3f s (%.5f s per MB)\n\n", to_string(plan.regime),
              makespan_for_load(plan, task.size_mb), plan.unit_makespan);

  std::printf("%-10s %10s %10s\n", "node", "load_MB", "finish_s");
  const double relay_load =
      (task.sequential_fraction + plan.relay_fraction) * task.size_mb;
  std::printf("%-10s %10.1f %10.3f\n", cluster.relay.id.c_str(), relay_load,
              relay_load * platform.relay_compute_time);
  for (std::size_t i = 0; i < platform.neighbor_count(); ++i) {
    const NeighborCost& n = platform.neighbors[i];
    const double load = plan.neighbor_fractions[i] * task.size_mb;
    const double finish = load * child_cost(n.compute_time, n.link_time, task.result_ratio);
    std::printf("%-10s %10.1f %10.3f\n", cluster.neighbors[i].id.c_str(), load, finish);
  }

  // Sizing: the relay alone delivers one MB in w0 seconds. How many of the
  // strongest neighbors does it take to hit 40% of that?
  const double t_req = 0.4 * platform.relay_compute_time;
  const SizingReport fleet =
      n_min(DeadlineQuery(t_req, platform, task.result_ratio));
  std::printf("\ndeadline %.5f s/MB: rate deficit %.2f", t_req, fleet.deficit);
  if (fleet.min_satellites)
    std::printf(", met with the %zu strongest neighbors\n", *fleet.min_satellites);
  else
    std::printf(", not reachable with this cluster\n");
  return 0;
}
