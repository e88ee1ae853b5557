#pragma once

// Closed-form divisible-load allocation for a relay-centred satellite
// cluster in which the relay exchanges data with every neighbor
// concurrently (multi-port model). All quantities here are normalized per
// unit of load: times are seconds per MB, so scaling the task size scales
// every schedule time linearly.
//
// The model: a task of unit size arrives at the relay. A sequential fraction
// f must run on the relay itself; the remaining 1 - f is arbitrarily
// divisible between the relay and its neighbors. Shipping load to a
// neighbor costs link_time per MB each way, results come back smaller by a
// factor beta, and every byte of a neighbor's share is charged the full
// round trip. The optimum equalizes finish times where possible (Case 1);
// when the mandatory relay work already exceeds that equal finish time, the
// relay takes none of the divisible load and the optimum splits it among
// the neighbors by their effective rates (Case 2).

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mpcc {

namespace detail {
inline void require(bool ok, const char* msg) {
  if (!ok) throw std::domain_error(msg);
}
}  // namespace detail

// Raised when a solver is invoked outside the regime it is valid for.
class RegimeError : public std::domain_error {
 public:
  explicit RegimeError(const std::string& what) : std::domain_error(what) {}
};

// Per-unit-load cost of one neighbor as seen from the relay.
struct NeighborCost {
  double compute_time;  // seconds per MB of assigned load
  double link_time;     // one-way transfer seconds per MB; 0 models an ideal link

  NeighborCost(double compute_time_, double link_time_)
      : compute_time(compute_time_), link_time(link_time_) {
    detail::require(std::isfinite(compute_time) && compute_time > 0.0,
                    "NeighborCost: compute_time must be positive and finite");
    detail::require(std::isfinite(link_time) && link_time >= 0.0,
                    "NeighborCost: link_time must be nonnegative and finite");
  }
};

// A cluster reduced to what the allocator needs: the relay's own compute
// time per unit load and the cost pair of every reachable neighbor.
struct NormalizedPlatform {
  double relay_compute_time;  // seconds per MB on the relay
  std::vector<NeighborCost> neighbors;

  NormalizedPlatform(double relay_compute_time_, std::vector<NeighborCost> neighbors_)
      : relay_compute_time(relay_compute_time_), neighbors(std::move(neighbors_)) {
    detail::require(std::isfinite(relay_compute_time) && relay_compute_time > 0.0,
                    "NormalizedPlatform: relay_compute_time must be positive and finite");
  }

  std::size_t neighbor_count() const { return neighbors.size(); }
};

// How a task divides: the sequential fraction is pinned to the relay, the
// rest may be distributed. beta is the output-to-input size ratio of the
// result each neighbor sends back.
struct DivisibilitySpec {
  double sequential_fraction;  // f in [0, 1]
  double result_ratio;         // beta in [0, 1]

  DivisibilitySpec(double sequential_fraction_, double result_ratio_)
      : sequential_fraction(sequential_fraction_), result_ratio(result_ratio_) {
    detail::require(std::isfinite(sequential_fraction) && sequential_fraction >= 0.0 &&
                        sequential_fraction <= 1.0,
                    "DivisibilitySpec: sequential_fraction must lie in [0, 1]");
    detail::require(std::isfinite(result_ratio) && result_ratio >= 0.0 && result_ratio <= 1.0,
                    "DivisibilitySpec: result_ratio must lie in [0, 1]");
  }

  double divisible_fraction() const { return 1.0 - sequential_fraction; }
};

enum class Regime {
  Case1,  // relay shares the divisible load; all finish times equal
  Case2   // mandatory relay work dominates; divisible load goes to neighbors only
};

inline const char* to_string(Regime r) {
  return r == Regime::Case1 ? "Case1" : "Case2";
}

// Optimal split of a unit task. Fractions sum to 1 - sequential_fraction
// plus the relay's mandatory share, i.e. total work is conserved.
struct Allocation {
  double relay_fraction = 0.0;             // divisible share kept by the relay
  std::vector<double> neighbor_fractions;  // divisible share per neighbor, platform order
  double unit_makespan = 0.0;              // seconds per MB of task size
  Regime regime = Regime::Case1;
};

// Effective time a neighbor needs per unit of assigned load, counting the
// forward transfer, the computation, and the return of a result beta times
// the input size: w + (1 + beta) * z.
inline double child_cost(double compute_time, double link_time, double result_ratio) {
  detail::require(std::isfinite(compute_time) && compute_time > 0.0,
                  "child_cost: compute_time must be positive and finite");
  detail::require(std::isfinite(link_time) && link_time >= 0.0,
                  "child_cost: link_time must be nonnegative and finite");
  detail::require(std::isfinite(result_ratio) && result_ratio >= 0.0 && result_ratio <= 1.0,
                  "child_cost: result_ratio must lie in [0, 1]");
  return compute_time + (1.0 + result_ratio) * link_time;
}

// Total service rate of the cluster under equal finish times: the relay
// contributes 1/w0 and each neighbor 1/c_i. The equal finish time of a unit
// task is the reciprocal of this sum.
inline double aggregate_rate(const NormalizedPlatform& platform, const DivisibilitySpec& spec) {
  double rate = 1.0 / platform.relay_compute_time;
  for (const NeighborCost& n : platform.neighbors)
    rate += 1.0 / child_cost(n.compute_time, n.link_time, spec.result_ratio);
  return rate;
}

// True when the equal-finish solution leaves the relay a nonnegative share
// of the divisible load, i.e. f <= t* / w0. Boundary instances (equality)
// are feasible with a relay share of exactly zero.
//
// Note: the comparison reuses the exact expression solve_case1 evaluates, so
// feasible here implies solve_case1 succeeds, with no rounding gap between
// the predicate and the solver.
inline bool root_share_feasible(const NormalizedPlatform& platform,
                                const DivisibilitySpec& spec) {
  const double t_star = 1.0 / aggregate_rate(platform, spec);
  return spec.sequential_fraction <= t_star / platform.relay_compute_time;
}

// Equal-finish optimum: every node, relay included, finishes at
// t* = 1 / aggregate_rate. The relay's divisible share is whatever remains
// of its busy window after the mandatory fraction.
inline Allocation solve_case1(const NormalizedPlatform& platform, const DivisibilitySpec& spec) {
  const double t_star = 1.0 / aggregate_rate(platform, spec);
  const double relay_fraction =
      t_star / platform.relay_compute_time - spec.sequential_fraction;
  if (relay_fraction < 0.0)
    throw RegimeError(
        "solve_case1: sequential fraction exceeds the relay's equal-finish window; "
        "this instance belongs to Case 2");

  Allocation a;
  a.regime = Regime::Case1;
  a.unit_makespan = t_star;
  a.relay_fraction = relay_fraction;
  a.neighbor_fractions.reserve(platform.neighbor_count());
  for (const NeighborCost& n : platform.neighbors)
    a.neighbor_fractions.push_back(
        t_star / child_cost(n.compute_time, n.link_time, spec.result_ratio));
  return a;
}

// Root-saturated optimum: the relay runs only the sequential fraction and
// the divisible load is split among neighbors proportionally to their rates
// g_i = 1/c_i. The makespan is the larger of the relay's mandatory work and
// the neighbors' common finish time (1 - f) / sum(g_i).
inline Allocation solve_case2(const NormalizedPlatform& platform, const DivisibilitySpec& spec) {
  const double divisible = spec.divisible_fraction();
  if (platform.neighbor_count() == 0 && divisible > 0.0)
    throw std::domain_error(
        "solve_case2: no neighbors to host the divisible load and f < 1");

  std::vector<double> rates;
  rates.reserve(platform.neighbor_count());
  double rate_sum = 0.0;
  for (const NeighborCost& n : platform.neighbors) {
    const double g = 1.0 / child_cost(n.compute_time, n.link_time, spec.result_ratio);
    rates.push_back(g);
    rate_sum += g;
  }

  Allocation a;
  a.regime = Regime::Case2;
  a.relay_fraction = 0.0;
  a.neighbor_fractions.reserve(rates.size());
  for (double g : rates) a.neighbor_fractions.push_back(divisible * (g / rate_sum));

  const double relay_busy = spec.sequential_fraction * platform.relay_compute_time;
  const double neighbor_busy = rates.empty() ? 0.0 : divisible / rate_sum;
  a.unit_makespan = std::max(relay_busy, neighbor_busy);
  return a;
}

// Optimal allocation for any valid instance: Case 1 when the relay can take
// a nonnegative divisible share, Case 2 otherwise.
inline Allocation allocate(const NormalizedPlatform& platform, const DivisibilitySpec& spec) {
  if (root_share_feasible(platform, spec)) return solve_case1(platform, spec);
  return solve_case2(platform, spec);
}

// Schedule length for a concrete task size. Times in Allocation are per MB,
// so the makespan is linear in the load.
inline double makespan_for_load(const Allocation& allocation, double load_mb) {
  detail::require(std::isfinite(load_mb) && load_mb >= 0.0,
                  "makespan_for_load: load must be nonnegative and finite");
  return load_mb * allocation.unit_makespan;
}

}  // namespace mpcc
