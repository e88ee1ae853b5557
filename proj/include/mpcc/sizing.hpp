#pragma once

// Constellation sizing: how many neighbor satellites a relay needs before a
// unit task can meet a response-time target. The relay alone serves at rate
// 1/w0; each recruited neighbor adds its effective contribution g = 1/c,
// where c is the neighbor's round-trip-inclusive cost per unit load. The
// minimum fleet is found by recruiting neighbors in descending order of g
// until the accumulated rate covers the deficit left by the relay.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <vector>

#include "mpcc/core.hpp"

namespace mpcc {

// Rate added to the cluster by one neighbor, per unit of divisible load.
inline double effective_contribution(double compute_time, double link_time,
                                     double result_ratio) {
  return 1.0 / child_cost(compute_time, link_time, result_ratio);
}

// Same contribution, but with the link given as a bandwidth-style rate
// (loads per second) instead of a per-load time.
inline double effective_contribution_from_rate(double compute_time, double link_rate,
                                               double result_ratio) {
  detail::require(std::isfinite(link_rate) && link_rate > 0.0,
                  "effective_contribution_from_rate: link_rate must be positive and finite");
  return effective_contribution(compute_time, 1.0 / link_rate, result_ratio);
}

// Service rate the neighbors must supply on top of the relay's own 1/w0 to
// finish a unit task within required_unit_time. Nonpositive means the relay
// meets the target alone.
inline double rate_deficit(double required_unit_time, double relay_compute_time) {
  detail::require(std::isfinite(required_unit_time) && required_unit_time > 0.0,
                  "rate_deficit: required_unit_time must be positive and finite");
  detail::require(std::isfinite(relay_compute_time) && relay_compute_time > 0.0,
                  "rate_deficit: relay_compute_time must be positive and finite");
  return 1.0 / required_unit_time - 1.0 / relay_compute_time;
}

// A sizing question: which subset of this platform's neighbors, if any,
// lets a unit task with the given result ratio finish by the deadline?
struct DeadlineQuery {
  double required_unit_time;  // seconds per MB, must be positive
  NormalizedPlatform platform;
  double result_ratio;  // beta in [0, 1]

  DeadlineQuery(double required_unit_time_, NormalizedPlatform platform_, double result_ratio_)
      : required_unit_time(required_unit_time_),
        platform(std::move(platform_)),
        result_ratio(result_ratio_) {
    detail::require(std::isfinite(required_unit_time) && required_unit_time > 0.0,
                    "DeadlineQuery: required_unit_time must be positive and finite");
    detail::require(std::isfinite(result_ratio) && result_ratio >= 0.0 && result_ratio <= 1.0,
                    "DeadlineQuery: result_ratio must lie in [0, 1]");
  }
};

// Everything n_min computes on the way to its answer, kept for reporting.
struct SizingReport {
  std::vector<double> contributions;      // g per neighbor, platform order
  std::vector<std::size_t> sorted_order;  // neighbor indices, descending g, ties stable
  std::vector<double> cumulative;         // prefix sums of g in sorted order
  double deficit = 0.0;                   // rate the neighbors must cover
  std::optional<std::size_t> min_satellites;  // empty when even all neighbors fall short
};

// Minimum number of neighbors that meets the deadline, recruiting the
// strongest contributors first. A nonpositive deficit needs zero neighbors;
// an uncoverable deficit leaves min_satellites empty.
inline SizingReport n_min(const DeadlineQuery& query) {
  SizingReport report;
  report.deficit = rate_deficit(query.required_unit_time, query.platform.relay_compute_time);

  report.contributions.reserve(query.platform.neighbor_count());
  for (const NeighborCost& n : query.platform.neighbors)
    report.contributions.push_back(
        effective_contribution(n.compute_time, n.link_time, query.result_ratio));

  report.sorted_order.resize(report.contributions.size());
  std::iota(report.sorted_order.begin(), report.sorted_order.end(), std::size_t{0});
  std::stable_sort(report.sorted_order.begin(), report.sorted_order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return report.contributions[a] > report.contributions[b];
                   });

  report.cumulative.reserve(report.sorted_order.size());
  double sum = 0.0;
  for (std::size_t idx : report.sorted_order) {
    sum += report.contributions[idx];
    report.cumulative.push_back(sum);
  }

  if (report.deficit <= 0.0) {
    report.min_satellites = 0;
    return report;
  }
  for (std::size_t k = 0; k < report.cumulative.size(); ++k) {
    if (report.cumulative[k] >= report.deficit) {
      report.min_satellites = k + 1;
      return report;
    }
  }
  return report;  // min_satellites stays empty
}

// True when some neighbor subset (possibly all or none) meets the deadline.
// Defined through n_min so the two can never disagree on boundary instances.
inline bool deadline_feasible(const DeadlineQuery& query) {
  return n_min(query).min_satellites.has_value();
}

enum class ServiceRegime {
  ComputationLimited,    // compute time dwarfs the round trip
  CommunicationLimited,  // round trip dwarfs the compute time
  Balanced
};

inline const char* to_string(ServiceRegime r) {
  switch (r) {
    case ServiceRegime::ComputationLimited:
      return "computation-limited";
    case ServiceRegime::CommunicationLimited:
      return "communication-limited";
    default:
      return "balanced";
  }
}

// Classifies one neighbor's service by which cost term dominates. A term
// dominates when it is at least dominance_ratio times the other; anything
// in between is balanced.
inline ServiceRegime regime_classify(double compute_time, double link_time, double result_ratio,
                                     double dominance_ratio = 10.0) {
  child_cost(compute_time, link_time, result_ratio);  // reuse the argument checks
  detail::require(std::isfinite(dominance_ratio) && dominance_ratio >= 1.0,
                  "regime_classify: dominance_ratio must be at least 1");
  const double round_trip = (1.0 + result_ratio) * link_time;
  if (compute_time >= dominance_ratio * round_trip) return ServiceRegime::ComputationLimited;
  if (round_trip >= dominance_ratio * compute_time) return ServiceRegime::CommunicationLimited;
  return ServiceRegime::Balanced;
}

}  // namespace mpcc
