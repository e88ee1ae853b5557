#pragma once

// Physical clusters and their reduction to the normalized form the
// allocator consumes. A physical node carries engineering units (Flops/s
// compute speed, MB/s inter-satellite link bandwidth); normalization against
// a task's compute intensity (Flops per MB of input) turns those into
// seconds-per-MB cost coefficients:
//
//   w = compute_intensity / compute_speed,   z = 1 / bandwidth.
//
// Clusters come from three sources: the built-in reference topology, a
// cluster description file, or random sampling of normalized coefficients.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mpcc/core.hpp"
#include "mpcc/io.hpp"
#include "mpcc/random.hpp"

namespace mpcc {

struct PhysicalNode {
  std::string id;
  double compute_speed = 0.0;                // Flops per second
  std::optional<double> isl_bandwidth;       // MB per second; unset on the relay
};

// One relay plus the neighbors inside its ISL footprint.
struct Cluster {
  PhysicalNode relay;
  std::vector<PhysicalNode> neighbors;
  std::string label;
};

// Converts engineering units to per-unit-load times for one task family.
// compute_intensity is the task's Flops per MB of input.
inline NormalizedPlatform normalize(const Cluster& cluster, double compute_intensity) {
  detail::require(std::isfinite(compute_intensity) && compute_intensity > 0.0,
                  "normalize: compute_intensity must be positive and finite");
  auto check_speed = [](const PhysicalNode& node) {
    if (!(std::isfinite(node.compute_speed) && node.compute_speed > 0.0))
      throw std::domain_error("normalize: node '" + node.id +
                              "' has a nonpositive compute speed");
  };
  check_speed(cluster.relay);
  std::vector<NeighborCost> neighbors;
  neighbors.reserve(cluster.neighbors.size());
  for (const PhysicalNode& node : cluster.neighbors) {
    check_speed(node);
    if (!node.isl_bandwidth.has_value())
      throw std::domain_error("normalize: neighbor '" + node.id + "' has no ISL bandwidth");
    if (!(std::isfinite(*node.isl_bandwidth) && *node.isl_bandwidth > 0.0))
      throw std::domain_error("normalize: neighbor '" + node.id +
                              "' has a nonpositive ISL bandwidth");
    neighbors.emplace_back(compute_intensity / node.compute_speed, 1.0 / *node.isl_bandwidth);
  }
  return NormalizedPlatform(compute_intensity / cluster.relay.compute_speed,
                            std::move(neighbors));
}

// Draws a normalized platform directly: relay compute time first, then one
// (w, z) pair per neighbor, all uniform over the given ranges. The draw
// order is part of the reproducibility contract.
inline NormalizedPlatform sample_cluster(std::size_t n_neighbors, const Interval& w_range,
                                         const Interval& z_range, std::uint64_t seed) {
  detail::require(w_range.lo > 0.0, "sample_cluster: compute-time range must be positive");
  detail::require(z_range.lo >= 0.0, "sample_cluster: link-time range must be nonnegative");
  Rng rng(seed);
  const double w0 = rng.uniform(w_range);
  std::vector<NeighborCost> neighbors;
  neighbors.reserve(n_neighbors);
  for (std::size_t i = 0; i < n_neighbors; ++i) {
    const double w = rng.uniform(w_range);
    const double z = rng.uniform(z_range);
    neighbors.emplace_back(w, z);
  }
  return NormalizedPlatform(w0, std::move(neighbors));
}

// Uniformly rescales every ISL: factor 2 doubles all bandwidths (halves z),
// factor 0.5 halves them. Compute times are untouched, so this isolates the
// communication term.
inline NormalizedPlatform scale_bandwidth(const NormalizedPlatform& platform, double factor) {
  detail::require(std::isfinite(factor) && factor > 0.0,
                  "scale_bandwidth: factor must be positive and finite");
  std::vector<NeighborCost> neighbors;
  neighbors.reserve(platform.neighbor_count());
  for (const NeighborCost& n : platform.neighbors)
    neighbors.emplace_back(n.compute_time, n.link_time / factor);
  return NormalizedPlatform(platform.relay_compute_time, std::move(neighbors));
}

// Cluster description file. One node per line:
//
//   node <id> cs=<Flops/s> [bw=<MB/s>] [relay]
//
// '#' starts a comment. Exactly one node carries the relay flag; every
// other node needs a bw entry. Node order in the file is preserved.
inline Cluster parse_cluster_stream(std::istream& in, const std::string& name) {
  Cluster cluster;
  cluster.label = name;
  bool relay_seen = false;
  std::vector<std::string> seen_ids;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = ioutil::strip_comment(raw);
    if (line.empty()) continue;
    const auto tokens = ioutil::split_ws(line);
    if (tokens[0] != "node")
      throw ParseError(name, line_no, "expected a 'node' record, got '" + tokens[0] + "'");
    if (tokens.size() < 3)
      throw ParseError(name, line_no, "node record needs an id and a cs=<Flops/s> entry");

    PhysicalNode node;
    node.id = tokens[1];
    for (const std::string& id : seen_ids)
      if (id == node.id) throw ParseError(name, line_no, "duplicate node id '" + node.id + "'");
    seen_ids.push_back(node.id);

    bool is_relay = false;
    bool cs_seen = false;
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      const std::string& tok = tokens[i];
      if (tok == "relay") {
        is_relay = true;
        continue;
      }
      const auto eq = tok.find('=');
      if (eq == std::string::npos)
        throw ParseError(name, line_no, "unrecognized token '" + tok + "'");
      const std::string key = tok.substr(0, eq);
      const std::string value = tok.substr(eq + 1);
      if (key == "cs") {
        node.compute_speed = ioutil::parse_double(value, name, line_no, "cs");
        cs_seen = true;
      } else if (key == "bw") {
        node.isl_bandwidth = ioutil::parse_double(value, name, line_no, "bw");
      } else {
        throw ParseError(name, line_no, "unrecognized attribute '" + key + "'");
      }
    }
    if (!cs_seen)
      throw ParseError(name, line_no, "node '" + node.id + "' is missing its cs entry");
    if (!(std::isfinite(node.compute_speed) && node.compute_speed > 0.0))
      throw ParseError(name, line_no, "node '" + node.id + "' needs a positive compute speed");
    if (node.isl_bandwidth && !(*node.isl_bandwidth > 0.0))
      throw ParseError(name, line_no, "node '" + node.id + "' needs a positive bandwidth");

    if (is_relay) {
      if (relay_seen) throw ParseError(name, line_no, "second relay '" + node.id + "'");
      relay_seen = true;
      cluster.relay = std::move(node);
    } else {
      if (!node.isl_bandwidth)
        throw ParseError(name, line_no,
                         "neighbor '" + node.id + "' is missing its bw entry");
      cluster.neighbors.push_back(std::move(node));
    }
  }
  if (!relay_seen) throw ParseError(name, line_no, "no node carries the relay flag");
  return cluster;
}

inline Cluster parse_cluster(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return parse_cluster_stream(in, path);
}

// Built-in thirteen-node reference topology: one relay and twelve heterogeneous
// neighbors. Compute speeds span a 3.2x range and link bandwidths a 5.3x
// range, so normalized coefficients land in w ~ [0.02, 0.08] s/MB and
// z ~ [0.01, 0.06] s/MB for tasks near 1e8 Flops/MB.
inline const Cluster& reference_cluster() {
  static const Cluster cluster = [] {
    Cluster c;
    c.label = "reference-13";
    c.relay = PhysicalNode{"relay01", 2.4e9, std::nullopt};
    const std::pair<double, double> specs[] = {
        {3.6e9, 88.0}, {1.6e9, 30.0}, {2.8e9, 55.0}, {1.25e9, 18.0},
        {4.0e9, 95.0}, {2.0e9, 42.0}, {3.2e9, 76.0}, {1.4e9, 22.0},
        {2.6e9, 64.0}, {1.8e9, 35.0}, {3.0e9, 50.0}, {2.2e9, 27.0},
    };
    int k = 0;
    for (const auto& [cs, bw] : specs) {
      char id[8];
      std::snprintf(id, sizeof(id), "n%02d", ++k);
      c.neighbors.push_back(PhysicalNode{id, cs, bw});
    }
    return c;
  }();
  return cluster;
}

}  // namespace mpcc
