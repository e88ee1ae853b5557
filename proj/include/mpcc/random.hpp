#pragma once

// Deterministic random sampling utilities shared by the platform, workload,
// and simulation modules. All mappings from raw engine output to doubles are
// spelled out here rather than delegated to std::*_distribution, because the
// standard distributions are allowed to differ between library
// implementations and this project promises bit-identical streams for a
// given seed on any conforming platform.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace mpcc {

// Closed interval [lo, hi]. Degenerate (lo == hi) intervals are allowed and
// sample deterministically.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(std::isfinite(lo) && std::isfinite(hi)))
      throw std::domain_error("Interval: bounds must be finite");
    if (lo > hi) throw std::domain_error("Interval: lower bound exceeds upper bound");
  }

  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

namespace detail {

// SplitMix64 finalizer. Used to decorrelate user-facing seeds from engine
// state and to derive independent per-purpose streams from one master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// Derives the seed of an independent sub-stream from a master seed. Distinct
// stream ids give statistically unrelated sequences, so one experiment seed
// can fan out into platform, workload, and arrival streams that do not alias
// even when consumed at different rates.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream_id) {
  return detail::splitmix64(detail::splitmix64(seed) + stream_id);
}

// Seeded generator with portable draw semantics. Each draw consumes exactly
// one 64-bit engine word (two for nothing; the mappings below are all
// single-word), which keeps interleaved consumers reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(detail::splitmix64(seed)) {}

  // Uniform double in [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform draw from [iv.lo, iv.hi).
  double uniform(const Interval& iv) {
    return iv.lo + uniform01() * iv.width();
  }

  // Log-uniform draw: uniform in log space, so each decade of [lo, hi] is
  // equally likely. Requires a strictly positive interval.
  double log_uniform(const Interval& iv) {
    if (!(iv.lo > 0.0))
      throw std::domain_error("log_uniform: interval must be strictly positive");
    if (iv.lo == iv.hi) return iv.lo;
    const double u = uniform01();
    return std::exp(std::log(iv.lo) + u * (std::log(iv.hi) - std::log(iv.lo)));
  }

  // Exponential variate with the given rate (mean 1/rate).
  double exponential(double rate) {
    if (!(std::isfinite(rate) && rate > 0.0))
      throw std::domain_error("exponential: rate must be positive and finite");
    // -log1p(-u) is exact near u = 0 and never sees log(0) since u < 1.
    return -std::log1p(-uniform01()) / rate;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mpcc
