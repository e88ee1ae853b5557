// Calibrated admission-control run: find the arrival rate that offers the
// cluster a chosen load, simulate the resulting Poisson stream, and watch
// blocking respond as the offered load doubles and doubles again.

#include <cstdio>

#include "mpcc/constellation.hpp"
#include "mpcc/random.hpp"
#include "mpcc/rt_sim.hpp"
#include "mpcc/workload.hpp"

int main() {
  using namespace mpcc;

  const RtTaskClass& cls = find_rt_class("B");
  const double base_load_mb = 100.0;
  const double compute_intensity = 1e8;  // Flops per MB
  const NormalizedPlatform platform = normalize(reference_cluster(), compute_intensity);
  const auto sampler = [&](Rng& rng) {
    return sample_rt_task(cls, base_load_mb, compute_intensity, rng);
  };

  std::printf("class %s (divisible %.2f, result ratio %.2f) on %zu neighbors\n\n",
              cls.name.c_str(), cls.divisible_fraction, cls.result_ratio,
              platform.neighbor_count());
  const std::uint64_t seed = 7;
  for (const double offered : {0.4, 0.8, 1.6}) {
    Rng pilot_rng(derive_stream(seed, 1));
    const double lambda = calibrate_lambda(offered, sampler, platform, 2000, pilot_rng);
    const SimStats stats =
        run_simulation(platform, sampler, derive_stream(seed, 2), AdmissionPolicy{},
                       ArrivalProcess(lambda, 20000, derive_stream(seed, 3)));
    std::printf(
        "offered load %.1f: lambda %6.3f/s, blocked %5zu of %zu (%5.1f%%), "
        "mean admitted latency %.2f s\n",
        offered, lambda, stats.blocked, stats.arrivals,
        100.0 * stats.blocking_probability, stats.mean_admitted_latency);
  }
  return 0;
}
