// Unit tests for the closed-form allocator. Expected numbers are frozen from
// hand-worked instances small enough to solve on paper.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mpcc/core.hpp"
#include "mpcc/random.hpp"

using namespace mpcc;

namespace {

NormalizedPlatform two_symmetric_children() {
  return NormalizedPlatform(1.0, {NeighborCost(2.0, 1.0), NeighborCost(2.0, 1.0)});
}

// Random but reproducible instance for property tests.
struct RandomInstance {
  NormalizedPlatform platform;
  DivisibilitySpec spec;
};

RandomInstance draw_instance(Rng& rng, bool allow_large_f) {
  const Interval w_range(0.02, 0.08);
  const Interval z_range(0.01, 0.06);
  const double w0 = rng.uniform(w_range);
  const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform01() * 12.0);
  std::vector<NeighborCost> neighbors;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = rng.uniform(w_range);
    const double z = rng.uniform(z_range);
    neighbors.emplace_back(w, z);
  }
  const double beta = rng.uniform(Interval(0.0, 0.5));
  const double f = allow_large_f ? rng.uniform01() : rng.uniform(Interval(0.0, 0.02));
  return RandomInstance{NormalizedPlatform(w0, std::move(neighbors)),
                        DivisibilitySpec(f, beta)};
}

double relay_finish(const NormalizedPlatform& p, const DivisibilitySpec& s,
                    const Allocation& a) {
  return (s.sequential_fraction + a.relay_fraction) * p.relay_compute_time;
}

}  // namespace

TEST(ChildCost, MatchesHandComputedValues) {
  EXPECT_DOUBLE_EQ(child_cost(2.0, 1.0, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(child_cost(1.0, 0.0, 0.5), 1.0);
  EXPECT_NEAR(child_cost(0.05, 0.03, 0.2), 0.086, 1e-15);
}

TEST(ChildCost, RejectsInvalidArguments) {
  EXPECT_THROW(child_cost(0.0, 1.0, 0.0), std::domain_error);
  EXPECT_THROW(child_cost(-1.0, 1.0, 0.0), std::domain_error);
  EXPECT_THROW(child_cost(1.0, -0.1, 0.0), std::domain_error);
  EXPECT_THROW(child_cost(1.0, 0.1, -0.1), std::domain_error);
  EXPECT_THROW(child_cost(1.0, 0.1, 1.5), std::domain_error);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(child_cost(inf, 0.1, 0.0), std::domain_error);
  EXPECT_THROW(child_cost(1.0, std::nan(""), 0.0), std::domain_error);
}

TEST(TypeInvariants, ConstructorsValidate) {
  EXPECT_THROW(NeighborCost(0.0, 0.0), std::domain_error);
  EXPECT_THROW(NeighborCost(1.0, -1.0), std::domain_error);
  EXPECT_THROW(NormalizedPlatform(0.0, {}), std::domain_error);
  EXPECT_THROW(NormalizedPlatform(-2.0, {}), std::domain_error);
  EXPECT_THROW(DivisibilitySpec(-0.1, 0.0), std::domain_error);
  EXPECT_THROW(DivisibilitySpec(1.1, 0.0), std::domain_error);
  EXPECT_THROW(DivisibilitySpec(0.5, -0.1), std::domain_error);
  EXPECT_THROW(DivisibilitySpec(0.5, 1.5), std::domain_error);
  EXPECT_NO_THROW(DivisibilitySpec(0.0, 0.0));
  EXPECT_NO_THROW(DivisibilitySpec(1.0, 1.0));
}

TEST(AggregateRate, MatchesHandComputedValues) {
  EXPECT_DOUBLE_EQ(aggregate_rate(two_symmetric_children(), DivisibilitySpec(0.0, 1.0)), 1.5);
  EXPECT_DOUBLE_EQ(
      aggregate_rate(NormalizedPlatform(2.0, {NeighborCost(2.0, 0.0)}), DivisibilitySpec(0.0, 0.0)),
      1.0);
  EXPECT_DOUBLE_EQ(
      aggregate_rate(NormalizedPlatform(0.5, {NeighborCost(1.0, 0.0)}), DivisibilitySpec(0.0, 0.3)),
      3.0);
}

TEST(Case1, SymmetricExample) {
  const auto platform = two_symmetric_children();
  const DivisibilitySpec spec(0.0, 1.0);
  ASSERT_TRUE(root_share_feasible(platform, spec));
  const Allocation a = solve_case1(platform, spec);
  EXPECT_EQ(a.regime, Regime::Case1);
  EXPECT_NEAR(a.unit_makespan, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(a.relay_fraction, 2.0 / 3.0, 1e-15);
  ASSERT_EQ(a.neighbor_fractions.size(), 2u);
  EXPECT_NEAR(a.neighbor_fractions[0], 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(a.neighbor_fractions[1], 1.0 / 6.0, 1e-15);
}

TEST(Case1, BoundarySequentialFractionGivesExactlyZeroRelayShare) {
  const auto platform = two_symmetric_children();
  // Construct f on the feasibility boundary using the same expression the
  // solver evaluates, so the relay share cancels exactly in floating point.
  const double t_star = 1.0 / aggregate_rate(platform, DivisibilitySpec(0.0, 1.0));
  const double f_boundary = t_star / platform.relay_compute_time;
  const DivisibilitySpec spec(f_boundary, 1.0);
  ASSERT_TRUE(root_share_feasible(platform, spec));
  const Allocation a = solve_case1(platform, spec);
  EXPECT_EQ(a.relay_fraction, 0.0);
  EXPECT_EQ(a.regime, Regime::Case1);
}

TEST(Case1, ThrowsRegimeErrorWhenRelayShareWouldBeNegative) {
  const auto platform = two_symmetric_children();
  const DivisibilitySpec spec(0.7, 1.0);  // boundary is 2/3
  EXPECT_FALSE(root_share_feasible(platform, spec));
  EXPECT_THROW(solve_case1(platform, spec), RegimeError);
}

TEST(Case2, RootSaturatedExample) {
  const NormalizedPlatform platform(1.0, {NeighborCost(1.0, 0.0)});
  const DivisibilitySpec spec(0.9, 0.0);
  const Allocation a = solve_case2(platform, spec);
  EXPECT_EQ(a.regime, Regime::Case2);
  EXPECT_EQ(a.relay_fraction, 0.0);
  ASSERT_EQ(a.neighbor_fractions.size(), 1u);
  EXPECT_NEAR(a.neighbor_fractions[0], 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(a.unit_makespan, 0.9);
}

TEST(Case2, FullySequentialTaskRunsOnRelayAlone) {
  const NormalizedPlatform platform(0.7, {NeighborCost(2.0, 1.0)});
  const Allocation a = solve_case2(platform, DivisibilitySpec(1.0, 0.2));
  EXPECT_EQ(a.relay_fraction, 0.0);
  EXPECT_EQ(a.neighbor_fractions[0], 0.0);
  EXPECT_DOUBLE_EQ(a.unit_makespan, 0.7);
}

TEST(Case2, NoNeighborsWithDivisibleLoadIsAnError) {
  const NormalizedPlatform platform(1.0, {});
  EXPECT_THROW(solve_case2(platform, DivisibilitySpec(0.5, 0.0)), std::domain_error);
  // f = 1 leaves nothing to distribute, so the empty cluster is fine.
  EXPECT_NO_THROW(solve_case2(platform, DivisibilitySpec(1.0, 0.0)));
}

TEST(Allocate, LoneRelayTakesEverything) {
  const NormalizedPlatform platform(2.0, {});
  const Allocation a = allocate(platform, DivisibilitySpec(0.0, 0.0));
  EXPECT_EQ(a.regime, Regime::Case1);
  EXPECT_DOUBLE_EQ(a.relay_fraction, 1.0);
  EXPECT_DOUBLE_EQ(a.unit_makespan, 2.0);
}

TEST(Allocate, SelectsRegimeByFeasibility) {
  const auto platform = two_symmetric_children();
  EXPECT_EQ(allocate(platform, DivisibilitySpec(0.5, 1.0)).regime, Regime::Case1);
  EXPECT_EQ(allocate(platform, DivisibilitySpec(0.7, 1.0)).regime, Regime::Case2);
}

TEST(Allocate, EqualFinishTimesInCase1) {
  Rng rng(20260819);
  for (int trial = 0; trial < 500; ++trial) {
    const RandomInstance inst = draw_instance(rng, /*allow_large_f=*/false);
    const Allocation a = allocate(inst.platform, inst.spec);
    ASSERT_EQ(a.regime, Regime::Case1);
    const double t = a.unit_makespan;
    double lo = relay_finish(inst.platform, inst.spec, a);
    double hi = lo;
    for (std::size_t i = 0; i < inst.platform.neighbor_count(); ++i) {
      const NeighborCost& n = inst.platform.neighbors[i];
      const double finish =
          a.neighbor_fractions[i] * child_cost(n.compute_time, n.link_time, inst.spec.result_ratio);
      lo = std::min(lo, finish);
      hi = std::max(hi, finish);
    }
    EXPECT_LE(hi - lo, 1e-12 * t);
    EXPECT_NEAR(hi, t, 1e-12 * t);
  }
}

TEST(Allocate, ConservesTotalLoad) {
  Rng rng(77001);
  for (int trial = 0; trial < 1000; ++trial) {
    const RandomInstance inst = draw_instance(rng, /*allow_large_f=*/true);
    const Allocation a = allocate(inst.platform, inst.spec);
    double assigned = a.relay_fraction;
    for (double x : a.neighbor_fractions) {
      EXPECT_GE(x, 0.0);
      assigned += x;
    }
    EXPECT_GE(a.relay_fraction, 0.0);
    EXPECT_NEAR(assigned, inst.spec.divisible_fraction(), 1e-12);
  }
}

TEST(Allocate, Case1NeverLosesToTheRootSaturatedSplit) {
  // Whenever the equal-finish solution is feasible, its makespan is no worse
  // than handing all divisible load to the neighbors.
  Rng rng(424242);
  for (int trial = 0; trial < 500; ++trial) {
    const RandomInstance inst = draw_instance(rng, /*allow_large_f=*/true);
    if (!root_share_feasible(inst.platform, inst.spec)) continue;
    const double t1 = solve_case1(inst.platform, inst.spec).unit_makespan;
    const double t2 = solve_case2(inst.platform, inst.spec).unit_makespan;
    EXPECT_LE(t1, t2 * (1.0 + 1e-12));
  }
}

TEST(Allocate, MakespanIncreasesWithResultRatio) {
  // Bigger results mean longer round trips on every link with z > 0.
  const NormalizedPlatform platform(
      0.04, {NeighborCost(0.05, 0.02), NeighborCost(0.03, 0.04), NeighborCost(0.06, 0.01)});
  double previous = 0.0;
  for (double beta : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}) {
    const double t = allocate(platform, DivisibilitySpec(0.0, beta)).unit_makespan;
    EXPECT_GT(t, previous);
    previous = t;
  }
}

TEST(Allocate, ContinuousAcrossTheRegimeBoundary) {
  const auto platform = two_symmetric_children();
  const double t_star = 1.0 / aggregate_rate(platform, DivisibilitySpec(0.0, 1.0));
  const double f_crit = t_star / platform.relay_compute_time;
  const double eps = 1e-9;
  const Allocation below = allocate(platform, DivisibilitySpec(f_crit - eps, 1.0));
  const Allocation above = allocate(platform, DivisibilitySpec(f_crit + eps, 1.0));
  EXPECT_EQ(below.regime, Regime::Case1);
  EXPECT_EQ(above.regime, Regime::Case2);
  EXPECT_NEAR(below.unit_makespan, above.unit_makespan, 10.0 * eps);
  for (std::size_t i = 0; i < 2; ++i)
    EXPECT_NEAR(below.neighbor_fractions[i], above.neighbor_fractions[i], 10.0 * eps);
  EXPECT_NEAR(below.relay_fraction, 0.0, 10.0 * eps);
}

TEST(Allocate, NeighborOrderIsPreserved) {
  const NormalizedPlatform forward(0.04, {NeighborCost(0.02, 0.01), NeighborCost(0.08, 0.06)});
  const NormalizedPlatform reversed(0.04, {NeighborCost(0.08, 0.06), NeighborCost(0.02, 0.01)});
  const DivisibilitySpec spec(0.1, 0.2);
  const Allocation a = allocate(forward, spec);
  const Allocation b = allocate(reversed, spec);
  EXPECT_DOUBLE_EQ(a.unit_makespan, b.unit_makespan);
  EXPECT_DOUBLE_EQ(a.neighbor_fractions[0], b.neighbor_fractions[1]);
  EXPECT_DOUBLE_EQ(a.neighbor_fractions[1], b.neighbor_fractions[0]);
  EXPECT_GT(a.neighbor_fractions[0], a.neighbor_fractions[1]);
}

TEST(MakespanForLoad, LinearInLoadAndExactForPowerOfTwoScaling) {
  const auto platform = two_symmetric_children();
  const Allocation a = allocate(platform, DivisibilitySpec(0.0, 1.0));
  const double base = makespan_for_load(a, 375.0);
  EXPECT_EQ(makespan_for_load(a, 750.0), 2.0 * base);
  EXPECT_EQ(makespan_for_load(a, 1500.0), 4.0 * base);
  EXPECT_EQ(makespan_for_load(a, 0.0), 0.0);
  EXPECT_THROW(makespan_for_load(a, -1.0), std::domain_error);
}

TEST(Rng, StreamsAreReproducibleAndStreamIdsDecorrelate) {
  Rng a(123), b(123), c(124);
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform01();
    EXPECT_EQ(x, b.uniform01());
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_NE(c.uniform01(), Rng(123).uniform01());
  EXPECT_NE(derive_stream(1, 0), derive_stream(1, 1));
  EXPECT_NE(derive_stream(1, 0), derive_stream(2, 0));
  EXPECT_EQ(derive_stream(42, 7), derive_stream(42, 7));
}

TEST(Rng, LogUniformStaysInsideTheIntervalAndHandlesDegenerateRanges) {
  Rng rng(5);
  const Interval iv(1e2, 1e4);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.log_uniform(iv);
    EXPECT_GE(x, iv.lo);
    EXPECT_LE(x, iv.hi);
  }
  EXPECT_EQ(rng.log_uniform(Interval(3.5, 3.5)), 3.5);
  EXPECT_THROW(rng.log_uniform(Interval(0.0, 1.0)), std::domain_error);
  EXPECT_THROW(Interval(2.0, 1.0), std::domain_error);
}

TEST(Rng, ExponentialHasTheRequestedMean) {
  Rng rng(99);
  const double rate = 2.5;
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += rng.exponential(rate);
  EXPECT_NEAR(sum / n, 1.0 / rate, 5e-3);
  EXPECT_THROW(rng.exponential(0.0), std::domain_error);
  EXPECT_THROW(rng.exponential(-1.0), std::domain_error);
}
