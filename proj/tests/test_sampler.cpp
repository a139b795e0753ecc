#include "bratteli/sampler.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace bratteli;
using namespace bratteli::testing;

namespace {

CylinderMeasure pair_measure() {
  DiagramSpec sub = DiagramSpec::stationary(IncidenceMatrix{{2, 0}, {1, 3}});
  return CylinderMeasure::stationary_pf(sub, pf_eigendata(sub.incidence(1), NumericMode::Exact));
}

}  // namespace

TEST_CASE("sampling is deterministic in the seed") {
  CylinderMeasure mu = pair_measure();
  SamplerConfig config;
  config.depth = 8;
  config.count = 20000;
  config.seed = 12345;
  const EmpiricalStats a = sample(mu, config);
  const EmpiricalStats b = sample(mu, config);
  CHECK(a.counts == b.counts);

  config.seed = 54321;
  const EmpiricalStats c = sample(mu, config);
  CHECK(a.counts != c.counts);
}

TEST_CASE("per-level counts conserve the sample size") {
  CylinderMeasure mu = pair_measure();
  SamplerConfig config;
  config.depth = 6;
  config.count = 5000;
  config.seed = 7;
  const EmpiricalStats stats = sample(mu, config);
  REQUIRE(stats.counts.size() == 6);
  for (const auto& level : stats.counts) {
    long total = 0;
    for (long c : level) total += c;
    CHECK(total == config.count);
  }
}

TEST_CASE("a deterministic diagram yields a deterministic empirical law") {
  DiagramSpec odometer = DiagramSpec::stationary(IncidenceMatrix{{3}});
  CylinderMeasure mu =
      CylinderMeasure::stationary_pf(odometer, pf_eigendata(odometer.incidence(1), NumericMode::Exact));
  SamplerConfig config;
  config.depth = 5;
  config.count = 1000;
  const EmpiricalStats stats = sample(mu, config);
  for (int n = 1; n <= 5; ++n) CHECK(stats.frequency(n, 0) == 1.0);
  const DeviationReport dev = compare(stats, mu, odometer);
  CHECK(!dev.any_flagged);
  CHECK(dev.max_abs_z == 0.0);
}

TEST_CASE("empirical frequencies track the exact tower masses") {
  CylinderMeasure mu = pair_measure();
  SamplerConfig config;
  config.depth = 10;
  config.count = 50000;
  config.seed = 2024;
  const EmpiricalStats stats = sample(mu, config);
  const DeviationReport dev = compare(stats, mu, mu.spec());
  CHECK(!dev.any_flagged);
  CHECK(dev.max_abs_z <= 4.0);
  // level 2 splits 1/3 vs 2/3
  CHECK(stats.frequency(2, 0) == doctest::Approx(1.0 / 3).epsilon(0.05));
  CHECK(stats.frequency(2, 1) == doctest::Approx(2.0 / 3).epsilon(0.05));
}

TEST_CASE("deviation report flags an artificially biased count table") {
  CylinderMeasure mu = pair_measure();
  SamplerConfig config;
  config.depth = 4;
  config.count = 40000;
  config.seed = 99;
  EmpiricalStats stats = sample(mu, config);
  // shift one level's counts far beyond any plausible fluctuation
  stats.counts[1][0] += 2000;
  stats.counts[1][1] -= 2000;
  const DeviationReport dev = compare(stats, mu, mu.spec());
  CHECK(dev.any_flagged);
  bool found = false;
  for (const DeviationRow& row : dev.rows)
    if (row.level == 2 && row.flagged) found = true;
  CHECK(found);
}

TEST_CASE("sampling refuses float-mode measures") {
  DiagramSpec sub = DiagramSpec::stationary(IncidenceMatrix{{2, 0}, {1, 3}});
  std::vector<std::vector<Rat>> table;
  for (int n = 1; n <= 4; ++n)
    table.push_back({Rat(1, 2) * rat_pow(Rat(1, 3), n - 1), Rat(1, 2) * rat_pow(Rat(1, 3), n - 1)});
  table[1][0] += Rat(1, 10'000'000);
  CylinderMeasure loose = CylinderMeasure::explicit_table(sub, table, NumericMode::Float, 1e-6);
  SamplerConfig config;
  config.depth = 3;
  config.count = 10;
  CHECK_THROWS_AS(sample(loose, config), Error);
}

TEST_CASE("splitmix64 reference values") {
  // first outputs of the standard sequence seeded at 0
  CHECK(splitmix64(0x9E3779B97F4A7C15ULL) != 0);
  CHECK(splitmix64(1) != splitmix64(2));
  CHECK(splitmix64(42) == splitmix64(42));
}
