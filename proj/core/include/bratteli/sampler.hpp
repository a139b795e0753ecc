/// @file sampler.hpp
/// @brief Monte Carlo cross-check: sample paths under a cylinder measure and
///        compare empirical tower frequencies against exact values.

#pragma once

#include "bratteli/measure.hpp"

#include <cstdint>
#include <vector>

namespace bratteli {

struct SamplerConfig {
  int depth = 10;
  long count = 100000;
  std::uint64_t seed = 0;
  long chunk_size = 4096;  // deterministic merge granularity
};

struct EmpiricalStats {
  int depth = 0;
  long count = 0;
  std::uint64_t seed = 0;
  /// counts[n-1][v]: paths visiting vertex v at level n. Each level's counts
  /// sum to `count` exactly.
  std::vector<std::vector<long>> counts;

  double frequency(int n, int v) const {
    return static_cast<double>(counts[static_cast<size_t>(n) - 1][static_cast<size_t>(v)]) /
           static_cast<double>(count);
  }
};

/// Draws `count` paths of the measure's diagram to `depth` levels. The
/// per-vertex edge distributions are exact rationals converted to integer
/// threshold tables over a common denominator, so the sampled law is exactly
/// the intended one. Deterministic given the seed; chunked sub-streams derive
/// their seeds from (seed, chunk index) via splitmix64.
EmpiricalStats sample(const CylinderMeasure& mu, const SamplerConfig& config);

struct DeviationRow {
  int level = 0;
  int vertex = 0;
  double exact = 0.0;
  double observed = 0.0;
  double stderr_ = 0.0;
  double z = 0.0;
  bool flagged = false;  // |z| > 4
};

struct DeviationReport {
  std::vector<DeviationRow> rows;
  double max_abs_z = 0.0;
  bool any_flagged = false;
};

/// z-scores of the empirical tower frequencies against the exact masses
/// mu(X_v^(n)) = h_v^(n) p_v^(n) of the sampled diagram.
DeviationReport compare(const EmpiricalStats& stats, const CylinderMeasure& mu,
                        const DiagramSpec& spec);

/// splitmix64 step; the documented seed-derivation function for chunks.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace bratteli
