#include "bratteli/sampler.hpp"

#include <cmath>
#include <random>

namespace bratteli {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

namespace {

/// Integer threshold table over a common denominator: entry i is chosen when
/// the uniform draw in [0, total) lands in [cum[i-1], cum[i]).
struct ThresholdTable {
  std::vector<int> targets;
  std::vector<Int> cum;
  Int total;
};

ThresholdTable make_table(const std::vector<std::pair<int, Rat>>& weights, const Rat& mass) {
  // Normalize to probabilities and bring to a common denominator.
  Int denom = 1;
  std::vector<Rat> probs;
  Rat sum(0);
  for (const auto& [target, wgt] : weights) {
    Rat p = wgt / mass;
    sum += p;
    denom = boost::multiprecision::lcm(denom, boost::multiprecision::denominator(p));
    probs.push_back(p);
    (void)target;
  }
  if (sum != 1) throw Error("sampler: transition probabilities do not sum to 1 exactly");
  ThresholdTable t;
  t.total = denom;
  Int acc = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    acc += boost::multiprecision::numerator(probs[i]) *
           (denom / boost::multiprecision::denominator(probs[i]));
    t.targets.push_back(weights[i].first);
    t.cum.push_back(acc);
  }
  if (acc != denom) throw Error("sampler: threshold table does not cover the denominator");
  return t;
}

/// Uniform integer in [0, bound) by rejection on fixed-width words; platform
/// independent given the engine stream.
Int uniform_below(std::mt19937_64& rng, const Int& bound) {
  if (bound <= 0) throw Error("sampler: empty distribution");
  const unsigned bits = boost::multiprecision::msb(bound) + 1;
  const unsigned words = (bits + 63) / 64;
  while (true) {
    Int x = 0;
    for (unsigned i = 0; i < words; ++i) {
      x <<= 64;
      x |= Int(rng());
    }
    x &= (Int(1) << bits) - 1;
    if (x < bound) return x;
  }
}

int pick(const ThresholdTable& t, std::mt19937_64& rng) {
  const Int draw = uniform_below(rng, t.total);
  for (size_t i = 0; i < t.cum.size(); ++i)
    if (draw < t.cum[i]) return t.targets[i];
  throw Error("sampler: draw fell past the last threshold");
}

}  // namespace

EmpiricalStats sample(const CylinderMeasure& mu, const SamplerConfig& config) {
  if (config.count < 1) throw Error("sampler: count must be >= 1");
  if (config.depth < 1) throw Error("sampler: depth must be >= 1");
  if (mu.mode() != NumericMode::Exact)
    throw Error("sampler: requires an exact measure (transition law must be exact)");
  const DiagramSpec& spec = mu.spec();

  auto p_rat = [&](int n, int v) { return mu.p(n, v).rat(); };

  // Root table: vertex v at level 1 with weight root_edges_v * p_v^(1); the
  // total is the level-1 mass, exactly 1 for a probability measure.
  std::vector<std::pair<int, Rat>> root_weights;
  Rat root_mass(0);
  for (int v = 0; v < spec.vertex_count(1); ++v) {
    Rat wgt = Rat(spec.root_edges()[static_cast<size_t>(v)]) * p_rat(1, v);
    if (wgt != 0) root_weights.emplace_back(v, wgt);
    root_mass += wgt;
  }
  if (root_mass != 1) throw Error("sampler: measure is not a probability measure");
  const ThresholdTable root_table = make_table(root_weights, root_mass);

  // Transition tables per (level n, vertex w): extend along an edge to v at
  // level n+1 with probability f_{v,w} p_v^(n+1) / p_w^(n).
  std::vector<std::vector<ThresholdTable>> tables(static_cast<size_t>(config.depth) - 1);
  for (int n = 1; n < config.depth; ++n) {
    const IncidenceMatrix& f = spec.incidence(n);
    auto& level_tables = tables[static_cast<size_t>(n) - 1];
    level_tables.reserve(static_cast<size_t>(f.cols()));
    for (int w = 0; w < f.cols(); ++w) {
      const Rat mass = p_rat(n, w);
      if (mass == 0) throw Error("sampler: zero-probability vertex " + std::to_string(w) +
                                 " at level " + std::to_string(n));
      std::vector<std::pair<int, Rat>> weights;
      for (int v = 0; v < f.rows(); ++v)
        if (f.at(v, w) != 0) weights.emplace_back(v, Rat(f.at(v, w)) * p_rat(n + 1, v));
      level_tables.push_back(make_table(weights, mass));
    }
  }

  EmpiricalStats stats;
  stats.depth = config.depth;
  stats.count = config.count;
  stats.seed = config.seed;
  stats.counts.resize(static_cast<size_t>(config.depth));
  for (int n = 1; n <= config.depth; ++n)
    stats.counts[static_cast<size_t>(n) - 1].assign(static_cast<size_t>(spec.vertex_count(n)), 0);

  long remaining = config.count;
  std::uint64_t chunk_index = 0;
  while (remaining > 0) {
    const long batch = std::min(remaining, config.chunk_size);
    std::mt19937_64 rng(splitmix64(config.seed ^ splitmix64(chunk_index)));
    for (long i = 0; i < batch; ++i) {
      int v = pick(root_table, rng);
      ++stats.counts[0][static_cast<size_t>(v)];
      for (int n = 1; n < config.depth; ++n) {
        v = pick(tables[static_cast<size_t>(n) - 1][static_cast<size_t>(v)], rng);
        ++stats.counts[static_cast<size_t>(n)][static_cast<size_t>(v)];
      }
    }
    remaining -= batch;
    ++chunk_index;
  }
  return stats;
}

DeviationReport compare(const EmpiricalStats& stats, const CylinderMeasure& mu,
                        const DiagramSpec& spec) {
  DeviationReport report;
  const double n_samples = static_cast<double>(stats.count);
  for (int n = 1; n <= stats.depth; ++n) {
    const std::vector<Int> h = spec.heights(n);
    for (int v = 0; v < static_cast<int>(h.size()); ++v) {
      DeviationRow row;
      row.level = n;
      row.vertex = v;
      row.exact = (Value(h[static_cast<size_t>(v)]) * mu.p(n, v)).num();
      row.observed = stats.frequency(n, v);
      row.stderr_ = std::sqrt(row.exact * (1.0 - row.exact) / n_samples);
      if (row.stderr_ > 0) {
        row.z = (row.observed - row.exact) / row.stderr_;
      } else {
        row.z = row.observed == row.exact ? 0.0 : std::numeric_limits<double>::infinity();
      }
      row.flagged = std::abs(row.z) > 4.0;
      report.max_abs_z = std::max(report.max_abs_z, std::abs(row.z));
      report.any_flagged = report.any_flagged || row.flagged;
      report.rows.push_back(row);
    }
  }
  return report;
}

}  // namespace bratteli
