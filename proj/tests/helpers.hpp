// Shared test utilities: brute-force path enumeration oracles and random
// diagram/measure corpus generation.

#pragma once

#include "bratteli/diagram.hpp"
#include "bratteli/measure.hpp"

#include <functional>
#include <optional>
#include <random>

namespace bratteli::testing {

/// Counts root-to-vertex paths at level n by explicit enumeration: walks every
/// edge copy one by one. Independent of the height recursion.
inline std::vector<long> enumerate_paths(const DiagramSpec& spec, int n) {
  std::vector<long> counts(static_cast<size_t>(spec.vertex_count(n)), 0);
  // DFS over (level, vertex); each call represents one concrete finite path.
  std::function<void(int, int)> walk = [&](int level, int vertex) {
    if (level == n) {
      ++counts[static_cast<size_t>(vertex)];
      return;
    }
    const IncidenceMatrix& f = spec.incidence(level);
    for (int v = 0; v < f.rows(); ++v) {
      const long copies = static_cast<long>(f.at(v, vertex));
      for (long c = 0; c < copies; ++c) walk(level + 1, v);
    }
  };
  for (int v = 0; v < spec.vertex_count(1); ++v) {
    const long copies = static_cast<long>(spec.root_edges()[static_cast<size_t>(v)]);
    for (long c = 0; c < copies; ++c) walk(1, v);
  }
  return counts;
}

struct RandomCase {
  DiagramSpec diagram;
  VertexSelection selection;
  CylinderMeasure measure;
  int depth;
};

/// Random explicit diagram: 2..4 vertices per level, entries 0..2, every row
/// and column positive.
inline DiagramSpec random_diagram(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> vcount(2, 4);
  std::uniform_int_distribution<int> entry(0, 2);
  while (true) {
    std::vector<int> counts(static_cast<size_t>(depth) + 1);
    for (auto& c : counts) c = vcount(rng);
    std::vector<IncidenceMatrix> mats;
    bool ok = true;
    for (int n = 0; n < depth && ok; ++n) {
      IncidenceMatrix m(counts[static_cast<size_t>(n) + 1], counts[static_cast<size_t>(n)]);
      for (int v = 0; v < m.rows(); ++v)
        for (int w = 0; w < m.cols(); ++w) m.at(v, w) = entry(rng);
      for (int v = 0; v < m.rows(); ++v)
        if (!m.row_has_positive(v)) ok = false;
      for (int w = 0; w < m.cols(); ++w)
        if (!m.col_has_positive(w)) ok = false;
      mats.push_back(std::move(m));
    }
    if (!ok) continue;
    std::uniform_int_distribution<int> root(1, 2);
    std::vector<Int> root_edges(static_cast<size_t>(counts[0]));
    for (auto& e : root_edges) e = root(rng);
    return DiagramSpec::explicit_levels(std::move(mats), std::move(root_edges));
  }
}

/// Random proper non-empty selection per level; retried by the caller when the
/// restriction is invalid.
inline VertexSelection random_selection(std::mt19937& rng, const DiagramSpec& spec, int levels) {
  std::vector<std::vector<int>> subsets;
  for (int n = 1; n <= levels; ++n) {
    const int count = spec.vertex_count(n);
    std::vector<int> subset;
    while (subset.empty() || static_cast<int>(subset.size()) == count) {
      subset.clear();
      for (int v = 0; v < count; ++v)
        if (rng() % 2 == 0) subset.push_back(v);
    }
    subsets.push_back(std::move(subset));
  }
  return VertexSelection::explicit_levels(std::move(subsets));
}

/// Exact table measure on `sub` by backward construction from random positive
/// values at the deepest level, then global normalization. Compatibility and
/// normalization hold by construction.
inline CylinderMeasure random_table_measure(std::mt19937& rng, const DiagramSpec& sub, int depth) {
  std::uniform_int_distribution<int> val(1, 5);
  std::vector<std::vector<Rat>> table(static_cast<size_t>(depth));
  auto& deepest = table[static_cast<size_t>(depth) - 1];
  deepest.resize(static_cast<size_t>(sub.vertex_count(depth)));
  for (auto& p : deepest) p = Rat(val(rng), 1);
  for (int n = depth - 1; n >= 1; --n) {
    const IncidenceMatrix& f = sub.incidence(n);
    auto& row = table[static_cast<size_t>(n) - 1];
    row.assign(static_cast<size_t>(f.cols()), Rat(0));
    for (int w = 0; w < f.cols(); ++w)
      for (int v = 0; v < f.rows(); ++v)
        row[static_cast<size_t>(w)] +=
            Rat(f.at(v, w)) * table[static_cast<size_t>(n)][static_cast<size_t>(v)];
  }
  Rat mass(0);
  const std::vector<Int> h1 = sub.heights(1);
  for (size_t v = 0; v < h1.size(); ++v) mass += Rat(h1[v]) * table[0][v];
  for (auto& row : table)
    for (Rat& p : row) p /= mass;
  return CylinderMeasure::explicit_table(sub, std::move(table));
}

/// One random (diagram, selection, exact measure) triple; empty when the drawn
/// selection does not induce a valid subdiagram.
inline std::optional<RandomCase> random_case(std::mt19937& rng, int depth) {
  DiagramSpec spec = random_diagram(rng, depth);
  VertexSelection sel = random_selection(rng, spec, depth + 1);
  try {
    DiagramSpec sub = subdiagram(spec, sel, depth);
    CylinderMeasure mu = random_table_measure(rng, sub, depth);
    return RandomCase{std::move(spec), std::move(sel), std::move(mu), depth};
  } catch (const Error&) {
    return std::nullopt;
  }
}

/// Random stationary diagram with an exactly certified PF measure on a random
/// stationary subdiagram. Lower-triangular incidence keeps the spectrum
/// integral. Empty when the certification or restriction fails.
inline std::optional<RandomCase> random_stationary_case(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> dim_d(2, 4);
  std::uniform_int_distribution<int> diag_d(1, 4);
  std::uniform_int_distribution<int> off_d(0, 2);
  const int dim = dim_d(rng);
  IncidenceMatrix m(dim, dim);
  for (int v = 0; v < dim; ++v) {
    m.at(v, v) = diag_d(rng);
    for (int w = 0; w < v; ++w) m.at(v, w) = off_d(rng);
  }
  DiagramSpec spec = DiagramSpec::stationary(std::move(m));
  std::vector<int> subset;
  while (subset.empty() || static_cast<int>(subset.size()) == dim) {
    subset.clear();
    for (int v = 0; v < dim; ++v)
      if (rng() % 2 == 0) subset.push_back(v);
  }
  VertexSelection sel = VertexSelection::stationary(std::move(subset));
  try {
    DiagramSpec sub = subdiagram(spec, sel, depth);
    PFEigendata eig = pf_eigendata(sub.incidence(1), NumericMode::Exact);
    if (!eig.exact) return std::nullopt;
    CylinderMeasure mu = CylinderMeasure::stationary_pf(sub, eig);
    return RandomCase{std::move(spec), std::move(sel), std::move(mu), depth};
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace bratteli::testing
