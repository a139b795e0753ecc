/// @file diagram.hpp
/// @brief Bratteli diagram specifications: incidence providers, heights,
///        stochastic matrices, telescoping and vertex-subdiagram restriction.

#pragma once

#include "bratteli/incidence.hpp"
#include "bratteli/selection.hpp"

#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace bratteli {

/// Row-stochastic matrix over (upper vertex v, lower vertex w):
/// q_{v,w} = f_{v,w} h_w / h_v' where h, h' are the heights below and above.
struct StochasticMatrix {
  int level = 0;
  int rows = 0, cols = 0;
  std::vector<Rat> data;

  const Rat& at(int v, int w) const { return data[static_cast<size_t>(v) * cols + w]; }
  Rat& at(int v, int w) { return data[static_cast<size_t>(v) * cols + w]; }
};

struct Violation {
  int level = 0;
  int index = -1;  // vertex (or row/column) index when applicable, else -1
  std::string what;
};

struct ValidationReport {
  std::vector<Violation> errors;
  std::vector<Violation> warnings;
  bool ok() const { return errors.empty(); }
};

/// Immutable diagram description. Levels are 1-based: incidence(n) is the
/// matrix between level n and level n+1; root_edges gives the edge
/// multiplicities from the root to level 1 (default all ones).
class DiagramSpec {
 public:
  enum class Provider { Explicit, Stationary, Cyclic };

  static DiagramSpec stationary(IncidenceMatrix m, std::vector<Int> root_edges = {});
  static DiagramSpec cyclic(std::vector<IncidenceMatrix> mats, std::vector<Int> root_edges = {});
  static DiagramSpec explicit_levels(std::vector<IncidenceMatrix> mats,
                                     std::vector<Int> root_edges = {});

  Provider provider() const { return provider_; }
  bool is_stationary() const { return provider_ == Provider::Stationary; }
  const std::vector<IncidenceMatrix>& matrices() const { return mats_; }
  const std::vector<Int>& root_edges() const { return root_edges_; }

  /// Highest level for which incidence() is defined, or 0 for unbounded.
  int max_incidence_level() const {
    return provider_ == Provider::Explicit ? static_cast<int>(mats_.size()) : 0;
  }

  /// F_n for n >= 1. Throws LevelOutOfRange past an explicit provider's end.
  const IncidenceMatrix& incidence(int n) const;

  /// |V_n| for n >= 1 (|V_0| is always 1).
  int vertex_count(int n) const;

  /// Exact heights h_v^(n), n >= 1: h^(1) = root_edges, h^(n+1) = F_n h^(n).
  std::vector<Int> heights(int n) const;

  /// Exact stochastic matrix Q_n; rows sum to 1 by the height recursion.
  StochasticMatrix stochastic(int n) const;

 private:
  DiagramSpec() = default;
  void check_chaining() const;

  Provider provider_ = Provider::Stationary;
  std::vector<IncidenceMatrix> mats_;
  std::vector<Int> root_edges_;

  // Height cache, shared between copies of an immutable spec; idempotent fill.
  struct HeightCache {
    std::mutex mutex;
    std::vector<std::vector<Int>> levels;  // levels[k] = h^(k+1)
  };
  std::shared_ptr<HeightCache> height_cache_ = std::make_shared<HeightCache>();
};

/// Checks every structural invariant up to `depth` levels of incidence
/// matrices. Violations are data, not failures.
ValidationReport validate(const DiagramSpec& spec, int depth);

/// Telescopes to the given strictly increasing kept levels (first >= 1). The
/// new root edges are the original heights at the first kept level. A
/// stationary spec telescoped along an arithmetic progression starting at
/// level 1 stays stationary; otherwise the result is an explicit spec with
/// levels.size() - 1 incidence matrices.
DiagramSpec telescope(const DiagramSpec& spec, const std::vector<int>& levels);

/// The vertex subdiagram induced by `sel`. Validates to `check_depth` levels
/// that the restriction yields no zero row or column; throws RestrictionError
/// with the offending level otherwise.
DiagramSpec subdiagram(const DiagramSpec& spec, const VertexSelection& sel, int check_depth);

}  // namespace bratteli
