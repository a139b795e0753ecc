/// @file selection.hpp
/// @brief Per-level vertex subsets defining a vertex subdiagram.

#pragma once

#include "bratteli/types.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace bratteli {

/// Selected vertex sets W_n, one per level n >= 1 (0-based vertex indices,
/// stored sorted). Level 0 (the root) is always selected.
class VertexSelection {
 public:
  static VertexSelection stationary(std::vector<int> subset) {
    VertexSelection s;
    s.stationary_ = true;
    std::sort(subset.begin(), subset.end());
    s.subsets_.push_back(std::move(subset));
    return s;
  }

  static VertexSelection explicit_levels(std::vector<std::vector<int>> subsets) {
    if (subsets.empty()) throw Error("VertexSelection: no levels given");
    VertexSelection s;
    s.stationary_ = false;
    for (auto& sub : subsets) std::sort(sub.begin(), sub.end());
    s.subsets_ = std::move(subsets);
    return s;
  }

  bool is_stationary() const { return stationary_; }
  int explicit_depth() const { return stationary_ ? 0 : static_cast<int>(subsets_.size()); }

  /// W_n as a sorted index list; validates range and properness against the
  /// level's vertex count.
  const std::vector<int>& selected(int n, int vertex_count) const {
    const auto& w = raw(n);
    if (w.empty()) throw Error("selection: empty W at level " + std::to_string(n));
    if (static_cast<int>(w.size()) >= vertex_count)
      throw Error("selection must be proper at level " + std::to_string(n));
    for (size_t i = 0; i < w.size(); ++i) {
      if (w[i] < 0 || w[i] >= vertex_count)
        throw Error("selection index out of range at level " + std::to_string(n));
      if (i > 0 && w[i] == w[i - 1])
        throw Error("duplicate selection index at level " + std::to_string(n));
    }
    return w;
  }

  /// W'_n = V_n \ W_n.
  std::vector<int> complement(int n, int vertex_count) const {
    const auto& w = selected(n, vertex_count);
    std::vector<int> out;
    size_t j = 0;
    for (int v = 0; v < vertex_count; ++v) {
      if (j < w.size() && w[j] == v) {
        ++j;
      } else {
        out.push_back(v);
      }
    }
    return out;
  }

 private:
  const std::vector<int>& raw(int n) const {
    if (n < 1) throw Error("selection level must be >= 1");
    if (stationary_) return subsets_[0];
    if (n > static_cast<int>(subsets_.size()))
      throw LevelOutOfRange("selection has no level " + std::to_string(n));
    return subsets_[static_cast<size_t>(n) - 1];
  }

  bool stationary_ = true;
  std::vector<std::vector<int>> subsets_;
};

/// Free-function form of the set complement.
inline std::vector<int> complement(const VertexSelection& sel, int n, int vertex_count) {
  return sel.complement(n, vertex_count);
}

}  // namespace bratteli
