#include "bratteli/diagram.hpp"

#include <numeric>

namespace bratteli {

namespace {

std::vector<Int> default_root(int v1) { return std::vector<Int>(static_cast<size_t>(v1), Int(1)); }

}  // namespace

DiagramSpec DiagramSpec::stationary(IncidenceMatrix m, std::vector<Int> root_edges) {
  if (m.rows() != m.cols()) throw Error("stationary diagram requires a square incidence matrix");
  DiagramSpec s;
  s.provider_ = Provider::Stationary;
  s.mats_.push_back(std::move(m));
  s.root_edges_ = root_edges.empty() ? default_root(s.mats_[0].cols()) : std::move(root_edges);
  s.check_chaining();
  return s;
}

DiagramSpec DiagramSpec::cyclic(std::vector<IncidenceMatrix> mats, std::vector<Int> root_edges) {
  if (mats.empty()) throw Error("cyclic diagram requires at least one matrix");
  DiagramSpec s;
  s.provider_ = Provider::Cyclic;
  s.mats_ = std::move(mats);
  s.root_edges_ = root_edges.empty() ? default_root(s.mats_[0].cols()) : std::move(root_edges);
  s.check_chaining();
  return s;
}

DiagramSpec DiagramSpec::explicit_levels(std::vector<IncidenceMatrix> mats,
                                         std::vector<Int> root_edges) {
  if (mats.empty()) throw Error("explicit diagram requires at least one matrix");
  DiagramSpec s;
  s.provider_ = Provider::Explicit;
  s.mats_ = std::move(mats);
  s.root_edges_ = root_edges.empty() ? default_root(s.mats_[0].cols()) : std::move(root_edges);
  s.check_chaining();
  return s;
}

void DiagramSpec::check_chaining() const {
  if (static_cast<int>(root_edges_.size()) != mats_[0].cols())
    throw Error("root_edges length must equal the first level's vertex count");
  bool any_positive = false;
  for (const Int& e : root_edges_) {
    if (e < 0) throw Error("root_edges entries must be nonnegative");
    if (e > 0) any_positive = true;
  }
  if (!any_positive) throw Error("root_edges must have at least one positive entry");
  const size_t count = mats_.size();
  for (size_t k = 0; k + 1 < count; ++k) {
    if (mats_[k + 1].cols() != mats_[k].rows())
      throw Error("incidence matrix dimensions do not chain at position " + std::to_string(k + 1));
  }
  if (provider_ == Provider::Cyclic && mats_.back().rows() != mats_.front().cols())
    throw Error("cyclic incidence matrices do not chain around the period");
}

const IncidenceMatrix& DiagramSpec::incidence(int n) const {
  if (n < 1) throw LevelOutOfRange("incidence level must be >= 1");
  switch (provider_) {
    case Provider::Stationary:
      return mats_[0];
    case Provider::Cyclic:
      return mats_[static_cast<size_t>(n - 1) % mats_.size()];
    case Provider::Explicit:
      if (n > static_cast<int>(mats_.size()))
        throw LevelOutOfRange("level out of range: " + std::to_string(n) + " > " +
                              std::to_string(mats_.size()));
      return mats_[static_cast<size_t>(n) - 1];
  }
  throw Error("unreachable");
}

int DiagramSpec::vertex_count(int n) const {
  if (n < 1) throw LevelOutOfRange("vertex level must be >= 1");
  if (provider_ == Provider::Explicit && n == static_cast<int>(mats_.size()) + 1)
    return mats_.back().rows();
  return incidence(n).cols();
}

std::vector<Int> DiagramSpec::heights(int n) const {
  if (n < 1) throw LevelOutOfRange("height level must be >= 1");
  std::lock_guard<std::mutex> lock(height_cache_->mutex);
  auto& levels = height_cache_->levels;
  if (levels.empty()) levels.push_back(root_edges_);
  while (static_cast<int>(levels.size()) < n) {
    const int k = static_cast<int>(levels.size());  // have h^(k), need h^(k+1)
    levels.push_back(incidence(k).apply(levels.back()));
  }
  return levels[static_cast<size_t>(n) - 1];
}

StochasticMatrix DiagramSpec::stochastic(int n) const {
  const IncidenceMatrix& f = incidence(n);
  const std::vector<Int> lower = heights(n);
  const std::vector<Int> upper = heights(n + 1);
  StochasticMatrix q;
  q.level = n;
  q.rows = f.rows();
  q.cols = f.cols();
  q.data.assign(static_cast<size_t>(q.rows) * q.cols, Rat(0));
  for (int v = 0; v < q.rows; ++v) {
    if (upper[v] == 0)
      throw Error("zero height at level " + std::to_string(n + 1) + ", vertex " + std::to_string(v));
    for (int w = 0; w < q.cols; ++w)
      if (f.at(v, w) != 0) q.at(v, w) = Rat(f.at(v, w) * lower[w], upper[v]);
  }
  return q;
}

ValidationReport validate(const DiagramSpec& spec, int depth) {
  if (depth < 1) throw Error("validation depth must be >= 1");
  ValidationReport report;
  const int limit = spec.max_incidence_level() > 0 ? std::min(depth, spec.max_incidence_level())
                                                   : depth;
  if (spec.max_incidence_level() > 0 && depth > spec.max_incidence_level())
    report.warnings.push_back({spec.max_incidence_level(), -1,
                               "explicit provider ends before requested depth"});

  for (int n = 1; n <= limit; ++n) {
    const IncidenceMatrix& f = spec.incidence(n);
    for (int v = 0; v < f.rows(); ++v) {
      bool has_positive = false;
      for (int w = 0; w < f.cols(); ++w) {
        if (f.at(v, w) < 0)
          report.errors.push_back({n, v, "negative entry f[" + std::to_string(v) + "][" +
                                             std::to_string(w) + "]"});
        if (f.at(v, w) > 0) has_positive = true;
      }
      if (!has_positive)
        report.errors.push_back({n, v, "row without positive entry (r^-1(v') is empty)"});
    }
    for (int w = 0; w < f.cols(); ++w)
      if (!f.col_has_positive(w))
        report.errors.push_back({n, w, "column without positive entry (s^-1(v) is empty)"});
  }

  // Cantor-set heuristic: if the total finite-path count stops growing over the
  // whole checked tail, the path space may fail to be perfect. Warning only.
  if (report.ok() && limit >= 2) {
    bool grew = false;
    const std::vector<Int> h1 = spec.heights(1);
    Int prev = std::accumulate(h1.begin(), h1.end(), Int(0));
    for (int n = 2; n <= limit + 1; ++n) {
      if (spec.max_incidence_level() > 0 && n > spec.max_incidence_level() + 1) break;
      const std::vector<Int> hn = spec.heights(n);
      Int total = std::accumulate(hn.begin(), hn.end(), Int(0));
      if (total > prev) grew = true;
      prev = total;
    }
    if (!grew)
      report.warnings.push_back(
          {limit, -1, "no branching detected to checked depth; path space may not be a Cantor set"});
  }
  return report;
}

DiagramSpec telescope(const DiagramSpec& spec, const std::vector<int>& levels) {
  if (levels.empty()) throw Error("telescope: empty level list");
  if (levels.front() < 1) throw Error("telescope: levels must start at >= 1");
  for (size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1]) throw Error("telescope: levels must be strictly increasing");

  // Stationary spec, arithmetic progression from level 1: stays stationary.
  if (spec.is_stationary() && levels.size() >= 2 && levels.front() == 1) {
    const int stride = levels[1] - levels[0];
    bool uniform = true;
    for (size_t i = 1; i < levels.size(); ++i)
      if (levels[i] - levels[i - 1] != stride) uniform = false;
    if (uniform) {
      IncidenceMatrix power = spec.incidence(1);
      for (int k = 1; k < stride; ++k) power = spec.incidence(1).multiply(power);
      return DiagramSpec::stationary(std::move(power), spec.root_edges());
    }
  }

  std::vector<Int> root = spec.heights(levels.front());
  std::vector<IncidenceMatrix> mats;
  for (size_t i = 0; i + 1 < levels.size(); ++i) {
    IncidenceMatrix prod = spec.incidence(levels[i]);
    for (int n = levels[i] + 1; n < levels[i + 1]; ++n) prod = spec.incidence(n).multiply(prod);
    mats.push_back(std::move(prod));
  }
  if (mats.empty())
    throw Error("telescope: need at least two kept levels");
  return DiagramSpec::explicit_levels(std::move(mats), std::move(root));
}

DiagramSpec subdiagram(const DiagramSpec& spec, const VertexSelection& sel, int check_depth) {
  auto restricted_root = [&]() {
    const auto& w1 = sel.selected(1, spec.vertex_count(1));
    std::vector<Int> root;
    for (int v : w1) root.push_back(spec.root_edges()[static_cast<size_t>(v)]);
    return root;
  };
  auto check = [&](const DiagramSpec& sub) {
    for (int n = 1; n <= check_depth; ++n) {
      if (sub.max_incidence_level() > 0 && n > sub.max_incidence_level()) break;
      const IncidenceMatrix& f = sub.incidence(n);
      for (int v = 0; v < f.rows(); ++v)
        if (!f.row_has_positive(v))
          throw RestrictionError("subdiagram has a zero row at level " + std::to_string(n) +
                                     ", vertex " + std::to_string(v),
                                 n);
      for (int w = 0; w < f.cols(); ++w)
        if (!f.col_has_positive(w))
          throw RestrictionError("subdiagram has a zero column at level " + std::to_string(n) +
                                     ", vertex " + std::to_string(w),
                                 n);
    }
    bool root_positive = false;
    for (const Int& e : sub.root_edges())
      if (e > 0) root_positive = true;
    if (!root_positive)
      throw RestrictionError("subdiagram root has no edges into selected level-1 vertices", 0);
  };

  if (spec.is_stationary() && sel.is_stationary()) {
    const auto& w = sel.selected(1, spec.vertex_count(1));
    DiagramSpec sub = DiagramSpec::stationary(spec.incidence(1).submatrix(w, w), restricted_root());
    check(sub);
    return sub;
  }

  if (spec.provider() == DiagramSpec::Provider::Cyclic && sel.is_stationary()) {
    const int period = static_cast<int>(spec.matrices().size());
    std::vector<IncidenceMatrix> mats;
    for (int n = 1; n <= period; ++n) {
      const auto& lower = sel.selected(n, spec.vertex_count(n));
      const auto& upper = sel.selected(n + 1, spec.vertex_count(n + 1));
      mats.push_back(spec.incidence(n).submatrix(upper, lower));
    }
    DiagramSpec sub = DiagramSpec::cyclic(std::move(mats), restricted_root());
    check(sub);
    return sub;
  }

  int depth = check_depth;
  if (spec.max_incidence_level() > 0) depth = std::min(depth, spec.max_incidence_level());
  if (!sel.is_stationary()) depth = std::min(depth, sel.explicit_depth() - 1);
  if (depth < 1) throw Error("subdiagram: not enough selection/diagram depth");
  std::vector<IncidenceMatrix> mats;
  for (int n = 1; n <= depth; ++n) {
    const auto& lower = sel.selected(n, spec.vertex_count(n));
    const auto& upper = sel.selected(n + 1, spec.vertex_count(n + 1));
    mats.push_back(spec.incidence(n).submatrix(upper, lower));
  }
  DiagramSpec sub = DiagramSpec::explicit_levels(std::move(mats), restricted_root());
  check(sub);
  return sub;
}

}  // namespace bratteli
