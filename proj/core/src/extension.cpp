#include "bratteli/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bratteli {

namespace {

/// Measure values are indexed by position within the sorted selection, the
/// same order subdiagram() uses. Returns p for the full-level vertex v in W_n.
Value selected_p(const CylinderMeasure& mu, const std::vector<int>& w_level, int n, int v) {
  const auto it = std::lower_bound(w_level.begin(), w_level.end(), v);
  if (it == w_level.end() || *it != v) throw Error("selected_p: vertex not in selection");
  return mu.p(n, static_cast<int>(it - w_level.begin()));
}

void check_match(const DiagramSpec& spec, const VertexSelection& sel, const CylinderMeasure& mu,
                 int N) {
  for (int n = 1; n <= N; ++n) {
    const auto& w = sel.selected(n, spec.vertex_count(n));
    if (static_cast<int>(w.size()) != mu.spec().vertex_count(n))
      throw Error("measure/selection mismatch at level " + std::to_string(n) + ": |W| = " +
                  std::to_string(w.size()) + ", measure has " +
                  std::to_string(mu.spec().vertex_count(n)) + " vertices");
  }
}

}  // namespace

const char* verdict_kind_name(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::FiniteProved: return "FiniteProved";
    case Verdict::Kind::InfiniteProved: return "InfiniteProved";
    case Verdict::Kind::FiniteTrend: return "FiniteTrend";
    case Verdict::Kind::DivergentTrend: return "DivergentTrend";
    case Verdict::Kind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::vector<Value> partial_masses(const DiagramSpec& spec, const VertexSelection& sel,
                                  const CylinderMeasure& mu, int N) {
  check_match(spec, sel, mu, N);
  std::vector<Value> s;
  s.reserve(static_cast<size_t>(N));
  for (int n = 1; n <= N; ++n) {
    const auto& w = sel.selected(n, spec.vertex_count(n));
    const std::vector<Int> h = spec.heights(n);
    Value mass;
    for (int v : w) mass += Value(h[static_cast<size_t>(v)]) * selected_p(mu, w, n, v);
    s.push_back(mass);
  }
  return s;
}

std::vector<Value> condition3_terms(const DiagramSpec& spec, const VertexSelection& sel,
                                    const CylinderMeasure& mu, int N) {
  check_match(spec, sel, mu, N);
  std::vector<Value> terms;
  for (int n = 1; n < N; ++n) {
    const StochasticMatrix q = spec.stochastic(n);
    const auto& w_up = sel.selected(n + 1, spec.vertex_count(n + 1));
    const auto wp_lo = sel.complement(n, spec.vertex_count(n));
    const std::vector<Int> h_sub = mu.spec().heights(n + 1);
    Value t;
    for (size_t wi = 0; wi < w_up.size(); ++wi) {
      Value cross;
      for (int v : wp_lo) cross += Value(q.at(w_up[wi], v));
      if (cross.is_zero()) continue;
      // Subdiagram tower mass: subdiagram height times cylinder value.
      Value sub_tower = Value(h_sub[wi]) * mu.p(n + 1, static_cast<int>(wi));
      t += cross * sub_tower;
    }
    terms.push_back(t);
  }
  return terms;
}

std::vector<Value> condition4_terms(const DiagramSpec& spec, const VertexSelection& sel, int N) {
  std::vector<Value> terms;
  for (int n = 1; n < N; ++n) {
    const StochasticMatrix q = spec.stochastic(n);
    const auto& w_up = sel.selected(n + 1, spec.vertex_count(n + 1));
    const auto wp_lo = sel.complement(n, spec.vertex_count(n));
    Value s;
    for (int w : w_up)
      for (int v : wp_lo) s += Value(q.at(w, v));
    terms.push_back(s);
  }
  return terms;
}

CriterionTerms criterion_terms(const DiagramSpec& spec, const VertexSelection& sel,
                               const CylinderMeasure& mu, int N) {
  check_match(spec, sel, mu, N);
  CriterionTerms out;
  const std::vector<Value> s = partial_masses(spec, sel, mu, N);
  for (int n = 1; n < N; ++n) {
    const StochasticMatrix q = spec.stochastic(n);
    const auto& w_up = sel.selected(n + 1, spec.vertex_count(n + 1));
    const auto wp_lo = sel.complement(n, spec.vertex_count(n));
    const std::vector<Int> h_full = spec.heights(n + 1);
    Value u;
    for (size_t wi = 0; wi < w_up.size(); ++wi) {
      Value cross;
      for (int v : wp_lo) cross += Value(q.at(w_up[wi], v));
      if (cross.is_zero()) continue;
      // Extended tower mass: full-diagram height times cylinder value.
      Value tower = Value(h_full[static_cast<size_t>(w_up[wi])]) * mu.p(n + 1, static_cast<int>(wi));
      u += cross * tower;
    }
    out.u.push_back(u);
    out.d.push_back(s[static_cast<size_t>(n)] - s[static_cast<size_t>(n) - 1]);
  }
  return out;
}

MinMaxTerms corollary_minmax(const DiagramSpec& spec, const VertexSelection& sel, int N,
                             bool require_positive) {
  MinMaxTerms out;
  for (int n = 1; n < N; ++n) {
    const IncidenceMatrix& f = spec.incidence(n);
    const StochasticMatrix q = spec.stochastic(n);
    const auto& w_up = sel.selected(n + 1, spec.vertex_count(n + 1));
    const auto wp_lo = sel.complement(n, spec.vertex_count(n));
    const std::vector<Int> h_lo = spec.heights(n);
    const std::vector<Int> h_up = spec.heights(n + 1);
    std::optional<Rat> min_max_q;
    std::optional<Rat> min_max_h;
    for (int w : w_up) {
      Rat max_q(0), max_h(0);
      bool first = true;
      for (int v : wp_lo) {
        if (f.at(w, v) == 0) {
          out.positivity_ok = false;
          out.violations.emplace_back(n, w, v);
        }
        Rat hr(h_lo[static_cast<size_t>(v)], h_up[static_cast<size_t>(w)]);
        if (first || q.at(w, v) > max_q) max_q = q.at(w, v);
        if (first || hr > max_h) max_h = hr;
        first = false;
      }
      if (first) continue;  // no complement vertices (cannot happen for proper selections)
      if (!min_max_q || max_q < *min_max_q) min_max_q = max_q;
      if (!min_max_h || max_h < *min_max_h) min_max_h = max_h;
    }
    out.q_terms.push_back(Value(min_max_q.value_or(Rat(0))));
    out.h_terms.push_back(min_max_h.value_or(Rat(0)));
  }
  if (require_positive && !out.positivity_ok) {
    const auto& [n, w, v] = out.violations.front();
    throw Error("corollary positivity assumption violated: f[" + std::to_string(w) + "][" +
                std::to_string(v) + "] = 0 at level " + std::to_string(n) +
                " (telescope first to restore positivity)");
  }
  return out;
}

Value ExtendedMeasure::p_hat_lower(int n, int v) const {
  if (n < 1 || n > depth_) throw Error("p_hat_lower: level out of range");
  const auto& row = values_[static_cast<size_t>(n) - 1];
  if (v < 0 || v >= static_cast<int>(row.size())) throw Error("p_hat_lower: vertex out of range");
  return row[static_cast<size_t>(v)];
}

Value ExtendedMeasure::tower_lower(int n, int v) const {
  const std::vector<Int> h = spec_->heights(n);
  return Value(h[static_cast<size_t>(v)]) * p_hat_lower(n, v);
}

bool ExtendedMeasure::stabilized(int n, int v) const {
  return stabilized_[static_cast<size_t>(n) - 1][static_cast<size_t>(v)];
}

bool ExtendedMeasure::unbounded_at_depth(int n, int v) const {
  return unbounded_[static_cast<size_t>(n) - 1][static_cast<size_t>(v)];
}

ExtendedMeasure extend_measure(const DiagramSpec& spec, const VertexSelection& sel,
                               const CylinderMeasure& mu, int depth,
                               const std::optional<Value>& total_upper, double cap) {
  if (depth < 2) throw Error("extend_measure: depth must be >= 2");
  check_match(spec, sel, mu, depth);

  // One backward sweep from a given truncation level. The seed row carries the
  // subdiagram cylinder values on the selected vertices and zero on the
  // complement; below it every vertex takes the full-diagram recursion. The
  // result at (n, v) is the mass of continuations that are inside the
  // selected sets from the truncation level on, a lower bound for the
  // extension value that is monotone in the truncation depth.
  auto sweep = [&](int trunc) {
    std::vector<std::vector<Value>> vals(static_cast<size_t>(trunc));
    for (int n = trunc; n >= 1; --n) {
      const int count = spec.vertex_count(n);
      std::vector<Value> row(static_cast<size_t>(count));
      if (n == trunc) {
        const auto& w = sel.selected(n, count);
        for (int v : w) row[static_cast<size_t>(v)] = selected_p(mu, w, n, v);
      } else {
        const IncidenceMatrix& f = spec.incidence(n);
        for (int v = 0; v < count; ++v) {
          Value acc;
          for (int u = 0; u < f.rows(); ++u)
            if (f.at(u, v) != 0)
              acc += Value(f.at(u, v)) * vals[static_cast<size_t>(n)][static_cast<size_t>(u)];
          row[static_cast<size_t>(v)] = acc;
        }
      }
      vals[static_cast<size_t>(n) - 1] = std::move(row);
    }
    return vals;
  };

  ExtendedMeasure out;
  out.spec_ = spec;
  out.depth_ = depth;
  out.values_ = sweep(depth);
  const int shallow_depth = std::max(2, depth - 10);
  const auto shallow = sweep(shallow_depth);

  out.is_selected_.resize(static_cast<size_t>(depth));
  out.stabilized_.resize(static_cast<size_t>(depth));
  out.unbounded_.resize(static_cast<size_t>(depth));
  for (int n = 1; n <= depth; ++n) {
    const int count = spec.vertex_count(n);
    const auto& w = sel.selected(n, count);
    auto& selrow = out.is_selected_[static_cast<size_t>(n) - 1];
    auto& strow = out.stabilized_[static_cast<size_t>(n) - 1];
    auto& ubrow = out.unbounded_[static_cast<size_t>(n) - 1];
    selrow.assign(static_cast<size_t>(count), false);
    strow.assign(static_cast<size_t>(count), true);
    ubrow.assign(static_cast<size_t>(count), false);
    for (int v : w) selrow[static_cast<size_t>(v)] = true;
    const std::vector<Int> h = spec.heights(n);
    for (int v = 0; v < count; ++v) {
      const Value tower = Value(h[static_cast<size_t>(v)]) *
                          out.values_[static_cast<size_t>(n) - 1][static_cast<size_t>(v)];
      if (tower.num() > cap) ubrow[static_cast<size_t>(v)] = true;
      if (n <= shallow_depth) {
        const Value diff = out.values_[static_cast<size_t>(n) - 1][static_cast<size_t>(v)] -
                           shallow[static_cast<size_t>(n) - 1][static_cast<size_t>(v)];
        const double moved = diff.num() * static_cast<double>(h[static_cast<size_t>(v)]);
        if (moved > 1e-12 * std::max(1.0, tower.num())) strow[static_cast<size_t>(v)] = false;
      }
    }
  }

  // Level-1 decomposition of the truncated total; equals S_depth exactly
  // because the sweep conserves height-weighted mass level by level.
  Value total;
  {
    const std::vector<Int> h1 = spec.heights(1);
    for (int v = 0; v < spec.vertex_count(1); ++v)
      total += Value(h1[static_cast<size_t>(v)]) * out.values_[0][static_cast<size_t>(v)];
  }
  out.total_lower_ = total;

  if (total_upper) {
    Value res = *total_upper - total;
    if (res.num() < 0) res = Value(0);
    out.residual_ = res;
  }
  return out;
}

RatioDiagnostics ratio_diagnostics(const DiagramSpec& spec, const VertexSelection& sel,
                                   const CylinderMeasure& mu, int N, const ExtendedMeasure& ext) {
  check_match(spec, sel, mu, N);
  RatioDiagnostics out;
  double observed_c = 0.0;
  const std::optional<Value> res = ext.residual();

  for (int n = 1; n <= N && n <= ext.depth(); ++n) {
    const int count = spec.vertex_count(n);
    const auto& w = sel.selected(n, count);
    const auto wp = sel.complement(n, count);
    observed_c = std::max(observed_c,
                          static_cast<double>(w.size()) / static_cast<double>(wp.size()));
    const std::vector<Int> h_full = spec.heights(n);
    const std::vector<Int> h_sub = mu.spec().heights(n);

    bool any_unbounded = false;
    std::optional<Value> min_wp_lo, max_wp_lo;
    for (int v : wp) {
      if (ext.unbounded_at_depth(n, v)) any_unbounded = true;
      const Value t = ext.tower_lower(n, v);
      if (!min_wp_lo || t < *min_wp_lo) min_wp_lo = t;
      if (!max_wp_lo || t > *max_wp_lo) max_wp_lo = t;
    }
    Value max_sub, max_what, min_what;
    bool first = true;
    for (size_t wi = 0; wi < w.size(); ++wi) {
      const Value sub = Value(h_sub[wi]) * mu.p(n, static_cast<int>(wi));
      const Value hat = Value(h_full[static_cast<size_t>(w[wi])]) * mu.p(n, static_cast<int>(wi));
      if (first || sub > max_sub) max_sub = sub;
      if (first || hat > max_what) max_what = hat;
      if (first || hat < min_what) min_what = hat;
      first = false;
    }

    auto bracket = [&](const Value& num_lo, const Value& den) -> std::optional<Bracket> {
      if (!(den.num() > 0) || den.num() <= den.err()) return std::nullopt;
      Bracket b;
      b.lo = num_lo / den;
      if (res && !any_unbounded) b.hi = (num_lo + *res) / den;
      return b;
    };

    if (min_wp_lo) {
      out.rho.push_back(bracket(*min_wp_lo, max_sub));
      out.rho_prime.push_back(bracket(*min_wp_lo, max_what));
      out.sigma.push_back(bracket(*max_wp_lo, min_what));
    } else {
      out.rho.push_back(std::nullopt);
      out.rho_prime.push_back(std::nullopt);
      out.sigma.push_back(std::nullopt);
    }
  }
  out.observed_C = observed_c;
  return out;
}

namespace {

using RatVec = std::vector<Rat>;

RatVec transpose_apply(const IncidenceMatrix& f, const RatVec& g) {
  // (F^T g)_w = sum_v g_v f_{v,w}
  RatVec out(static_cast<size_t>(f.cols()), Rat(0));
  for (int v = 0; v < f.rows(); ++v) {
    if (g[static_cast<size_t>(v)] == 0) continue;
    for (int w = 0; w < f.cols(); ++w)
      if (f.at(v, w) != 0) out[static_cast<size_t>(w)] += g[static_cast<size_t>(v)] * Rat(f.at(v, w));
  }
  return out;
}

bool vec_is_zero(const RatVec& v) {
  for (const Rat& x : v)
    if (x != 0) return false;
  return true;
}

/// Smallest beta with a <= beta * b componentwise, or empty when supp(a) is
/// not contained in supp(b).
std::optional<Rat> dominating_ratio(const RatVec& a, const RatVec& b) {
  std::optional<Rat> beta;
  for (size_t i = 0; i < a.size(); ++i) {
    if (b[i] == 0) {
      if (a[i] != 0) return std::nullopt;
      continue;
    }
    Rat r = a[i] / b[i];
    if (!beta || r > *beta) beta = r;
  }
  return beta ? beta : std::optional<Rat>(Rat(0));
}

/// Largest beta with a >= beta * b componentwise (beta = 0 when b has support
/// outside supp(a)).
Rat dominated_ratio(const RatVec& a, const RatVec& b) {
  std::optional<Rat> beta;
  for (size_t i = 0; i < b.size(); ++i) {
    if (b[i] == 0) continue;
    Rat r = a[i] / b[i];
    if (!beta || r < *beta) beta = r;
  }
  return beta.value_or(Rat(0));
}

bool vec_proportional(const RatVec& a, const RatVec& b, Rat& beta_out) {
  auto up = dominating_ratio(a, b);
  if (!up) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != *up * b[i]) return false;
  beta_out = *up;
  return true;
}

}  // namespace

Verdict stationary_verdict(const DiagramSpec& spec, const VertexSelection& sel,
                           const CylinderMeasure& mu) {
  if (!spec.is_stationary() || !sel.is_stationary())
    throw Error("stationary_verdict: non-stationary inputs");
  if (!mu.is_stationary_pf()) throw Error("stationary_verdict: measure is not stationary-PF");
  const PFEigendata& eig = mu.eigendata();
  if (!eig.exact) throw Error("stationary_verdict: requires exactly certified eigendata");

  const int count = spec.vertex_count(1);
  const auto& w = sel.selected(1, count);
  check_match(spec, sel, mu, 1);
  const IncidenceMatrix& f = spec.incidence(1);
  const Rat lambda = eig.lambda_exact;

  // g_v = sum_{w in W} x_w f_{w,v} on the complement, 0 on W. The criterion
  // terms are u_n = c * lambda^-n * (g . h^(n)), a linear-recurrence sequence.
  RatVec g(static_cast<size_t>(count), Rat(0));
  for (int v : sel.complement(1, count))
    for (size_t wi = 0; wi < w.size(); ++wi)
      g[static_cast<size_t>(v)] += eig.x_exact[wi] * Rat(f.at(w[wi], v));

  Verdict verdict;
  if (vec_is_zero(g)) {
    verdict.kind = Verdict::Kind::FiniteProved;
    verdict.justification = "no edges from selected vertices into the complement; extension adds no mass";
    verdict.total_exact = Rat(1);
    return verdict;
  }

  // Normalization constant c = 1 / sum root_edges_w x_w over the subdiagram.
  Rat c_den(0);
  const auto& sub_root = mu.spec().root_edges();
  for (size_t wi = 0; wi < w.size(); ++wi) c_den += Rat(sub_root[wi]) * eig.x_exact[wi];
  const Rat c = Rat(1) / c_den;

  auto u_at = [&](int n) {  // exact u_n
    Rat dot(0);
    const std::vector<Int> h = spec.heights(n);
    for (int v = 0; v < count; ++v)
      if (g[static_cast<size_t>(v)] != 0) dot += g[static_cast<size_t>(v)] * Rat(h[static_cast<size_t>(v)]);
    return c * dot / rat_pow(lambda, n);
  };

  const int max_shift = 4 * count + 16;
  const int max_period = count + 4;
  std::vector<RatVec> gs;
  gs.push_back(g);
  for (int m = 1; m <= max_shift + max_period; ++m) gs.push_back(transpose_apply(f, gs.back()));

  auto finish_proportional = [&](int n0, int k, const Rat& beta) {
    Verdict v;
    v.depth_inspected = n0 + k;
    const Rat q = beta / rat_pow(lambda, k);
    Rat head(0);
    for (int n = 1; n <= n0; ++n) head += u_at(n);
    Rat block(0);
    for (int j = 1; j <= k; ++j) block += u_at(n0 + j);
    if (block == 0) {
      v.kind = Verdict::Kind::FiniteProved;
      v.justification = "criterion terms vanish identically past level " + std::to_string(n0);
      v.total_exact = Rat(1) + head;
    } else if (q < 1) {
      v.kind = Verdict::Kind::FiniteProved;
      v.total_exact = Rat(1) + head + block / (Rat(1) - q);
      v.justification = "criterion terms satisfy the exact recurrence u_{n+" + std::to_string(k) +
                        "} = (" + to_fraction(q) + ") u_n past level " + std::to_string(n0) +
                        "; geometric sum closes";
    } else {
      v.kind = Verdict::Kind::InfiniteProved;
      v.justification = "criterion terms satisfy the exact recurrence u_{n+" + std::to_string(k) +
                        "} = (" + to_fraction(q) + ") u_n past level " + std::to_string(n0) +
                        " with ratio >= 1; partial masses grow without bound";
    }
    return v;
  };

  // Exact proportionality certificates first (they give closed-form totals).
  for (int n0 = 0; n0 <= max_shift; ++n0)
    for (int k = 1; k <= max_period && n0 + k <= max_shift + max_period; ++k) {
      Rat beta;
      if (vec_proportional(gs[static_cast<size_t>(n0 + k)], gs[static_cast<size_t>(n0)], beta))
        return finish_proportional(n0, k, beta);
    }

  // Inequality certificates: componentwise domination transported by F^T.
  for (int n0 = 0; n0 <= max_shift; ++n0)
    for (int k = 1; k <= max_period && n0 + k <= max_shift + max_period; ++k) {
      const RatVec& hi = gs[static_cast<size_t>(n0 + k)];
      const RatVec& lo = gs[static_cast<size_t>(n0)];
      const Rat lam_k = rat_pow(lambda, k);
      if (auto beta = dominating_ratio(hi, lo); beta && *beta < lam_k) {
        Verdict v;
        v.kind = Verdict::Kind::FiniteProved;
        v.depth_inspected = n0 + k;
        const Rat q = *beta / lam_k;
        Rat head(0);
        for (int n = 1; n <= n0; ++n) head += u_at(n);
        Rat block(0);
        for (int j = 1; j <= k; ++j) block += u_at(n0 + j);
        const Rat upper = Rat(1) + head + block / (Rat(1) - q);
        // Lower bound: a longer exact partial sum.
        Rat lower(1);
        for (int n = 1; n <= n0 + 3 * k + 20; ++n) lower += u_at(n);
        v.total_bounds = {static_cast<double>(lower), static_cast<double>(upper)};
        v.justification = "exact componentwise bound u_{n+" + std::to_string(k) + "} <= (" +
                          to_fraction(q) + ") u_n past level " + std::to_string(n0) +
                          "; geometric tail bound certifies finiteness";
        return v;
      }
      const Rat beta_lo = dominated_ratio(hi, lo);
      if (beta_lo >= lam_k) {
        // Terms cannot decay; need one positive block term to conclude.
        bool positive = false;
        for (int j = 1; j <= k; ++j)
          if (u_at(n0 + j) > 0) positive = true;
        if (positive) {
          Verdict v;
          v.kind = Verdict::Kind::InfiniteProved;
          v.depth_inspected = n0 + k;
          v.justification = "exact componentwise bound u_{n+" + std::to_string(k) + "} >= (" +
                            to_fraction(beta_lo / lam_k) + ") u_n past level " +
                            std::to_string(n0) + " keeps criterion terms bounded away from zero";
          return v;
        }
      }
    }

  Verdict v;
  v.kind = Verdict::Kind::Inconclusive;
  v.depth_inspected = max_shift + max_period;
  v.justification = "certificate search exhausted without an exact ratio bound";
  return v;
}

ExtensionReport analyze(const DiagramSpec& spec, const VertexSelection& sel,
                        const CylinderMeasure& mu, int N, const AnalysisOptions& opts) {
  if (N < 2) throw Error("analyze: depth must be >= 2");
  check_match(spec, sel, mu, N);

  ExtensionReport report;
  report.depth = N;
  report.mode = mu.mode();
  report.S = partial_masses(spec, sel, mu, N);
  CriterionTerms crit = criterion_terms(spec, sel, mu, N);
  report.terms5 = std::move(crit.u);
  report.d = std::move(crit.d);
  report.terms3 = condition3_terms(spec, sel, mu, N);
  report.terms4 = condition4_terms(spec, sel, N);
  MinMaxTerms mm = corollary_minmax(spec, sel, N, false);
  report.terms7q = std::move(mm.q_terms);
  report.terms7h = std::move(mm.h_terms);
  report.positivity_ok = mm.positivity_ok;

  // Verdict: exact stationary rule when it applies, trend rules otherwise.
  bool have_verdict = false;
  if (spec.is_stationary() && sel.is_stationary() && mu.is_stationary_pf() &&
      mu.mode() == NumericMode::Exact) {
    Verdict v = stationary_verdict(spec, sel, mu);
    if (v.kind != Verdict::Kind::Inconclusive) {
      report.verdict = std::move(v);
      have_verdict = true;
    }
  }
  if (!have_verdict) {
    Verdict v;
    v.depth_inspected = N;
    const auto& d = report.d;
    const int window = std::min<int>(opts.window, static_cast<int>(d.size()));
    bool all_zero = true;
    for (const Value& x : d)
      if (!x.is_zero()) all_zero = false;
    if (all_zero) {
      v.kind = Verdict::Kind::FiniteTrend;
      v.justification = "increments vanish to the inspected depth";
      const double s_last = report.S.back().num();
      v.total_bounds = {s_last, s_last};
    } else if (window >= 2) {
      const size_t start = d.size() - static_cast<size_t>(window);
      bool ratio_ok = true;
      Value r;  // max ratio over the window
      for (size_t i = start; i + 1 < d.size(); ++i) {
        if (!(d[i].num() > 0) || !(d[i + 1].num() > 0)) {
          ratio_ok = false;
          break;
        }
        Value ratio = d[i + 1] / d[i];
        if (i == start || ratio > r) r = ratio;
      }
      if (ratio_ok && r.num() < 1 && !(r.num() <= 0)) {
        v.kind = Verdict::Kind::FiniteTrend;
        const Value tail = d.back() * r / (Value(1) - r);
        v.total_bounds = {report.S.back().num(), report.S.back().num() + tail.num()};
        v.justification = "increment ratios stay below " +
                          (r.exact() ? to_fraction(r.rat()) : r.decimal(6)) + " over the last " +
                          std::to_string(window) + " levels; implied tail bound " + tail.decimal(6);
      } else {
        bool bounded_below = true;
        for (size_t i = start; i < d.size(); ++i)
          if (!(d[i].num() > 0)) bounded_below = false;
        if (bounded_below && !ratio_ok) {
          v.kind = Verdict::Kind::DivergentTrend;
          v.justification = "increments stay positive without a contracting ratio over the last " +
                            std::to_string(window) + " levels";
        } else if (bounded_below) {
          v.kind = Verdict::Kind::DivergentTrend;
          v.justification = "increments bounded below by a positive constant over the last " +
                            std::to_string(window) + " levels";
        } else {
          v.kind = Verdict::Kind::Inconclusive;
          v.justification = "no contracting-ratio or positive-increment pattern over the last " +
                            std::to_string(window) + " levels";
        }
      }
    } else {
      v.kind = Verdict::Kind::Inconclusive;
      v.justification = "too few increments for the trend window";
    }
    if (mu.mode() == NumericMode::Float && v.proved()) {
      v.kind = v.kind == Verdict::Kind::FiniteProved ? Verdict::Kind::FiniteTrend
                                                     : Verdict::Kind::DivergentTrend;
      v.justification += " (float-mode data; verdict downgraded to a trend)";
    }
    report.verdict = std::move(v);
  }

  std::optional<Value> total_upper;
  if (report.verdict.total_exact)
    total_upper = Value(*report.verdict.total_exact);
  else if (report.verdict.total_bounds)
    total_upper = Value::approx(report.verdict.total_bounds->second, 0.0);
  const ExtendedMeasure ext = extend_measure(spec, sel, mu, N, total_upper, opts.cap);
  report.ratios = ratio_diagnostics(spec, sel, mu, N, ext);
  return report;
}

}  // namespace bratteli
