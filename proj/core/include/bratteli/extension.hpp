/// @file extension.hpp
/// @brief Extension of a subdiagram measure to the tail-saturation: partial
///        masses, finiteness criteria, min/max corollary terms, truncated
///        extended tower values and ratio diagnostics, plus verdicts.

#pragma once

#include "bratteli/measure.hpp"

#include <optional>
#include <tuple>
#include <vector>

namespace bratteli {

struct Verdict {
  enum class Kind { FiniteProved, InfiniteProved, FiniteTrend, DivergentTrend, Inconclusive };
  Kind kind = Kind::Inconclusive;
  std::string justification;
  /// Total extension mass, exact, when a closed form was certified.
  std::optional<Rat> total_exact;
  /// [lower, upper] bounds on the total when finite but not closed-form.
  std::optional<std::pair<double, double>> total_bounds;
  int depth_inspected = 0;

  bool proved() const { return kind == Kind::FiniteProved || kind == Kind::InfiniteProved; }
  bool finite() const { return kind == Kind::FiniteProved || kind == Kind::FiniteTrend; }
};

const char* verdict_kind_name(Verdict::Kind k);

/// S_n = sum_{w in W_n} h_w^(n) p_w^(n) for n = 1..N, with full-diagram
/// heights and subdiagram cylinder values. Non-decreasing; S_1 = 1 for a
/// probability measure.
std::vector<Value> partial_masses(const DiagramSpec& spec, const VertexSelection& sel,
                                  const CylinderMeasure& mu, int N);

/// Necessary-condition terms t_n = sum_{w in W_{n+1}} sum_{v in W'_n}
/// q_{w,v}^(n) mu(Xbar_w^(n+1)), n = 1..N-1 (subdiagram tower masses).
std::vector<Value> condition3_terms(const DiagramSpec& spec, const VertexSelection& sel,
                                    const CylinderMeasure& mu, int N);

/// Sufficient-condition terms s_n = sum_{w in W_{n+1}} sum_{v in W'_n}
/// q_{w,v}^(n), n = 1..N-1. Measure-free.
std::vector<Value> condition4_terms(const DiagramSpec& spec, const VertexSelection& sel, int N);

struct CriterionTerms {
  std::vector<Value> u;  // u_n = sum_w muhat(X_w^(n+1)) sum_{v in W'_n} q_{w,v}
  std::vector<Value> d;  // d_n = S_{n+1} - S_n; equals u_n exactly in exact mode
};

/// Both routes of the finiteness criterion, n = 1..N-1.
CriterionTerms criterion_terms(const DiagramSpec& spec, const VertexSelection& sel,
                               const CylinderMeasure& mu, int N);

struct MinMaxTerms {
  std::vector<Value> q_terms;  // m_n = min_{w in W_{n+1}} max_{v in W'_n} q_{w,v}
  std::vector<Rat> h_terms;    // r_n = min_w max_v h_v^(n) / h_w^(n+1)
  bool positivity_ok = true;
  std::vector<std::tuple<int, int, int>> violations;  // (level n, w, v) with f_{w,v} = 0
};

/// Corollary min/max term sequences, n = 1..N-1. With require_positive the
/// standing assumption f_{w,v} > 0 (w in W_{n+1}, v in W'_n) is enforced and
/// a violation throws; otherwise violations are recorded and terms computed
/// anyway.
MinMaxTerms corollary_minmax(const DiagramSpec& spec, const VertexSelection& sel, int N,
                             bool require_positive);

/// Truncated extension values. The backward sweep is seeded at the truncation
/// depth with the subdiagram cylinder values on the selected vertices (zero on
/// the complement) and propagated through the full incidence matrices, so
/// every value counts exactly the paths that are inside the selected sets from
/// the truncation depth on: a lower bound of the true extension value,
/// monotone in the depth.
class ExtendedMeasure {
 public:
  int depth() const { return depth_; }

  /// Lower bound for p-hat_v^(n) at any vertex (exact on W_n when no edge
  /// leaves the selected sets).
  Value p_hat_lower(int n, int v) const;
  /// Lower bound for muhat(X_v^(n)) = h_v^(n) p-hat_v^(n).
  Value tower_lower(int n, int v) const;

  /// True when the value did not move between the two truncation depths.
  bool stabilized(int n, int v) const;
  /// True when the lower bound exceeded the divergence cap.
  bool unbounded_at_depth(int n, int v) const;

  /// Upper residual for any single truncated tower value: total upper bound
  /// minus S_depth. Empty when no finite total bound is known.
  std::optional<Value> residual() const { return residual_; }

  /// sum_{v in V_1} h_v^(1) p-hat_v^(1); equals S_depth exactly in exact mode
  /// because the sweep conserves height-weighted mass level by level.
  Value total_lower() const { return total_lower_; }

 private:
  friend ExtendedMeasure extend_measure(const DiagramSpec&, const VertexSelection&,
                                        const CylinderMeasure&, int,
                                        const std::optional<Value>&, double);
  ExtendedMeasure() = default;
  std::optional<DiagramSpec> spec_;
  int depth_ = 0;
  std::vector<std::vector<Value>> values_;       // [n-1][v] lower bounds, all vertices
  std::vector<std::vector<bool>> is_selected_;   // [n-1][v]
  std::vector<std::vector<bool>> stabilized_;    // [n-1][v], meaningful on W' only
  std::vector<std::vector<bool>> unbounded_;     // [n-1][v]
  std::optional<Value> residual_;
  Value total_lower_;
};

/// Computes the truncated extension to `depth`. When a finite upper bound for
/// the total mass is known, pass it so residuals can be attached. `cap`
/// flags towers whose lower bound alone already exceeds it.
ExtendedMeasure extend_measure(const DiagramSpec& spec, const VertexSelection& sel,
                               const CylinderMeasure& mu, int depth,
                               const std::optional<Value>& total_upper = std::nullopt,
                               double cap = 1e6);

struct Bracket {
  Value lo;
  std::optional<Value> hi;  // empty when no upper bound is available
};

struct RatioDiagnostics {
  // Indexed by n-1 for n = 1..N; empty optional = undefined at that level
  // (denominator bracket touches zero).
  std::vector<std::optional<Bracket>> rho;        // min_{W'} muhat / max_W mubar
  std::vector<std::optional<Bracket>> rho_prime;  // min_{W'} muhat / max_W muhat
  std::vector<std::optional<Bracket>> sigma;      // max_{W'} muhat / min_W muhat
  std::optional<double> observed_C;               // max_n |W_n| / |W'_n|
};

RatioDiagnostics ratio_diagnostics(const DiagramSpec& spec, const VertexSelection& sel,
                                   const CylinderMeasure& mu, int N, const ExtendedMeasure& ext);

/// Exact finiteness verdict for the fully stationary case (stationary
/// diagram, stationary selection, exact stationary-PF measure). Certified by
/// exact linear-recurrence comparison of the criterion terms against the
/// eigenvalue growth; proved verdicts carry either a closed-form total or
/// exact geometric bounds.
Verdict stationary_verdict(const DiagramSpec& spec, const VertexSelection& sel,
                           const CylinderMeasure& mu);

struct AnalysisOptions {
  int window = 10;       // consecutive levels the trend rules inspect
  double cap = 1e6;      // divergence cap for truncated extension values
};

struct ExtensionReport {
  int depth = 0;
  NumericMode mode = NumericMode::Exact;
  std::vector<Value> S;        // n = 1..depth
  std::vector<Value> d;        // n = 1..depth-1
  std::vector<Value> terms3;   // n = 1..depth-1
  std::vector<Value> terms4;
  std::vector<Value> terms5;
  std::vector<Value> terms7q;  // min/max stochastic terms
  std::vector<Rat> terms7h;    // min/max height-ratio terms
  bool positivity_ok = true;
  RatioDiagnostics ratios;
  Verdict verdict;
};

/// Runs every criterion and diagnostic to depth N and classifies the
/// extension. Stationary inputs get a proved verdict where the exact rule
/// certifies one; everything else gets an honest trend classification.
ExtensionReport analyze(const DiagramSpec& spec, const VertexSelection& sel,
                        const CylinderMeasure& mu, int N, const AnalysisOptions& opts = {});

}  // namespace bratteli
