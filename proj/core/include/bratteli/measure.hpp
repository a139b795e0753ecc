/// @file measure.hpp
/// @brief Tail-invariant cylinder measures on diagram path spaces and the
///        Perron-Frobenius eigendata backing the stationary family.

#pragma once

#include "bratteli/diagram.hpp"
#include "bratteli/value.hpp"

#include <optional>
#include <vector>

namespace bratteli {

enum class NumericMode { Exact, Float };

/// Dominant eigenvalue lambda and a nonnegative vector x with F^T x = lambda x.
/// Exact certification means the eigen equation holds in rational arithmetic;
/// otherwise the float residual ||F^T x - lambda x||_inf / ||x||_inf is kept.
struct PFEigendata {
  bool exact = false;
  Rat lambda_exact;
  std::vector<Rat> x_exact;
  double lambda_f = 0.0;
  std::vector<double> x_f;
  double residual = 0.0;

  Value lambda() const {
    return exact ? Value(lambda_exact) : Value::approx(lambda_f, residual);
  }
  int dim() const {
    return static_cast<int>(exact ? x_exact.size() : x_f.size());
  }
  Value x(int i) const {
    return exact ? Value(x_exact[static_cast<size_t>(i)])
                 : Value::approx(x_f[static_cast<size_t>(i)], residual);
  }
};

/// Computes Perron-Frobenius eigendata of m^T. Exact mode succeeds only when
/// an integer eigenvalue candidate (integer-root search over the
/// characteristic polynomial) verifies exactly together with a nonnegative
/// rational eigenvector; otherwise falls back to power iteration with the
/// reported residual <= tol.
PFEigendata pf_eigendata(const IncidenceMatrix& m, NumericMode mode, double tol = 1e-12);

/// Location-carrying record for a violated measure invariant.
struct MeasureViolation {
  int level = 0;
  int vertex = -1;
  std::string what;
};

struct CompatibilityReport {
  std::vector<MeasureViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Assignment (n, v) -> p_v^(n), the common measure of any root-to-v cylinder.
/// Backed either by a stationary Perron-Frobenius family or an explicit table.
/// Immutable after construction; evaluation is pure.
class CylinderMeasure {
 public:
  /// p_w^(n) = c lambda^(1-n) x_w with c = 1 / sum_w root_edges_w x_w.
  /// `sub` must be stationary and eig must satisfy F^T x = lambda x.
  static CylinderMeasure stationary_pf(const DiagramSpec& sub, const PFEigendata& eig);

  /// Level-indexed table of p-vectors (levels 1..depth). The compatibility and
  /// normalization invariants are checked to table depth; violations throw.
  static CylinderMeasure explicit_table(const DiagramSpec& sub, std::vector<std::vector<Rat>> table,
                                        NumericMode mode = NumericMode::Exact,
                                        double tolerance = 0.0);

  NumericMode mode() const { return mode_; }
  double tolerance() const { return tolerance_; }
  const DiagramSpec& spec() const { return spec_; }

  /// Evaluates p_v^(n). Tables never extrapolate past their depth.
  Value p(int n, int v) const;

  /// Levels available, or 0 when unbounded (stationary backing).
  int table_depth() const { return backing_ == Backing::Table ? static_cast<int>(table_.size()) : 0; }
  bool is_stationary_pf() const { return backing_ == Backing::StationaryPF; }
  const PFEigendata& eigendata() const;

 private:
  enum class Backing { StationaryPF, Table };
  CylinderMeasure(DiagramSpec spec, Backing b) : spec_(std::move(spec)), backing_(b) {}

  DiagramSpec spec_;
  Backing backing_;
  NumericMode mode_ = NumericMode::Exact;
  double tolerance_ = 0.0;
  // StationaryPF payload
  std::optional<PFEigendata> eig_;
  Value norm_c_;
  // Table payload
  std::vector<std::vector<Rat>> table_;
};

/// Checks the invariance identity p_w^(n) = sum_v f_{v,w} p_v^(n+1) and the
/// normalization sum_v h_v^(n) p_v^(n) = 1 level by level up to `depth`.
CompatibilityReport check_compatibility(const CylinderMeasure& mu, const DiagramSpec& spec,
                                        int depth);

/// mu(X_v^(n)) = h_v^(n) p_v^(n).
Value tower_measure(const CylinderMeasure& mu, const DiagramSpec& spec, int n, int v);

}  // namespace bratteli
