#include "bratteli/measure.hpp"

#include <algorithm>
#include <cmath>

namespace bratteli {

namespace {

using RatMatrix = std::vector<std::vector<Rat>>;

RatMatrix transpose_to_rat(const IncidenceMatrix& m) {
  RatMatrix a(static_cast<size_t>(m.cols()), std::vector<Rat>(static_cast<size_t>(m.rows())));
  for (int v = 0; v < m.rows(); ++v)
    for (int w = 0; w < m.cols(); ++w) a[w][v] = Rat(m.at(v, w));
  return a;
}

/// Monic characteristic polynomial coefficients a_0..a_{n-1} of a rational
/// matrix, via the Faddeev-LeVerrier recurrence: p(x) = x^n + a_{n-1} x^{n-1}
/// + ... + a_0.
std::vector<Rat> char_poly(const RatMatrix& a) {
  const size_t n = a.size();
  std::vector<Rat> coeff(n, Rat(0));
  RatMatrix m(n, std::vector<Rat>(n, Rat(0)));
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;  // M_1 = I
  for (size_t k = 1; k <= n; ++k) {
    if (k > 1) {
      // M_k = A * M_{k-1} + a_{n-k+1} I
      RatMatrix next(n, std::vector<Rat>(n, Rat(0)));
      for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < n; ++l) {
          if (a[i][l] == 0) continue;
          for (size_t j = 0; j < n; ++j) next[i][j] += a[i][l] * m[l][j];
        }
      for (size_t i = 0; i < n; ++i) next[i][i] += coeff[n - k + 1];
      m = std::move(next);
    }
    Rat trace(0);
    for (size_t i = 0; i < n; ++i)
      for (size_t l = 0; l < n; ++l) trace += a[i][l] * m[l][i];
    coeff[n - k] = -trace / Rat(static_cast<long>(k));
  }
  return coeff;
}

Rat eval_monic(const std::vector<Rat>& coeff, const Rat& x) {
  Rat acc(1);
  for (size_t i = coeff.size(); i-- > 0;) acc = acc * x + coeff[i];
  return acc;
}

/// Positive integer roots of a monic integer-coefficient polynomial (rational
/// roots of a monic integer polynomial are integers).
std::vector<Int> positive_integer_roots(const std::vector<Rat>& coeff) {
  // Strip trailing zero coefficients (powers of x).
  size_t low = 0;
  while (low < coeff.size() && coeff[low] == 0) ++low;
  std::vector<Int> roots;
  if (low == coeff.size()) return roots;  // p(x) = x^n, only root 0
  const Rat& c0 = coeff[low];
  Int constant = boost::multiprecision::numerator(c0);
  if (boost::multiprecision::denominator(c0) != 1) return roots;  // non-integer poly
  if (constant < 0) constant = -constant;
  for (Int d = 1; d * d <= constant; ++d) {
    if (constant % d != 0) continue;
    for (const Int& cand : {Int(d), Int(constant / d)}) {
      if (eval_monic(coeff, Rat(cand)) == 0 &&
          std::find(roots.begin(), roots.end(), cand) == roots.end())
        roots.push_back(cand);
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// Null space basis of (a - lambda I) by exact Gauss-Jordan elimination.
std::vector<std::vector<Rat>> null_space(RatMatrix a, const Rat& lambda) {
  const size_t n = a.size();
  for (size_t i = 0; i < n; ++i) a[i][i] -= lambda;
  std::vector<int> pivot_col_of_row;
  size_t row = 0;
  for (size_t col = 0; col < n && row < n; ++col) {
    size_t piv = row;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) continue;
    std::swap(a[row], a[piv]);
    const Rat inv = a[row][col];
    for (size_t j = 0; j < n; ++j) a[row][j] /= inv;
    for (size_t i = 0; i < n; ++i) {
      if (i == row || a[i][col] == 0) continue;
      const Rat factor = a[i][col];
      for (size_t j = 0; j < n; ++j) a[i][j] -= factor * a[row][j];
    }
    pivot_col_of_row.push_back(static_cast<int>(col));
    ++row;
  }
  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_col_of_row) is_pivot[static_cast<size_t>(c)] = true;
  std::vector<std::vector<Rat>> basis;
  for (size_t free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[free_col]) continue;
    std::vector<Rat> vec(n, Rat(0));
    vec[free_col] = 1;
    for (size_t r = 0; r < pivot_col_of_row.size(); ++r)
      vec[static_cast<size_t>(pivot_col_of_row[r])] = -a[r][free_col];
    basis.push_back(std::move(vec));
  }
  return basis;
}

bool all_nonneg(const std::vector<Rat>& v) {
  for (const Rat& x : v)
    if (x < 0) return false;
  return true;
}

bool is_zero_vec(const std::vector<Rat>& v) {
  for (const Rat& x : v)
    if (x != 0) return false;
  return true;
}

/// Tries to produce a nonnegative nonzero vector in the span of `basis`.
std::optional<std::vector<Rat>> nonneg_in_span(const std::vector<std::vector<Rat>>& basis) {
  auto consider = [](std::vector<Rat> v) -> std::optional<std::vector<Rat>> {
    if (is_zero_vec(v)) return std::nullopt;
    bool any_pos = false, any_neg = false;
    for (const Rat& x : v) {
      if (x > 0) any_pos = true;
      if (x < 0) any_neg = true;
    }
    if (any_neg && !any_pos)
      for (Rat& x : v) x = -x;
    if (all_nonneg(v)) return v;
    return std::nullopt;
  };
  for (const auto& b : basis)
    if (auto v = consider(b)) return v;
  if (basis.size() > 1) {
    std::vector<Rat> sum(basis[0].size(), Rat(0));
    for (const auto& b : basis) {
      std::vector<Rat> oriented = b;
      Rat first_sign(0);
      for (const Rat& x : b)
        if (x != 0) {
          first_sign = x;
          break;
        }
      if (first_sign < 0)
        for (Rat& x : oriented) x = -x;
      for (size_t i = 0; i < sum.size(); ++i) sum[i] += oriented[i];
    }
    if (auto v = consider(sum)) return v;
  }
  return std::nullopt;
}

/// Power iteration on (A + I) from the all-ones vector; returns the estimated
/// spectral radius of A, the L1-normalized vector and the residual.
struct PowerResult {
  double lambda = 0.0;
  std::vector<double> x;
  double residual = 0.0;
  bool converged = false;
};

PowerResult power_iterate(const RatMatrix& a, double tol, int max_iter = 200000) {
  const size_t n = a.size();
  std::vector<std::vector<double>> af(n, std::vector<double>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) af[i][j] = static_cast<double>(a[i][j]) + (i == j ? 1.0 : 0.0);
  PowerResult r;
  r.x.assign(n, 1.0 / static_cast<double>(n));
  std::vector<double> y(n);
  for (int it = 0; it < max_iter; ++it) {
    double norm = 0.0;
    for (size_t i = 0; i < n; ++i) {
      y[i] = 0.0;
      for (size_t j = 0; j < n; ++j) y[i] += af[i][j] * r.x[j];
      norm += std::abs(y[i]);
    }
    if (norm == 0.0) break;
    double shifted = 0.0;
    for (size_t i = 0; i < n; ++i) {
      y[i] /= norm;
      shifted += std::abs(y[i]);
    }
    (void)shifted;
    r.lambda = norm - 1.0;
    // Residual of the unshifted problem: ||A x - lambda x||_inf / ||x||_inf.
    double res = 0.0, xmax = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double ax = 0.0;
      for (size_t j = 0; j < n; ++j) ax += (af[i][j] - (i == j ? 1.0 : 0.0)) * y[j];
      res = std::max(res, std::abs(ax - r.lambda * y[i]));
      xmax = std::max(xmax, std::abs(y[i]));
    }
    r.x = y;
    if (xmax > 0 && res / xmax <= tol) {
      r.residual = res / xmax;
      r.converged = true;
      return r;
    }
    r.residual = xmax > 0 ? res / xmax : res;
  }
  return r;
}

}  // namespace

PFEigendata pf_eigendata(const IncidenceMatrix& m, NumericMode mode, double tol) {
  if (m.rows() != m.cols()) throw Error("pf_eigendata: matrix must be square");
  bool nonzero = false;
  for (int v = 0; v < m.rows(); ++v)
    if (m.row_has_positive(v)) nonzero = true;
  if (!nonzero) throw Error("pf_eigendata: zero matrix");

  const RatMatrix a = transpose_to_rat(m);
  const PowerResult pw = power_iterate(a, std::min(tol, 1e-10));

  if (mode == NumericMode::Exact) {
    const std::vector<Rat> coeff = char_poly(a);
    const std::vector<Int> roots = positive_integer_roots(coeff);
    // Largest integer root matching the float spectral-radius estimate.
    for (size_t i = roots.size(); i-- > 0;) {
      const Rat lambda(roots[i]);
      if (pw.converged &&
          std::abs(static_cast<double>(lambda) - pw.lambda) >
              1e-6 * std::max(1.0, pw.lambda))
        continue;
      auto basis = null_space(a, lambda);
      if (auto x = nonneg_in_span(basis)) {
        PFEigendata e;
        e.exact = true;
        e.lambda_exact = lambda;
        e.x_exact = *x;
        e.lambda_f = static_cast<double>(lambda);
        e.x_f.reserve(x->size());
        for (const Rat& r : *x) e.x_f.push_back(static_cast<double>(r));
        e.residual = 0.0;
        return e;
      }
    }
    // No exact certificate; fall through to float.
  }

  if (!pw.converged)
    throw Error("pf_eigendata: power iteration did not reach tolerance " + std::to_string(tol));
  PFEigendata e;
  e.exact = false;
  e.lambda_f = pw.lambda;
  e.x_f = pw.x;
  e.residual = pw.residual;
  return e;
}

CylinderMeasure CylinderMeasure::stationary_pf(const DiagramSpec& sub, const PFEigendata& eig) {
  if (!sub.is_stationary()) throw Error("stationary_pf: diagram spec is not stationary");
  const int dim = sub.vertex_count(1);
  if (eig.dim() != dim) throw Error("stationary_pf: eigendata dimension mismatch");
  if (!(eig.lambda().num() > 0)) throw Error("stationary_pf: eigenvalue must be positive");

  if (eig.exact) {
    // Verify F^T x = lambda x exactly and x >= 0 before trusting anything.
    const IncidenceMatrix& f = sub.incidence(1);
    for (int w = 0; w < dim; ++w) {
      if (eig.x_exact[static_cast<size_t>(w)] < 0)
        throw Error("stationary_pf: eigenvector has a negative entry");
      Rat lhs(0);
      for (int v = 0; v < dim; ++v)
        lhs += Rat(f.at(v, w)) * eig.x_exact[static_cast<size_t>(v)];
      if (lhs != eig.lambda_exact * eig.x_exact[static_cast<size_t>(w)])
        throw Error("stationary_pf: eigen equation fails at vertex " + std::to_string(w));
    }
  } else {
    for (double x : eig.x_f)
      if (x < 0) throw Error("stationary_pf: eigenvector has a negative entry");
  }

  CylinderMeasure mu(sub, Backing::StationaryPF);
  mu.eig_ = eig;
  mu.mode_ = eig.exact ? NumericMode::Exact : NumericMode::Float;
  mu.tolerance_ = eig.residual;
  Value denom;
  for (int w = 0; w < dim; ++w)
    denom += Value(sub.root_edges()[static_cast<size_t>(w)]) * eig.x(w);
  if (!(denom.num() > 0)) throw Error("stationary_pf: normalization sum is not positive");
  mu.norm_c_ = Value(1) / denom;
  return mu;
}

CylinderMeasure CylinderMeasure::explicit_table(const DiagramSpec& sub,
                                               std::vector<std::vector<Rat>> table,
                                               NumericMode mode, double tolerance) {
  if (table.size() < 2) throw Error("explicit_table: table depth must be >= 2");
  const int depth = static_cast<int>(table.size());
  for (int n = 1; n <= depth; ++n) {
    const auto& row = table[static_cast<size_t>(n) - 1];
    if (static_cast<int>(row.size()) != sub.vertex_count(n))
      throw Error("explicit_table: wrong vector length at level " + std::to_string(n));
    for (size_t v = 0; v < row.size(); ++v)
      if (row[v] < 0)
        throw Error("explicit_table: negative value at level " + std::to_string(n) + ", vertex " +
                    std::to_string(v));
  }
  auto within = [&](const Rat& diff) {
    if (mode == NumericMode::Exact) return diff == 0;
    return std::abs(static_cast<double>(diff)) <= tolerance;
  };
  for (int n = 1; n < depth; ++n) {
    const IncidenceMatrix& f = sub.incidence(n);
    for (int w = 0; w < f.cols(); ++w) {
      Rat sum(0);
      for (int v = 0; v < f.rows(); ++v)
        sum += Rat(f.at(v, w)) * table[static_cast<size_t>(n)][static_cast<size_t>(v)];
      if (!within(table[static_cast<size_t>(n) - 1][static_cast<size_t>(w)] - sum))
        throw Error("explicit_table: compatibility violated at level " + std::to_string(n) +
                    ", vertex " + std::to_string(w));
    }
  }
  for (int n = 1; n <= depth; ++n) {
    const std::vector<Int> h = sub.heights(n);
    Rat mass(0);
    for (size_t v = 0; v < h.size(); ++v) mass += Rat(h[v]) * table[static_cast<size_t>(n) - 1][v];
    if (!within(mass - 1))
      throw Error("explicit_table: not a probability measure at level " + std::to_string(n) +
                  " (total mass " + to_fraction(mass) + ")");
  }
  CylinderMeasure mu(sub, Backing::Table);
  mu.mode_ = mode;
  mu.tolerance_ = tolerance;
  mu.table_ = std::move(table);
  return mu;
}

Value CylinderMeasure::p(int n, int v) const {
  if (n < 1) throw Error("p: level must be >= 1");
  if (backing_ == Backing::StationaryPF) {
    const PFEigendata& e = *eig_;
    if (v < 0 || v >= e.dim()) throw Error("p: vertex out of range");
    return norm_c_ * value_pow(e.lambda(), 1 - static_cast<long>(n)) * e.x(v);
  }
  if (n > static_cast<int>(table_.size()))
    throw Error("insufficient table depth: level " + std::to_string(n) + " beyond table depth " +
                std::to_string(table_.size()));
  const auto& row = table_[static_cast<size_t>(n) - 1];
  if (v < 0 || v >= static_cast<int>(row.size())) throw Error("p: vertex out of range");
  if (mode_ == NumericMode::Float)
    return Value::approx(static_cast<double>(row[static_cast<size_t>(v)]), tolerance_);
  return Value(row[static_cast<size_t>(v)]);
}

const PFEigendata& CylinderMeasure::eigendata() const {
  if (backing_ != Backing::StationaryPF) throw Error("eigendata: not a stationary-PF measure");
  return *eig_;
}

CompatibilityReport check_compatibility(const CylinderMeasure& mu, const DiagramSpec& spec,
                                        int depth) {
  CompatibilityReport report;
  int limit = depth;
  if (mu.table_depth() > 0) limit = std::min(limit, mu.table_depth());
  if (spec.max_incidence_level() > 0) limit = std::min(limit, spec.max_incidence_level() + 1);
  const bool exact = mu.mode() == NumericMode::Exact;
  auto bad = [&](const Value& diff) {
    if (exact && diff.exact()) return diff.rat() != 0;
    return std::abs(diff.num()) > mu.tolerance() + diff.err();
  };
  for (int n = 1; n < limit; ++n) {
    const IncidenceMatrix& f = spec.incidence(n);
    for (int w = 0; w < f.cols(); ++w) {
      Value sum;
      for (int v = 0; v < f.rows(); ++v)
        if (f.at(v, w) != 0) sum += Value(f.at(v, w)) * mu.p(n + 1, v);
      Value diff = mu.p(n, w) - sum;
      if (bad(diff))
        report.violations.push_back({n, w, "compatibility: p(" + std::to_string(n) + "," +
                                               std::to_string(w) + ") != sum of extensions"});
    }
  }
  for (int n = 1; n <= limit; ++n) {
    const std::vector<Int> h = spec.heights(n);
    Value mass;
    for (size_t v = 0; v < h.size(); ++v) mass += Value(h[v]) * mu.p(n, static_cast<int>(v));
    Value diff = mass - Value(1);
    if (bad(diff))
      report.violations.push_back({n, -1, "normalization: total mass at level " +
                                              std::to_string(n) + " is " + mass.decimal()});
  }
  return report;
}

Value tower_measure(const CylinderMeasure& mu, const DiagramSpec& spec, int n, int v) {
  const std::vector<Int> h = spec.heights(n);
  if (v < 0 || v >= static_cast<int>(h.size())) throw Error("tower_measure: vertex out of range");
  return Value(h[static_cast<size_t>(v)]) * mu.p(n, v);
}

}  // namespace bratteli
