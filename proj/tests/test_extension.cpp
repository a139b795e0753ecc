#include "bratteli/extension.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace bratteli;
using namespace bratteli::testing;

namespace {

DiagramSpec infinite_case() {
  return DiagramSpec::stationary(IncidenceMatrix{{3, 0, 0}, {1, 2, 0}, {0, 1, 3}});
}

DiagramSpec finite_case() {
  return DiagramSpec::stationary(IncidenceMatrix{{2, 0, 0}, {1, 2, 0}, {0, 1, 3}});
}

VertexSelection last_two() { return VertexSelection::stationary({1, 2}); }

CylinderMeasure pf_measure(const DiagramSpec& spec, const VertexSelection& sel) {
  DiagramSpec sub = subdiagram(spec, sel, 8);
  return CylinderMeasure::stationary_pf(sub, pf_eigendata(sub.incidence(1), NumericMode::Exact));
}

// p_w^(n) = (1/2) 3^(1-n) on the two-vertex subdiagram, as an explicit table.
std::vector<std::vector<Rat>> geometric_table(int depth) {
  std::vector<std::vector<Rat>> table;
  for (int n = 1; n <= depth; ++n) {
    const Rat p = Rat(1, 2) * rat_pow(Rat(1, 3), n - 1);
    table.push_back({p, p});
  }
  return table;
}

// The same diagram presented as an explicit level list, hiding stationarity.
DiagramSpec as_explicit(const DiagramSpec& st, int levels) {
  std::vector<IncidenceMatrix> mats(static_cast<size_t>(levels), st.incidence(1));
  return DiagramSpec::explicit_levels(std::move(mats));
}

VertexSelection explicit_last_two(int levels) {
  std::vector<std::vector<int>> subsets(static_cast<size_t>(levels), std::vector<int>{1, 2});
  return VertexSelection::explicit_levels(std::move(subsets));
}

Rat two_thirds_pow(int n) { return rat_pow(Rat(2, 3), n); }

}  // namespace

TEST_CASE("partial masses of the diverging example") {
  const std::vector<Value> S = partial_masses(infinite_case(), last_two(), pf_measure(infinite_case(), last_two()), 40);
  REQUIRE(S.size() == 40);
  for (int n = 1; n <= 40; ++n) CHECK(S[static_cast<size_t>(n) - 1].rat() == Rat(1) + Rat(n - 1, 6));
}

TEST_CASE("partial masses of the converging example") {
  const std::vector<Value> S = partial_masses(finite_case(), last_two(), pf_measure(finite_case(), last_two()), 40);
  for (int n = 1; n <= 40; ++n) {
    const Rat expect = Rat(3, 2) - Rat(1, 2) * two_thirds_pow(n - 1);
    CHECK(S[static_cast<size_t>(n) - 1].rat() == expect);
  }
}

TEST_CASE("partial masses agree with explicit path enumeration") {
  DiagramSpec spec = finite_case();
  const VertexSelection sel = last_two();
  CylinderMeasure mu = pf_measure(spec, sel);
  const std::vector<Value> S = partial_masses(spec, sel, mu, 7);
  for (int n = 1; n <= 7; ++n) {
    const std::vector<long> counts = enumerate_paths(spec, n);
    const std::vector<int> w = sel.selected(n, spec.vertex_count(n));
    Rat oracle(0);
    for (size_t i = 0; i < w.size(); ++i)
      oracle += Rat(counts[static_cast<size_t>(w[i])]) * mu.p(n, static_cast<int>(i)).rat();
    CHECK(S[static_cast<size_t>(n) - 1].rat() == oracle);
  }
}

TEST_CASE("necessary-condition terms") {
  const std::vector<Value> t = condition3_terms(infinite_case(), last_two(), pf_measure(infinite_case(), last_two()), 30);
  REQUIRE(t.size() == 29);
  for (int n = 1; n < 30; ++n) {
    const Rat expect = Rat(int_pow(2, static_cast<unsigned>(n) - 1), int_pow(3, static_cast<unsigned>(n) + 1));
    CHECK(t[static_cast<size_t>(n) - 1].rat() == expect);
  }
}

TEST_CASE("sufficient-condition terms are measure-free") {
  const std::vector<Value> s_inf = condition4_terms(infinite_case(), last_two(), 30);
  for (const Value& s : s_inf) CHECK(s.rat() == Rat(1, 3));

  const std::vector<Value> s_fin = condition4_terms(finite_case(), last_two(), 30);
  for (int n = 1; n < 30; ++n) CHECK(s_fin[static_cast<size_t>(n) - 1].rat() == Rat(1, n + 2));
}

TEST_CASE("criterion terms equal the partial-mass increments exactly") {
  for (const DiagramSpec& spec : {infinite_case(), finite_case()}) {
    const CriterionTerms terms = criterion_terms(spec, last_two(), pf_measure(spec, last_two()), 25);
    REQUIRE(terms.u.size() == 24);
    REQUIRE(terms.d.size() == 24);
    for (size_t i = 0; i < terms.u.size(); ++i) CHECK(terms.u[i].rat() == terms.d[i].rat());
  }
  const CriterionTerms inf = criterion_terms(infinite_case(), last_two(), pf_measure(infinite_case(), last_two()), 25);
  for (const Value& u : inf.u) CHECK(u.rat() == Rat(1, 6));
  const CriterionTerms fin = criterion_terms(finite_case(), last_two(), pf_measure(finite_case(), last_two()), 25);
  for (int n = 1; n < 25; ++n)
    CHECK(fin.u[static_cast<size_t>(n) - 1].rat() == Rat(1, 6) * two_thirds_pow(n - 1));
}

TEST_CASE("min/max corollary terms and the positivity assumption") {
  // the reference diagrams have a zero entry from the last row into the complement
  const MinMaxTerms mm = corollary_minmax(infinite_case(), last_two(), 10, false);
  CHECK(!mm.positivity_ok);
  REQUIRE(!mm.violations.empty());
  CHECK(std::get<2>(mm.violations.front()) == 0);
  CHECK_THROWS_WITH_AS(corollary_minmax(infinite_case(), last_two(), 10, true),
                       doctest::Contains("telescop"), Error);

  // telescoping by pairs fills the block and restores positivity
  DiagramSpec pairs = telescope(infinite_case(), {1, 3, 5, 7, 9, 11});
  const IncidenceMatrix& sq = pairs.incidence(1);
  CHECK(sq.at(1, 0) == 5);
  CHECK(sq.at(2, 0) == 1);
  const MinMaxTerms mm2 = corollary_minmax(pairs, last_two(), 5, true);
  CHECK(mm2.positivity_ok);
  for (const Value& m : mm2.q_terms) CHECK(m.rat() > 0);
  for (const Rat& r : mm2.h_terms) CHECK(r > 0);
  REQUIRE(mm2.q_terms.size() == mm2.h_terms.size());
  // f >= 1 on the checked block makes the height-ratio term a lower bound
  for (size_t i = 0; i < mm2.q_terms.size(); ++i) CHECK(mm2.q_terms[i].rat() >= mm2.h_terms[i]);
}

TEST_CASE("truncated extension of the converging example") {
  DiagramSpec spec = finite_case();
  const VertexSelection sel = last_two();
  CylinderMeasure mu = pf_measure(spec, sel);
  const ExtendedMeasure ext = extend_measure(spec, sel, mu, 80, Value(Rat(3, 2)));

  // entry-level identity: the level-1 split reproduces S_depth exactly
  const std::vector<Value> S = partial_masses(spec, sel, mu, 80);
  CHECK(ext.total_lower().rat() == S.back().rat());

  REQUIRE(ext.residual().has_value());
  const Rat residual = ext.residual()->rat();
  CHECK(residual == Rat(3, 2) - S.back().rat());
  CHECK(residual > 0);
  CHECK(residual < Rat(1, int_pow(10, 9)));

  for (int n = 1; n <= 40; ++n) {
    const Rat truth = Rat(1, 2) * rat_pow(Rat(1, 3), n - 1);
    const Rat lower = ext.p_hat_lower(n, 0).rat();
    CHECK(lower <= truth);
    CHECK(truth - lower <= residual);
    CHECK(ext.stabilized(n, 0));
    CHECK(!ext.unbounded_at_depth(n, 0));
    // tower values on selected vertices use full heights and exact p
    CHECK(ext.tower_lower(n, 1).rat() == Rat(spec.heights(n)[1]) * mu.p(n, 0).rat());
  }
}

TEST_CASE("truncated extension flags divergence") {
  DiagramSpec spec = infinite_case();
  const ExtendedMeasure ext = extend_measure(spec, last_two(), pf_measure(spec, last_two()), 60,
                                             std::nullopt, 5.0);
  CHECK(ext.unbounded_at_depth(1, 0));
  CHECK(!ext.residual().has_value());
  // lower bound at the entry vertex has escaped the cap
  CHECK(ext.tower_lower(1, 0).rat() > Rat(5));
}

TEST_CASE("extension of a subdiagram with no incoming complement edges") {
  DiagramSpec spec = DiagramSpec::stationary(IncidenceMatrix{{2, 0}, {0, 3}});
  const VertexSelection sel = VertexSelection::stationary({0});
  CylinderMeasure mu = pf_measure(spec, sel);
  const std::vector<Value> S = partial_masses(spec, sel, mu, 20);
  for (const Value& s : S) CHECK(s.rat() == Rat(1));
  const ExtendedMeasure ext = extend_measure(spec, sel, mu, 20, Value(Rat(1)));
  for (int n = 1; n <= 15; ++n) CHECK(ext.p_hat_lower(n, 1).rat() == Rat(0));
  CHECK(ext.residual()->rat() == Rat(0));
}

TEST_CASE("ratio diagnostics bracket the closed-form ratios") {
  DiagramSpec spec = finite_case();
  const VertexSelection sel = last_two();
  CylinderMeasure mu = pf_measure(spec, sel);
  const int depth = 50;
  const ExtendedMeasure ext = extend_measure(spec, sel, mu, depth, Value(Rat(3, 2)));
  const RatioDiagnostics rd = ratio_diagnostics(spec, sel, mu, depth, ext);

  REQUIRE(rd.observed_C.has_value());
  CHECK(*rd.observed_C == doctest::Approx(2.0));

  for (int n = 1; n <= 40; ++n) {
    const Rat numerator = Rat(3, 4) * two_thirds_pow(n);
    const Rat truth = numerator / (Rat(1) - (n == 1 ? Rat(1, 2) : numerator));
    REQUIRE(rd.rho[static_cast<size_t>(n) - 1].has_value());
    const Bracket& b = *rd.rho[static_cast<size_t>(n) - 1];
    CHECK(b.lo.rat() <= truth);
    REQUIRE(b.hi.has_value());
    CHECK(truth <= b.hi->rat());
    // brackets tighten fast away from the truncation depth
    if (n <= 30) CHECK(b.hi->rat() - b.lo.rat() < Rat(1, 1000));

    REQUIRE(rd.rho_prime[static_cast<size_t>(n) - 1].has_value());
    CHECK(rd.rho_prime[static_cast<size_t>(n) - 1]->lo.rat() <= b.lo.rat());

    REQUIRE(rd.sigma[static_cast<size_t>(n) - 1].has_value());
    CHECK(rd.sigma[static_cast<size_t>(n) - 1]->lo.rat() >= 0);
  }
}

TEST_CASE("stationary verdicts") {
  Verdict inf = stationary_verdict(infinite_case(), last_two(), pf_measure(infinite_case(), last_two()));
  CHECK(inf.kind == Verdict::Kind::InfiniteProved);
  CHECK(!inf.total_exact.has_value());

  Verdict fin = stationary_verdict(finite_case(), last_two(), pf_measure(finite_case(), last_two()));
  CHECK(fin.kind == Verdict::Kind::FiniteProved);
  REQUIRE(fin.total_exact.has_value());
  CHECK(*fin.total_exact == Rat(3, 2));

  DiagramSpec blocks = DiagramSpec::stationary(IncidenceMatrix{{2, 0}, {0, 3}});
  const VertexSelection first = VertexSelection::stationary({0});
  Verdict isolated = stationary_verdict(blocks, first, pf_measure(blocks, first));
  CHECK(isolated.kind == Verdict::Kind::FiniteProved);
  CHECK(*isolated.total_exact == Rat(1));
}

TEST_CASE("analysis of the stationary examples") {
  const ExtensionReport inf = analyze(infinite_case(), last_two(), pf_measure(infinite_case(), last_two()), 30);
  CHECK(inf.verdict.kind == Verdict::Kind::InfiniteProved);
  CHECK(inf.depth == 30);
  CHECK(inf.mode == NumericMode::Exact);
  CHECK(inf.S.size() == 30);
  CHECK(inf.d.size() == 29);
  CHECK(inf.terms3.size() == 29);
  CHECK(inf.terms4.size() == 29);
  CHECK(inf.terms5.size() == 29);
  CHECK(inf.terms7q.size() == 29);
  CHECK(!inf.positivity_ok);

  const ExtensionReport fin = analyze(finite_case(), last_two(), pf_measure(finite_case(), last_two()), 30);
  CHECK(fin.verdict.kind == Verdict::Kind::FiniteProved);
  CHECK(*fin.verdict.total_exact == Rat(3, 2));
}

TEST_CASE("trend classification without stationarity") {
  const int depth = 30;
  DiagramSpec conv = as_explicit(finite_case(), depth);
  const VertexSelection sel = explicit_last_two(depth + 1);
  DiagramSpec sub = subdiagram(conv, sel, depth);
  CylinderMeasure mu = CylinderMeasure::explicit_table(sub, geometric_table(depth));
  const ExtensionReport r1 = analyze(conv, sel, mu, depth);
  CHECK(r1.verdict.kind == Verdict::Kind::FiniteTrend);
  REQUIRE(r1.verdict.total_bounds.has_value());
  CHECK(r1.verdict.total_bounds->first <= 1.5);
  CHECK(1.5 <= r1.verdict.total_bounds->second + 1e-9);
  CHECK(r1.verdict.total_bounds->second - r1.verdict.total_bounds->first < 1e-3);

  DiagramSpec div = as_explicit(infinite_case(), depth);
  DiagramSpec div_sub = subdiagram(div, sel, depth);
  CylinderMeasure div_mu = CylinderMeasure::explicit_table(div_sub, geometric_table(depth));
  const ExtensionReport r2 = analyze(div, sel, div_mu, depth);
  CHECK(r2.verdict.kind == Verdict::Kind::DivergentTrend);

  DiagramSpec blocks = as_explicit(DiagramSpec::stationary(IncidenceMatrix{{2, 0}, {0, 3}}), depth);
  std::vector<std::vector<int>> firsts(static_cast<size_t>(depth) + 1, std::vector<int>{0});
  const VertexSelection first = VertexSelection::explicit_levels(std::move(firsts));
  DiagramSpec bsub = subdiagram(blocks, first, depth);
  std::vector<std::vector<Rat>> btable;
  for (int n = 1; n <= depth; ++n) btable.push_back({rat_pow(Rat(1, 2), n - 1)});
  CylinderMeasure bmu = CylinderMeasure::explicit_table(bsub, std::move(btable));
  const ExtensionReport r3 = analyze(blocks, first, bmu, depth);
  CHECK(r3.verdict.kind == Verdict::Kind::FiniteTrend);
  CHECK(r3.verdict.justification.find("vanish") != std::string::npos);
}
