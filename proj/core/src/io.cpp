#include "bratteli/io.hpp"

#include <algorithm>
#include <sstream>

namespace bratteli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error("schema violation at " + path + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) schema_error(path + "/" + key, "missing required key");
  return j.at(key);
}

Rat json_to_rat(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_string()) {
    try {
      return parse_fraction(j.get<std::string>());
    } catch (const Error& e) {
      schema_error(path, e.what());
    }
  }
  schema_error(path, "expected an integer or a rational string");
}

IncidenceMatrix json_to_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a non-empty array of rows");
  const int rows = static_cast<int>(j.size());
  if (!j[0].is_array() || j[0].empty()) schema_error(path + "/0", "expected a non-empty row");
  const int cols = static_cast<int>(j[0].size());
  IncidenceMatrix m(rows, cols);
  for (int v = 0; v < rows; ++v) {
    const json& row = j[static_cast<size_t>(v)];
    const std::string row_path = path + "/" + std::to_string(v);
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      schema_error(row_path, "row length differs from the first row");
    for (int w = 0; w < cols; ++w) {
      const json& e = row[static_cast<size_t>(w)];
      if (!e.is_number_integer())
        schema_error(row_path + "/" + std::to_string(w), "entries must be integers");
      const long long val = e.get<long long>();
      if (val < 0)
        schema_error(row_path + "/" + std::to_string(w), "entries must be nonnegative");
      m.at(v, w) = Int(val);
    }
  }
  return m;
}

std::vector<int> json_to_subset(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a non-empty array of vertex indices");
  std::vector<int> out;
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer() || j[i].get<long long>() < 1)
      schema_error(path + "/" + std::to_string(i), "vertex indices are 1-based positive integers");
    out.push_back(static_cast<int>(j[i].get<long long>()) - 1);  // to 0-based
  }
  return out;
}

}  // namespace

ProblemSpec parse_spec_file(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) schema_error("", "top level must be an object");

  ProblemSpec spec;

  // diagram
  {
    const json& d = require(j, "diagram", "");
    const std::string provider = require(d, "provider", "/diagram").get<std::string>();
    const json& mats_j = require(d, "matrices", "/diagram");
    if (!mats_j.is_array() || mats_j.empty())
      schema_error("/diagram/matrices", "expected a non-empty array of matrices");
    std::vector<IncidenceMatrix> mats;
    for (size_t i = 0; i < mats_j.size(); ++i)
      mats.push_back(json_to_matrix(mats_j[i], "/diagram/matrices/" + std::to_string(i)));
    std::vector<Int> root;
    if (d.contains("root_edges")) {
      const json& r = d.at("root_edges");
      if (!r.is_array()) schema_error("/diagram/root_edges", "expected an array");
      for (size_t i = 0; i < r.size(); ++i) {
        if (!r[i].is_number_integer() || r[i].get<long long>() < 0)
          schema_error("/diagram/root_edges/" + std::to_string(i),
                       "expected a nonnegative integer");
        root.emplace_back(r[i].get<long long>());
      }
    }
    try {
      if (provider == "stationary") {
        if (mats.size() != 1)
          schema_error("/diagram/matrices", "stationary provider takes exactly one matrix");
        spec.diagram = DiagramSpec::stationary(std::move(mats[0]), std::move(root));
      } else if (provider == "cyclic") {
        spec.diagram = DiagramSpec::cyclic(std::move(mats), std::move(root));
      } else if (provider == "explicit") {
        spec.diagram = DiagramSpec::explicit_levels(std::move(mats), std::move(root));
      } else {
        schema_error("/diagram/provider", "unknown provider '" + provider + "'");
      }
    } catch (const Error& e) {
      throw Error(std::string("schema violation at /diagram: ") + e.what());
    }
  }

  // selection (optional)
  if (j.contains("selection")) {
    const json& s = j.at("selection");
    const std::string provider = require(s, "provider", "/selection").get<std::string>();
    const json& subsets_j = require(s, "subsets", "/selection");
    if (!subsets_j.is_array() || subsets_j.empty())
      schema_error("/selection/subsets", "expected a non-empty array");
    std::vector<std::vector<int>> subsets;
    for (size_t i = 0; i < subsets_j.size(); ++i)
      subsets.push_back(json_to_subset(subsets_j[i], "/selection/subsets/" + std::to_string(i)));
    if (provider == "stationary") {
      if (subsets.size() != 1)
        schema_error("/selection/subsets", "stationary provider takes exactly one subset");
      spec.selection = VertexSelection::stationary(std::move(subsets[0]));
    } else if (provider == "explicit") {
      spec.selection = VertexSelection::explicit_levels(std::move(subsets));
    } else {
      schema_error("/selection/provider", "unknown provider '" + provider + "'");
    }
  }

  // measure (optional)
  if (j.contains("measure")) {
    const json& m = j.at("measure");
    const std::string type = require(m, "type", "/measure").get<std::string>();
    if (type == "stationary-pf") {
      spec.measure_type = ProblemSpec::MeasureType::StationaryPF;
      if (m.contains("lambda")) spec.pf_lambda = json_to_rat(m.at("lambda"), "/measure/lambda");
      if (m.contains("eigenvector")) {
        const json& x = m.at("eigenvector");
        if (!x.is_array() || x.empty()) schema_error("/measure/eigenvector", "expected an array");
        std::vector<Rat> vec;
        for (size_t i = 0; i < x.size(); ++i)
          vec.push_back(json_to_rat(x[i], "/measure/eigenvector/" + std::to_string(i)));
        spec.pf_eigenvector = std::move(vec);
      }
      if (spec.pf_lambda.has_value() != spec.pf_eigenvector.has_value())
        schema_error("/measure", "lambda and eigenvector must be given together");
    } else if (type == "explicit-table") {
      spec.measure_type = ProblemSpec::MeasureType::ExplicitTable;
      const json& levels = require(m, "levels", "/measure");
      if (!levels.is_array() || levels.size() < 2)
        schema_error("/measure/levels", "expected at least two levels");
      for (size_t n = 0; n < levels.size(); ++n) {
        const json& row = levels[n];
        const std::string row_path = "/measure/levels/" + std::to_string(n);
        if (!row.is_array() || row.empty()) schema_error(row_path, "expected a non-empty array");
        std::vector<Rat> vals;
        for (size_t v = 0; v < row.size(); ++v)
          vals.push_back(json_to_rat(row[v], row_path + "/" + std::to_string(v)));
        spec.table.push_back(std::move(vals));
      }
    } else {
      schema_error("/measure/type", "unknown measure type '" + type + "'");
    }
  }

  // analysis (optional)
  if (j.contains("analysis")) {
    const json& a = j.at("analysis");
    if (a.contains("depth")) {
      if (!a.at("depth").is_number_integer() || a.at("depth").get<long long>() < 1)
        schema_error("/analysis/depth", "expected a positive integer");
      spec.analysis.depth = static_cast<int>(a.at("depth").get<long long>());
    }
    if (a.contains("numeric_mode")) {
      const std::string mode = a.at("numeric_mode").get<std::string>();
      if (mode == "exact") {
        spec.analysis.mode = NumericMode::Exact;
      } else if (mode == "float") {
        spec.analysis.mode = NumericMode::Float;
      } else {
        schema_error("/analysis/numeric_mode", "expected 'exact' or 'float'");
      }
    }
    if (a.contains("tolerance")) spec.analysis.tolerance = a.at("tolerance").get<double>();
    if (a.contains("window")) spec.analysis.window = static_cast<int>(a.at("window").get<long long>());
    if (spec.analysis.mode == NumericMode::Float && spec.analysis.tolerance <= 0)
      schema_error("/analysis/tolerance", "float mode requires a positive tolerance");
  }

  return spec;
}

std::string serialize_spec(const ProblemSpec& spec) {
  ordered_json j;
  ordered_json d;
  switch (spec.diagram.provider()) {
    case DiagramSpec::Provider::Stationary: d["provider"] = "stationary"; break;
    case DiagramSpec::Provider::Cyclic: d["provider"] = "cyclic"; break;
    case DiagramSpec::Provider::Explicit: d["provider"] = "explicit"; break;
  }
  ordered_json mats = ordered_json::array();
  for (const IncidenceMatrix& m : spec.diagram.matrices()) {
    ordered_json mj = ordered_json::array();
    for (int v = 0; v < m.rows(); ++v) {
      ordered_json row = ordered_json::array();
      for (int w = 0; w < m.cols(); ++w) row.push_back(static_cast<long long>(m.at(v, w)));
      mj.push_back(row);
    }
    mats.push_back(mj);
  }
  d["matrices"] = mats;
  ordered_json root = ordered_json::array();
  for (const Int& e : spec.diagram.root_edges()) root.push_back(static_cast<long long>(e));
  d["root_edges"] = root;
  j["diagram"] = d;

  if (spec.selection) {
    ordered_json s;
    s["provider"] = spec.selection->is_stationary() ? "stationary" : "explicit";
    ordered_json subsets = ordered_json::array();
    const int levels = spec.selection->is_stationary() ? 1 : spec.selection->explicit_depth();
    for (int n = 1; n <= levels; ++n) {
      // Re-derive the stored subset; vertex counts are not needed for
      // serialization, so read it with a permissive bound.
      ordered_json sub = ordered_json::array();
      for (int v : spec.selection->selected(n, 1 << 20)) sub.push_back(v + 1);  // back to 1-based
      subsets.push_back(sub);
    }
    s["subsets"] = subsets;
    j["selection"] = s;
  }

  if (spec.measure_type == ProblemSpec::MeasureType::StationaryPF) {
    ordered_json m;
    m["type"] = "stationary-pf";
    if (spec.pf_lambda) m["lambda"] = to_fraction(*spec.pf_lambda);
    if (spec.pf_eigenvector) {
      ordered_json x = ordered_json::array();
      for (const Rat& r : *spec.pf_eigenvector) x.push_back(to_fraction(r));
      m["eigenvector"] = x;
    }
    j["measure"] = m;
  } else if (spec.measure_type == ProblemSpec::MeasureType::ExplicitTable) {
    ordered_json m;
    m["type"] = "explicit-table";
    ordered_json levels = ordered_json::array();
    for (const auto& row : spec.table) {
      ordered_json rj = ordered_json::array();
      for (const Rat& r : row) rj.push_back(to_fraction(r));
      levels.push_back(rj);
    }
    m["levels"] = levels;
    j["measure"] = m;
  }

  ordered_json a;
  a["depth"] = spec.analysis.depth;
  a["numeric_mode"] = spec.analysis.mode == NumericMode::Exact ? "exact" : "float";
  if (spec.analysis.mode == NumericMode::Float) a["tolerance"] = spec.analysis.tolerance;
  a["window"] = spec.analysis.window;
  j["analysis"] = a;

  return j.dump(2);
}

DiagramSpec measure_diagram(const ProblemSpec& spec) {
  if (!spec.selection) return spec.diagram;
  return subdiagram(spec.diagram, *spec.selection, spec.analysis.depth);
}

CylinderMeasure build_measure(const ProblemSpec& spec) {
  const DiagramSpec target = measure_diagram(spec);
  switch (spec.measure_type) {
    case ProblemSpec::MeasureType::StationaryPF: {
      PFEigendata eig;
      if (spec.pf_lambda) {
        eig.exact = true;
        eig.lambda_exact = *spec.pf_lambda;
        eig.x_exact = *spec.pf_eigenvector;
        eig.lambda_f = static_cast<double>(*spec.pf_lambda);
        for (const Rat& r : eig.x_exact) eig.x_f.push_back(static_cast<double>(r));
      } else {
        const double tol = spec.analysis.tolerance > 0 ? spec.analysis.tolerance : 1e-12;
        eig = pf_eigendata(target.incidence(1), spec.analysis.mode, tol);
      }
      return CylinderMeasure::stationary_pf(target, eig);
    }
    case ProblemSpec::MeasureType::ExplicitTable:
      return CylinderMeasure::explicit_table(target, spec.table, spec.analysis.mode,
                                             spec.analysis.tolerance);
    case ProblemSpec::MeasureType::None:
      break;
  }
  throw Error("problem file has no measure section");
}

ordered_json value_to_json(const Value& v) {
  ordered_json j;
  if (v.exact()) {
    j["fraction"] = to_fraction(v.rat());
    j["decimal"] = v.decimal();
  } else {
    j["decimal"] = v.decimal();
    j["error_bound"] = v.err();
  }
  return j;
}

namespace {

ordered_json sequence_to_json(const std::vector<Value>& seq) {
  ordered_json arr = ordered_json::array();
  for (size_t i = 0; i < seq.size(); ++i) {
    ordered_json e = value_to_json(seq[i]);
    e["n"] = i + 1;
    arr.push_back(e);
  }
  return arr;
}

ordered_json ratio_sequence_to_json(const std::vector<std::optional<Bracket>>& seq) {
  ordered_json arr = ordered_json::array();
  for (size_t i = 0; i < seq.size(); ++i) {
    ordered_json e;
    e["n"] = i + 1;
    if (seq[i]) {
      e["lower"] = value_to_json(seq[i]->lo);
      if (seq[i]->hi) e["upper"] = value_to_json(*seq[i]->hi);
    } else {
      e["undefined"] = true;
    }
    arr.push_back(e);
  }
  return arr;
}

}  // namespace

ordered_json report_to_json(const ExtensionReport& report, const std::string& input_hash) {
  ordered_json j;
  j["provenance"] = {{"input_hash", input_hash}, {"generator", "bratteli"}, {"version", "0.1.0"}};
  j["depth"] = report.depth;
  j["numeric_mode"] = report.mode == NumericMode::Exact ? "exact" : "float";

  ordered_json v;
  v["kind"] = verdict_kind_name(report.verdict.kind);
  v["justification"] = report.verdict.justification;
  v["depth_inspected"] = report.verdict.depth_inspected;
  if (report.verdict.total_exact) {
    v["total"] = {{"fraction", to_fraction(*report.verdict.total_exact)},
                  {"decimal", to_decimal(*report.verdict.total_exact)}};
  } else if (report.verdict.total_bounds) {
    v["total_bounds"] = {report.verdict.total_bounds->first, report.verdict.total_bounds->second};
  }
  j["verdict"] = v;

  ordered_json seq;
  seq["S"] = sequence_to_json(report.S);
  seq["d"] = sequence_to_json(report.d);
  seq["condition3"] = sequence_to_json(report.terms3);
  seq["condition4"] = sequence_to_json(report.terms4);
  seq["criterion5"] = sequence_to_json(report.terms5);
  seq["minmax_q"] = sequence_to_json(report.terms7q);
  {
    ordered_json arr = ordered_json::array();
    for (size_t i = 0; i < report.terms7h.size(); ++i)
      arr.push_back({{"n", i + 1},
                     {"fraction", to_fraction(report.terms7h[i])},
                     {"decimal", to_decimal(report.terms7h[i])}});
    seq["minmax_h"] = arr;
  }
  seq["rho"] = ratio_sequence_to_json(report.ratios.rho);
  seq["rho_prime"] = ratio_sequence_to_json(report.ratios.rho_prime);
  seq["sigma"] = ratio_sequence_to_json(report.ratios.sigma);
  j["sequences"] = seq;

  j["positivity_ok"] = report.positivity_ok;
  if (report.ratios.observed_C) j["observed_C"] = *report.ratios.observed_C;
  return j;
}

std::string report_to_csv(const ExtensionReport& report) {
  std::ostringstream os;
  os << "n,S_n,d_n,t3_n,s4_n,u5_n,m7_n,r7_n,rho_n,rho'_n,sigma_n\n";
  auto cell = [&](const std::vector<Value>& seq, size_t i) {
    return i < seq.size() ? seq[i].decimal() : std::string();
  };
  auto ratio_cell = [&](const std::vector<std::optional<Bracket>>& seq, size_t i) {
    if (i >= seq.size() || !seq[i]) return std::string();
    return seq[i]->lo.decimal();
  };
  for (int n = 1; n <= report.depth; ++n) {
    const size_t i = static_cast<size_t>(n) - 1;
    os << n << ',' << cell(report.S, i) << ',' << cell(report.d, i) << ','
       << cell(report.terms3, i) << ',' << cell(report.terms4, i) << ','
       << cell(report.terms5, i) << ',' << cell(report.terms7q, i) << ','
       << (i < report.terms7h.size() ? to_decimal(report.terms7h[i]) : std::string()) << ','
       << ratio_cell(report.ratios.rho, i) << ',' << ratio_cell(report.ratios.rho_prime, i) << ','
       << ratio_cell(report.ratios.sigma, i) << '\n';
  }
  return os.str();
}

ordered_json validation_to_json(const ValidationReport& report) {
  ordered_json j;
  j["valid"] = report.ok();
  auto to_arr = [](const std::vector<Violation>& vs) {
    ordered_json arr = ordered_json::array();
    for (const Violation& v : vs) {
      ordered_json e;
      e["level"] = v.level;
      if (v.index >= 0) e["vertex"] = v.index + 1;  // 1-based in reports
      e["message"] = v.what;
      arr.push_back(e);
    }
    return arr;
  };
  j["errors"] = to_arr(report.errors);
  j["warnings"] = to_arr(report.warnings);
  return j;
}

ordered_json stats_to_json(const EmpiricalStats& stats, const DeviationReport& dev,
                           const std::string& input_hash) {
  ordered_json j;
  j["provenance"] = {{"input_hash", input_hash}, {"generator", "bratteli"}, {"version", "0.1.0"}};
  j["seed"] = stats.seed;
  j["count"] = stats.count;
  j["depth"] = stats.depth;
  ordered_json rows = ordered_json::array();
  for (const DeviationRow& r : dev.rows) {
    ordered_json e;
    e["n"] = r.level;
    e["vertex"] = r.vertex + 1;
    e["count"] = stats.counts[static_cast<size_t>(r.level) - 1][static_cast<size_t>(r.vertex)];
    e["observed"] = r.observed;
    e["exact"] = r.exact;
    e["stderr"] = r.stderr_;
    e["z"] = r.z;
    e["flagged"] = r.flagged;
    rows.push_back(e);
  }
  j["rows"] = rows;
  j["max_abs_z"] = dev.max_abs_z;
  j["any_flagged"] = dev.any_flagged;
  return j;
}

std::vector<std::string> example_names() { return {"infinite-extension", "finite-extension"}; }

std::string example_spec(const std::string& name) {
  if (name == "infinite-extension") {
    // Stationary diagram whose subdiagram measure extends to an infinite
    // measure even though the necessary-condition series converges.
    return R"({
  "diagram": {
    "provider": "stationary",
    "matrices": [[[3, 0, 0], [1, 2, 0], [0, 1, 3]]],
    "root_edges": [1, 1, 1]
  },
  "selection": {"provider": "stationary", "subsets": [[2, 3]]},
  "measure": {"type": "stationary-pf", "lambda": "3", "eigenvector": ["1", "1"]},
  "analysis": {"depth": 40, "numeric_mode": "exact"}
}
)";
  }
  if (name == "finite-extension") {
    // Stationary diagram with a finite extension while the sufficient-
    // condition series diverges.
    return R"({
  "diagram": {
    "provider": "stationary",
    "matrices": [[[2, 0, 0], [1, 2, 0], [0, 1, 3]]],
    "root_edges": [1, 1, 1]
  },
  "selection": {"provider": "stationary", "subsets": [[2, 3]]},
  "measure": {"type": "stationary-pf", "lambda": "3", "eigenvector": ["1", "1"]},
  "analysis": {"depth": 80, "numeric_mode": "exact"}
}
)";
  }
  throw Error("unknown example '" + name + "' (available: infinite-extension, finite-extension)");
}

}  // namespace bratteli
