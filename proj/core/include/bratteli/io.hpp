/// @file io.hpp
/// @brief JSON problem-spec files, machine-readable reports (JSON/CSV) and the
///        bundled example specs.

#pragma once

#include "bratteli/extension.hpp"
#include "bratteli/sampler.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace bratteli {

struct AnalysisConfig {
  int depth = 40;
  NumericMode mode = NumericMode::Exact;
  double tolerance = 0.0;
  int window = 10;
};

/// Parsed problem file: diagram + optional selection + optional measure
/// description + analysis settings. Vertex indices are 1-based in files and
/// converted at this boundary only.
struct ProblemSpec {
  enum class MeasureType { None, StationaryPF, ExplicitTable };

  DiagramSpec diagram = DiagramSpec::stationary(IncidenceMatrix{{1, 1}, {1, 1}});
  std::optional<VertexSelection> selection;
  MeasureType measure_type = MeasureType::None;
  std::optional<Rat> pf_lambda;
  std::optional<std::vector<Rat>> pf_eigenvector;
  std::vector<std::vector<Rat>> table;
  AnalysisConfig analysis;
};

/// Parses and schema-checks a problem file. Violations throw Error with a
/// JSON-pointer path to the offending element.
ProblemSpec parse_spec_file(const std::string& json_text);

/// Deterministic canonical serialization; parse(serialize(s)) == s.
std::string serialize_spec(const ProblemSpec& spec);

/// The diagram the measure lives on: the subdiagram when a selection is
/// present, the diagram itself otherwise.
DiagramSpec measure_diagram(const ProblemSpec& spec);

/// Builds the measure described by the file (PF eigendata is computed when
/// not supplied). Throws when measure_type is None.
CylinderMeasure build_measure(const ProblemSpec& spec);

nlohmann::ordered_json value_to_json(const Value& v);

nlohmann::ordered_json report_to_json(const ExtensionReport& report, const std::string& input_hash);
std::string report_to_csv(const ExtensionReport& report);

nlohmann::ordered_json validation_to_json(const ValidationReport& report);
nlohmann::ordered_json stats_to_json(const EmpiricalStats& stats, const DeviationReport& dev,
                                     const std::string& input_hash);

/// Names of the bundled example problem files.
std::vector<std::string> example_names();
/// JSON text of a bundled example; throws on unknown name.
std::string example_spec(const std::string& name);

}  // namespace bratteli
