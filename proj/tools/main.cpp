// Command-line front end: diagram validation, heights/stochastic matrices,
// measure inspection, extension analysis, path sampling and bundled examples.

#include "bratteli/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace bratteli;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitAnalysis = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::filesystem::path output_dir() {
  if (const char* env = std::getenv("BRATTELI_OUT_DIR")) return env;
  return std::filesystem::current_path();
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::filesystem::path path(out);
  if (path.is_relative()) path = output_dir() / path;
  std::ofstream file(path);
  if (!file) throw Error("cannot write '" + path.string() + "'");
  file << text;
}

struct LoadedSpec {
  ProblemSpec spec;
  std::string hash;
};

LoadedSpec load(const std::string& path) {
  const std::string text = read_file(path);
  ProblemSpec spec = parse_spec_file(text);
  std::string hash = fnv1a_hex(serialize_spec(spec));
  return {std::move(spec), std::move(hash)};
}

int cmd_validate(const std::string& file, int depth, const std::string& out) {
  LoadedSpec loaded = load(file);
  if (depth <= 0) depth = loaded.spec.analysis.depth;
  const ValidationReport report = validate(loaded.spec.diagram, depth);
  nlohmann::ordered_json j = validation_to_json(report);
  j["depth"] = depth;
  emit(j.dump(2), out);
  return report.ok() ? kExitOk : kExitValidation;
}

int cmd_heights(const std::string& file, int level, const std::string& out) {
  LoadedSpec loaded = load(file);
  const std::vector<Int> h = loaded.spec.diagram.heights(level);
  nlohmann::ordered_json j;
  j["level"] = level;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Int& v : h) arr.push_back(v.str());
  j["heights"] = arr;
  emit(j.dump(2), out);
  return kExitOk;
}

int cmd_stochastic(const std::string& file, int level, const std::string& out) {
  LoadedSpec loaded = load(file);
  const StochasticMatrix q = loaded.spec.diagram.stochastic(level);
  nlohmann::ordered_json j;
  j["level"] = level;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int v = 0; v < q.rows; ++v) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int w = 0; w < q.cols; ++w) row.push_back(to_fraction(q.at(v, w)));
    rows.push_back(row);
  }
  j["entries"] = rows;
  emit(j.dump(2), out);
  return kExitOk;
}

int cmd_measure(const std::string& file, int depth, const std::string& out) {
  LoadedSpec loaded = load(file);
  if (depth <= 0) depth = std::min(loaded.spec.analysis.depth, 20);
  const DiagramSpec target = measure_diagram(loaded.spec);
  const CylinderMeasure mu = build_measure(loaded.spec);
  const CompatibilityReport compat = check_compatibility(mu, target, depth);

  nlohmann::ordered_json j;
  j["provenance"] = {{"input_hash", loaded.hash}, {"generator", "bratteli"}, {"version", "0.1.0"}};
  j["numeric_mode"] = mu.mode() == NumericMode::Exact ? "exact" : "float";
  j["depth"] = depth;
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  for (int n = 1; n <= depth; ++n) {
    if (mu.table_depth() > 0 && n > mu.table_depth()) break;
    if (target.max_incidence_level() > 0 && n > target.max_incidence_level() + 1) break;
    nlohmann::ordered_json level;
    level["n"] = n;
    nlohmann::ordered_json ps = nlohmann::ordered_json::array();
    nlohmann::ordered_json towers = nlohmann::ordered_json::array();
    for (int v = 0; v < target.vertex_count(n); ++v) {
      ps.push_back(value_to_json(mu.p(n, v)));
      towers.push_back(value_to_json(tower_measure(mu, target, n, v)));
    }
    level["p"] = ps;
    level["tower_mass"] = towers;
    levels.push_back(level);
  }
  j["levels"] = levels;
  nlohmann::ordered_json violations = nlohmann::ordered_json::array();
  for (const MeasureViolation& v : compat.violations) {
    nlohmann::ordered_json e;
    e["level"] = v.level;
    if (v.vertex >= 0) e["vertex"] = v.vertex + 1;
    e["message"] = v.what;
    violations.push_back(e);
  }
  j["violations"] = violations;
  emit(j.dump(2), out);
  return compat.ok() ? kExitOk : kExitValidation;
}

int cmd_analyze(const std::string& file, int depth, const std::string& format,
                const std::string& out) {
  LoadedSpec loaded = load(file);
  if (depth <= 0) depth = loaded.spec.analysis.depth;
  if (!loaded.spec.selection) throw Error("analyze requires a selection section");
  const CylinderMeasure mu = build_measure(loaded.spec);
  AnalysisOptions opts;
  opts.window = loaded.spec.analysis.window;
  const ExtensionReport report = analyze(loaded.spec.diagram, *loaded.spec.selection, mu, depth, opts);
  if (format == "csv") {
    emit(report_to_csv(report), out);
  } else {
    emit(report_to_json(report, loaded.hash).dump(2), out);
  }
  return kExitOk;
}

int cmd_sample(const std::string& file, int depth, long count, std::uint64_t seed,
               const std::string& out) {
  LoadedSpec loaded = load(file);
  const DiagramSpec target = measure_diagram(loaded.spec);
  const CylinderMeasure mu = build_measure(loaded.spec);
  SamplerConfig config;
  config.depth = depth;
  config.count = count;
  config.seed = seed;
  const EmpiricalStats stats = sample(mu, config);
  const DeviationReport dev = compare(stats, mu, target);
  emit(stats_to_json(stats, dev, loaded.hash).dump(2), out);
  return kExitOk;
}

int cmd_example(const std::string& name, const std::string& out) {
  if (name == "list") {
    for (const std::string& n : example_names()) std::cout << n << '\n';
    return kExitOk;
  }
  const std::string text = example_spec(name);
  emit(text, out.empty() ? name + ".json" : out);
  if (!out.empty() && out != "-") return kExitOk;
  if (out.empty()) std::cout << "wrote " << (output_dir() / (name + ".json")).string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bratteli diagram measures: validation, invariant-measure extension analysis and sampling"};
  app.require_subcommand(1);

  std::string file, out, format = "json", name;
  int level = 1, depth = 0;
  long count = 100000;
  std::uint64_t seed = 0;

  auto* validate_cmd = app.add_subcommand("validate", "Check diagram structural invariants");
  validate_cmd->add_option("file", file)->required();
  validate_cmd->add_option("--depth", depth, "Levels to check (default: analysis depth)");
  validate_cmd->add_option("--out", out);

  auto* heights_cmd = app.add_subcommand("heights", "Exact tower heights at a level");
  heights_cmd->add_option("file", file)->required();
  heights_cmd->add_option("--level", level)->required();
  heights_cmd->add_option("--out", out);

  auto* stochastic_cmd = app.add_subcommand("stochastic", "Exact stochastic matrix at a level");
  stochastic_cmd->add_option("file", file)->required();
  stochastic_cmd->add_option("--level", level)->required();
  stochastic_cmd->add_option("--out", out);

  auto* measure_cmd = app.add_subcommand("measure", "Cylinder values and tower masses of the measure");
  measure_cmd->add_option("file", file)->required();
  measure_cmd->add_option("--depth", depth);
  measure_cmd->add_option("--out", out);

  auto* analyze_cmd = app.add_subcommand("analyze", "Extension finiteness criteria and diagnostics");
  analyze_cmd->add_option("file", file)->required();
  analyze_cmd->add_option("--depth", depth);
  analyze_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  analyze_cmd->add_option("--out", out);

  auto* sample_cmd = app.add_subcommand("sample", "Monte Carlo path sampling cross-check");
  sample_cmd->add_option("file", file)->required();
  sample_cmd->add_option("--depth", depth)->required();
  sample_cmd->add_option("--count", count);
  sample_cmd->add_option("--seed", seed);
  sample_cmd->add_option("--out", out);

  auto* example_cmd = app.add_subcommand("example", "Write a bundled example spec ('list' to list)");
  example_cmd->add_option("name", name)->required();
  example_cmd->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate_cmd) return cmd_validate(file, depth, out);
    if (*heights_cmd) return cmd_heights(file, level, out);
    if (*stochastic_cmd) return cmd_stochastic(file, level, out);
    if (*measure_cmd) return cmd_measure(file, depth, out);
    if (*analyze_cmd) return cmd_analyze(file, depth, format, out);
    if (*sample_cmd) return cmd_sample(file, depth, count, seed, out);
    if (*example_cmd) return cmd_example(name, out);
  } catch (const bratteli::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const std::string what = e.what();
    return what.find("schema violation") != std::string::npos ||
                   what.find("invalid JSON") != std::string::npos
               ? kExitValidation
               : kExitAnalysis;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitAnalysis;
  }
  return kExitOk;
}
