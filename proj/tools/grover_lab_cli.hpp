#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "grover_lab/embedded_schemas.hpp"
#include "grover_lab/grover_lab.hpp"

namespace grover_lab::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Raised for malformed flag values that CLI11 cannot check itself.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-finite doubles become the strings "inf", "-inf" and "nan".
inline Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline Json number(const std::optional<double>& v) { return v ? number(*v) : Json(); }

inline std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_number(const std::optional<double>& v) { return v ? csv_number(*v) : ""; }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& out) const {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
      out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

/// What a subcommand produces: the JSON payload (merged into the envelope)
/// and, where it has one, a CSV flattening.
struct Output {
  Json payload = Json::object();
  std::optional<Table> table;
};

inline std::vector<std::uint64_t> parse_u64_list(const std::string& text, const char* flag) {
  std::vector<std::uint64_t> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size())
      throw UsageError(std::string(flag) + ": '" + item + "' is not a non-negative integer");
    values.push_back(v);
  }
  if (values.empty()) throw UsageError(std::string(flag) + ": empty list");
  return values;
}

inline double parse_real(const std::string& text, const char* flag) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
    throw UsageError(std::string(flag) + ": '" + text + "' is not a finite real number");
  return v;
}

inline unsigned max_qubits_from_env() {
  const char* raw = std::getenv("GROVER_LAB_MAX_QUBITS");
  if (!raw) return kDefaultMaxQubits;
  const std::string text(raw);
  unsigned v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || v < 1 || v > 62)
    throw UsageError("GROVER_LAB_MAX_QUBITS must be an integer in [1, 62], got '" + text + "'");
  return v;
}

inline Json verdict(Verdict v) { return std::string(verdict_name(v)); }

inline Json verdict(bool pass) { return pass ? "pass" : "fail"; }

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  unsigned n = 0;
  std::string marked;
  std::string iterations = "paper";
  std::string oracle_mode = "phase";
};

inline Output run_simulate(const SimulateOptions& o, unsigned max_qubits) {
  const auto marked = parse_u64_list(o.marked, "--marked");
  check_qubits(o.n, max_qubits);
  const OracleFunction f(o.n, marked);
  std::size_t k = 0;
  if (o.iterations == "paper")
    k = optimal_iterations(o.n).paper_mode;
  else if (o.iterations == "optimal")
    k = optimal_iterations(o.n).optimal_mode;
  else if (o.iterations.find(',') != std::string::npos)
    throw UsageError("--iterations takes a single value");
  else
    k = static_cast<std::size_t>(parse_u64_list(o.iterations, "--iterations").front());
  const auto mode = o.oracle_mode == "phase" ? OracleMode::phase : OracleMode::ancilla;
  const auto t = grover_run(f, k, mode, max_qubits);

  Output out;
  Json probs = Json::array();
  Table table{{"element", "probability", "marked"}, {}};
  for (std::size_t x = 0; x < t.probabilities.size(); ++x) {
    probs.push_back(number(t.probabilities[x]));
    table.rows.push_back({std::to_string(x), csv_number(t.probabilities[x]), f(x) ? "1" : "0"});
  }
  out.payload = {{"n", o.n},
                 {"k", k},
                 {"mode", o.oracle_mode},
                 {"marked", f.marked()},
                 {"probabilities", std::move(probs)},
                 {"marked_probability", number(t.marked_probability)},
                 {"max_unmarked_probability", number(t.max_unmarked_probability)}};
  out.table = std::move(table);
  return out;
}

// ----------------------------------------------------------------- formula

struct FormulaOptions {
  std::optional<unsigned> n;
  std::optional<double> N;
  std::string k = "sqrt";
  double tolerance = 1e-12;
};

inline Output run_formula(const FormulaOptions& o) {
  if (o.n.has_value() == o.N.has_value()) throw UsageError("exactly one of --n and --N is required");
  if (o.n && (*o.n < 1 || *o.n > 1000)) throw UsageError("--n must be in [1, 1000]");
  const double set_size = o.n ? std::ldexp(1.0, static_cast<int>(*o.n)) : *o.N;
  const double k = o.k == "sqrt" ? paper_exponent(set_size) : parse_real(o.k, "--k");
  const auto a = paper_amplitude(set_size, k);
  const double rel = a.relative_difference();

  Output out;
  Json record = {{"N", number(a.N)},
                 {"k", number(a.k)},
                 {"A", number(a.simplified_value)},
                 {"A_squared", number(a.simplified_value * a.simplified_value)},
                 {"two_summand", number(a.two_summand_value)},
                 {"simplified", number(a.simplified_value)},
                 {"relative_difference", number(rel)}};
  out.payload = {{"records", Json::array({record})},
                 {"verdicts", {{"simplification_identity", verdict(rel <= o.tolerance)}}}};
  out.table = Table{{"N", "k", "A", "A_squared", "two_summand", "simplified", "relative_difference"},
                    {{csv_number(a.N), csv_number(a.k), csv_number(a.simplified_value),
                      csv_number(a.simplified_value * a.simplified_value),
                      csv_number(a.two_summand_value), csv_number(a.simplified_value),
                      csv_number(rel)}}};
  return out;
}

// ------------------------------------------------------------------ claims

struct ClaimsOptions {
  unsigned n_min = 2;
  unsigned n_max = 20;
  unsigned sim_max_n = 16;
};

inline Output run_claims(const ClaimsOptions& o, unsigned max_qubits) {
  const auto report = paper_claims_check(o.n_min, o.n_max, o.sim_max_n, max_qubits);
  Output out;
  Json records = Json::array();
  Table table{{"n", "N", "k", "A", "A_squared", "total_unmarked", "a_squared_below_half",
               "total_unmarked_below_half", "simulator_iterations", "simulator_marked",
               "simulator_unmarked_each", "discrepancy_ratio"},
              {}};
  for (const auto& r : report.records) {
    records.push_back(
        {{"n", r.n},
         {"N", number(r.N)},
         {"k", number(r.k)},
         {"A", number(r.A)},
         {"A_squared", number(r.A_squared)},
         {"total_unmarked", number(r.total_unmarked)},
         {"a_squared_below_half", r.a_squared_below_half},
         {"total_unmarked_below_half", r.total_unmarked_below_half},
         {"simulator_iterations", r.simulator_iterations ? Json(*r.simulator_iterations) : Json()},
         {"simulator_marked", number(r.simulator_marked)},
         {"simulator_unmarked_each", number(r.simulator_unmarked_each)},
         {"discrepancy_ratio", number(r.discrepancy_ratio)}});
    table.rows.push_back(
        {std::to_string(r.n), csv_number(r.N), csv_number(r.k), csv_number(r.A),
         csv_number(r.A_squared), csv_number(r.total_unmarked),
         r.a_squared_below_half ? "true" : "false", r.total_unmarked_below_half ? "true" : "false",
         r.simulator_iterations ? std::to_string(*r.simulator_iterations) : "",
         csv_number(r.simulator_marked), csv_number(r.simulator_unmarked_each),
         csv_number(r.discrepancy_ratio)});
  }
  out.payload = {{"records", std::move(records)},
                 {"verdicts",
                  {{"a_squared_below_half", verdict(report.a_squared_below_half)},
                   {"total_unmarked_below_half", verdict(report.total_unmarked_below_half)},
                   {"trend_to_zero", verdict(report.trend_to_zero)},
                   {"monotone_vanishing", verdict(report.monotone_vanishing)},
                   {"marked_at_least_half", verdict(report.marked_at_least_half)}}}};
  out.table = std::move(table);
  return out;
}

// ----------------------------------------------------------------- compare

struct CompareOptions {
  unsigned n = 0;
  std::string k_mode = "paper";
  std::uint64_t marked = 0;
  double tolerance = 1e-10;
};

inline Output run_compare(const CompareOptions& o, unsigned max_qubits) {
  const auto mode = o.k_mode == "paper" ? IterationMode::paper : IterationMode::optimal;
  const auto c = compare(o.n, mode, o.marked, max_qubits);
  const Verdict diagram = !c.diagram_evaluated              ? Verdict::not_applicable
                          : *c.diagram_max_deviation <= o.tolerance ? Verdict::pass
                                                                    : Verdict::fail;
  const bool formula_ok = std::abs(c.simulator_unmarked_each - c.formula_A_squared) <= o.tolerance;

  Output out;
  Json record = {{"n", c.n},
                 {"N", number(c.N)},
                 {"k_mode", std::string(iteration_mode_name(c.mode))},
                 {"k", c.k},
                 {"marked", c.marked},
                 {"simulator_marked", number(c.simulator_marked)},
                 {"simulator_unmarked_each", number(c.simulator_unmarked_each)},
                 {"diagram_evaluated", c.diagram_evaluated},
                 {"diagram_marked", number(c.diagram_marked)},
                 {"diagram_unmarked_each", number(c.diagram_unmarked_each)},
                 {"diagram_max_deviation", number(c.diagram_max_deviation)},
                 {"formula_k", number(c.formula_k)},
                 {"formula_A", number(c.formula_A)},
                 {"formula_A_squared", number(c.formula_A_squared)},
                 {"discrepancy_ratio", number(c.discrepancy_ratio)}};
  out.payload = {{"records", Json::array({record})},
                 {"verdicts",
                  {{"diagram_matches_simulator", verdict(diagram)},
                   {"formula_matches_simulator", verdict(formula_ok)}}}};
  out.table = Table{{"n", "N", "k_mode", "k", "marked", "simulator_marked",
                     "simulator_unmarked_each", "diagram_evaluated", "diagram_marked",
                     "diagram_unmarked_each", "diagram_max_deviation", "formula_k", "formula_A",
                     "formula_A_squared", "discrepancy_ratio"},
                    {{std::to_string(c.n), csv_number(c.N),
                      std::string(iteration_mode_name(c.mode)), std::to_string(c.k),
                      std::to_string(c.marked), csv_number(c.simulator_marked),
                      csv_number(c.simulator_unmarked_each), c.diagram_evaluated ? "true" : "false",
                      csv_number(c.diagram_marked), csv_number(c.diagram_unmarked_each),
                      csv_number(c.diagram_max_deviation), csv_number(c.formula_k),
                      csv_number(c.formula_A), csv_number(c.formula_A_squared),
                      csv_number(c.discrepancy_ratio)}}};
  return out;
}

// ---------------------------------------------------------------- diagrams

inline Output run_diagram_eval(const std::string& path, std::size_t max_entries) {
  const Diagram d = load_diagram_file(path);
  const DenseTensor t = eval(d, max_entries);
  Output out;
  out.payload = {{"tensor", tensor_to_json(t)}};
  Table table{{"row", "col", "re", "im"}, {}};
  for (std::size_t r = 0; r < t.rows(); ++r)
    for (std::size_t c = 0; c < t.cols(); ++c)
      table.rows.push_back({std::to_string(r), std::to_string(c), csv_number(t(r, c).real()),
                            csv_number(t(r, c).imag())});
  out.table = std::move(table);
  return out;
}

struct NormalizeOptions {
  std::string path;
  std::size_t max_steps = 1000;
  std::size_t max_entries = kDefaultMaxEntries;
  double tolerance = 1e-10;
};

inline Json measure_json(const std::pair<std::size_t, std::size_t>& m) {
  return Json::array({m.first, m.second});
}

inline Output run_diagram_normalize(const NormalizeOptions& o) {
  const Diagram d = load_diagram_file(o.path);
  const auto result = normalize(d, o.max_steps);
  Output out;
  Json steps = Json::array();
  Table table{{"step", "rule", "slice", "offset"}, {}};
  for (std::size_t i = 0; i < result.trace.steps.size(); ++i) {
    const auto& s = result.trace.steps[i];
    steps.push_back({{"rule", s.rule}, {"slice", s.slice}, {"offset", s.offset}});
    table.rows.push_back(
        {std::to_string(i), s.rule, std::to_string(s.slice), std::to_string(s.offset)});
  }
  // Semantics preservation is measured whenever the tensors fit the cap.
  Json deviation;
  Json preserved = "n/a";
  try {
    const double dev = max_abs_diff(eval(d, o.max_entries), eval(result.diagram, o.max_entries));
    deviation = number(dev);
    preserved = verdict(dev <= o.tolerance);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::cap_exceeded) throw;
  }
  out.payload = {{"trace", std::move(steps)},
                 {"final", diagram_to_json(result.diagram)},
                 {"budget_exhausted", result.budget_exhausted},
                 {"measure_before", measure_json(rewrite_measure(d))},
                 {"measure_after", measure_json(rewrite_measure(result.diagram))},
                 {"max_deviation", deviation},
                 {"verdicts", {{"semantics_preserved", preserved}}}};
  out.table = std::move(table);
  return out;
}

struct GroverDiagramOptions {
  unsigned n = 0;
  std::string marked = "0";
  std::size_t iterations = 1;
};

inline Output run_diagram_grover(const GroverDiagramOptions& o) {
  const auto marked = parse_u64_list(o.marked, "--marked");
  Output out;
  out.payload = diagram_to_json(build_grover_diagram(o.n, indicator_function(o.n, marked), o.iterations));
  return out;
}

inline Output run_diagram_roundtrip(const std::string& path) {
  Output out;
  out.payload = diagram_to_json(load_diagram_file(path));
  return out;
}

// ------------------------------------------------------------------- rules

struct RulesOptions {
  std::string sizes = "1,2,3,4,8";
  std::string rule;
};

inline Output run_rules_check(const RulesOptions& o) {
  std::vector<std::size_t> sizes;
  for (auto v : parse_u64_list(o.sizes, "--sizes")) {
    if (v < 1 || v > 16) throw UsageError("--sizes entries must be in [1, 16]");
    sizes.push_back(static_cast<std::size_t>(v));
  }
  std::vector<const RewriteRule*> rules;
  if (o.rule.empty())
    for (const auto& r : rules_catalog()) rules.push_back(&r);
  else
    rules.push_back(&find_rule(o.rule));

  Output out;
  Json records = Json::array();
  Table table{{"rule", "instantiations", "max_deviation", "pass"}, {}};
  bool all = true;
  for (const auto* rule : rules) {
    const auto r = check_rule_soundness(*rule, sizes);
    all = all && r.pass;
    records.push_back({{"rule", r.rule},
                       {"instantiations", r.instantiations},
                       {"max_deviation", number(r.max_deviation)},
                       {"pass", r.pass}});
    table.rows.push_back({r.rule, std::to_string(r.instantiations), csv_number(r.max_deviation),
                          r.pass ? "true" : "false"});
  }
  out.payload = {{"records", std::move(records)}, {"verdicts", {{"all_rules_sound", verdict(all)}}}};
  out.table = std::move(table);
  return out;
}

// ------------------------------------------------------------------ schema

inline std::optional<std::string_view> embedded_schema(std::string_view name) {
  for (const auto& [file, text] : schemas::kAll)
    if (file == name || file == std::string(name) + ".schema.json") return text;
  return std::nullopt;
}

// --------------------------------------------------------------------- run

inline void write_error(std::ostream& err, const Error& e) {
  Json j = {{"code", std::string(code_name(e.code()))}, {"message", e.what()}};
  err << j.dump(2) << '\n';
}

/// Parses args (without the program name), runs one subcommand and writes its
/// document to out. Returns the process exit status.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grover search: state-vector, string-diagram and closed-form semantics",
               "grover_lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  std::string format = "json";
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
  };
  std::size_t max_entries = kDefaultMaxEntries;
  auto add_cap = [&](CLI::App* sub) {
    sub->add_option("--max-entries", max_entries, "Largest tensor (rows x cols) evaluated")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };

  std::function<Output(unsigned)> action;
  Json config = Json::object();

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "State-vector Grover search");
  simulate->add_option("--n", sim.n, "Qubits")->required();
  simulate->add_option("--marked", sim.marked, "Marked elements, comma separated")->required();
  simulate->add_option("--iterations", sim.iterations, "Integer, paper or optimal")
      ->capture_default_str();
  simulate->add_option("--oracle-mode", sim.oracle_mode)
      ->check(CLI::IsMember({"phase", "ancilla"}))
      ->capture_default_str();
  add_format(simulate);
  simulate->callback([&] {
    config = {{"n", sim.n}, {"marked", sim.marked}, {"iterations", sim.iterations},
              {"oracle_mode", sim.oracle_mode}};
    action = [&](unsigned q) { return run_simulate(sim, q); };
  });

  FormulaOptions fo;
  std::optional<unsigned> formula_n;
  std::optional<double> formula_N;
  auto* formula = app.add_subcommand("formula", "Closed-form unmarked amplitude");
  auto* fn = formula->add_option("--n", formula_n, "Qubits (N = 2^n)");
  formula->add_option("--N", formula_N, "Search-space size")->excludes(fn);
  formula->add_option("--k", fo.k, "Real exponent or sqrt")->capture_default_str();
  formula->add_option("--tolerance", fo.tolerance, "Relative tolerance of the identity check")
      ->capture_default_str();
  add_format(formula);
  formula->callback([&] {
    fo.n = formula_n;
    fo.N = formula_N;
    config = {{"n", formula_n ? Json(*formula_n) : Json()},
              {"N", formula_N ? number(*formula_N) : Json()},
              {"k", fo.k},
              {"tolerance", fo.tolerance}};
    action = [&](unsigned) { return run_formula(fo); };
  });

  ClaimsOptions co;
  auto* claims = app.add_subcommand("claims", "Sweep the closed-form claims over n");
  claims->add_option("--n-min", co.n_min)->capture_default_str();
  claims->add_option("--n-max", co.n_max)->capture_default_str();
  claims->add_option("--sim-max-n", co.sim_max_n, "Largest n also simulated")
      ->capture_default_str();
  add_format(claims);
  claims->callback([&] {
    config = {{"n_min", co.n_min}, {"n_max", co.n_max}, {"sim_max_n", co.sim_max_n}};
    action = [&](unsigned q) { return run_claims(co, q); };
  });

  CompareOptions cmp;
  auto* comparison = app.add_subcommand("compare", "Simulator, diagram and formula side by side");
  comparison->add_option("--n", cmp.n, "Qubits")->required();
  comparison->add_option("--k-mode", cmp.k_mode)
      ->check(CLI::IsMember({"paper", "optimal"}))
      ->capture_default_str();
  comparison->add_option("--marked", cmp.marked, "Marked element")->capture_default_str();
  comparison->add_option("--tolerance", cmp.tolerance, "Absolute probability tolerance")
      ->capture_default_str();
  add_format(comparison);
  comparison->callback([&] {
    config = {{"n", cmp.n}, {"k_mode", cmp.k_mode}, {"marked", cmp.marked},
              {"tolerance", cmp.tolerance}};
    action = [&](unsigned q) { return run_compare(cmp, q); };
  });

  std::string eval_path;
  auto* diagram_eval = app.add_subcommand("diagram-eval", "Evaluate a diagram file to a tensor");
  diagram_eval->add_option("path", eval_path, "Diagram JSON file")->required();
  add_cap(diagram_eval);
  add_format(diagram_eval);
  diagram_eval->callback([&] {
    config = {{"path", eval_path}, {"max_entries", max_entries}};
    action = [&](unsigned) { return run_diagram_eval(eval_path, max_entries); };
  });

  NormalizeOptions no;
  auto* diagram_normalize =
      app.add_subcommand("diagram-normalize", "Rewrite a diagram file to normal form");
  diagram_normalize->add_option("path", no.path, "Diagram JSON file")->required();
  diagram_normalize->add_option("--max-steps", no.max_steps)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  diagram_normalize->add_option("--tolerance", no.tolerance, "Semantics preservation tolerance")
      ->capture_default_str();
  add_cap(diagram_normalize);
  add_format(diagram_normalize);
  diagram_normalize->callback([&] {
    no.max_entries = max_entries;
    config = {{"path", no.path}, {"max_steps", no.max_steps}, {"max_entries", max_entries},
              {"tolerance", no.tolerance}};
    action = [&](unsigned) { return run_diagram_normalize(no); };
  });

  GroverDiagramOptions go;
  auto* diagram_grover = app.add_subcommand("diagram-grover", "Emit the Grover diagram as JSON");
  diagram_grover->add_option("--n", go.n, "Qubits")->required();
  diagram_grover->add_option("--marked", go.marked, "Marked elements, comma separated")
      ->capture_default_str();
  diagram_grover->add_option("--iterations", go.iterations)->capture_default_str();
  diagram_grover->callback([&] {
    config = {{"n", go.n}, {"marked", go.marked}, {"iterations", go.iterations}};
    action = [&](unsigned) { return run_diagram_grover(go); };
  });

  std::string roundtrip_path;
  auto* diagram_roundtrip =
      app.add_subcommand("diagram-roundtrip", "Parse, validate and re-print a diagram file");
  diagram_roundtrip->add_option("path", roundtrip_path, "Diagram JSON file")->required();
  diagram_roundtrip->callback([&] {
    config = {{"path", roundtrip_path}};
    action = [&](unsigned) { return run_diagram_roundtrip(roundtrip_path); };
  });

  RulesOptions ro;
  auto* rules = app.add_subcommand("rules-check", "Check rewrite rules by evaluation");
  rules->add_option("--sizes", ro.sizes, "Space sizes, comma separated")->capture_default_str();
  rules->add_option("--rule", ro.rule, "Check only this rule");
  add_format(rules);
  rules->callback([&] {
    config = {{"sizes", ro.sizes}, {"rule", ro.rule.empty() ? Json() : Json(ro.rule)}};
    action = [&](unsigned) { return run_rules_check(ro); };
  });

  std::string schema_name;
  auto* schema = app.add_subcommand("schema", "Print an embedded JSON schema");
  schema->add_option("name", schema_name, "diagram, report or error")->required();

  std::vector<const char*> argv{"grover_lab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return 0;
  } catch (const CLI::Success&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  if (schema->parsed()) {
    const auto text = embedded_schema(schema_name);
    if (!text) {
      err << "usage error: unknown schema '" << schema_name << "'\n";
      return 2;
    }
    out << *text;
    return 0;
  }

  try {
    const unsigned max_qubits = max_qubits_from_env();
    Output result = action(max_qubits);
    if (format == "csv" && result.table) {
      result.table->write(out);
      return 0;
    }
    Json doc = std::move(result.payload);
    config["format"] = format;
    config["max_qubits"] = max_qubits;
    doc["schema_version"] = kSchemaVersion;
    doc["tool_version"] = std::string(kToolVersion);
    doc["command"] = app.get_subcommands().front()->get_name();
    doc["config"] = std::move(config);
    out << doc.dump(2) << '\n';
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::type_error) {
      // Re-run validation so the structured report travels with the error.
      Json j = {{"code", std::string(code_name(e.code()))}, {"message", e.what()}};
      for (const auto* path : {&eval_path, &no.path, &roundtrip_path}) {
        if (path->empty()) continue;
        try {
          j["report"] = typing_report_to_json(validate(parse_diagram(read_text_file(*path))));
        } catch (const Error&) {
        }
      }
      err << j.dump(2) << '\n';
      return 1;
    }
    write_error(err, e);
    return 1;
  }
}

}  // namespace grover_lab::cli
