#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "grover_lab_cli.hpp"

using namespace grover_lab;

namespace {

const std::filesystem::path kSamples = GROVER_LAB_SAMPLES_DIR;

struct Result {
  int status;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
  Json error() const { return Json::parse(err); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Cli, SimulateFindsMarkedElement) {
  const auto r = run({"simulate", "--n", "2", "--marked", "3", "--iterations", "1"});
  ASSERT_EQ(r.status, 0) << r.err;
  const Json j = r.json();
  EXPECT_DOUBLE_EQ(j["probabilities"][3].get<double>(), 1.0);
  EXPECT_EQ(j["n"], 2);
  EXPECT_EQ(j["k"], 1);
  EXPECT_EQ(j["mode"], "phase");
  EXPECT_EQ(j["command"], "simulate");
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["tool_version"], std::string(cli::kToolVersion));
  EXPECT_EQ(j["config"]["iterations"], "1");
  EXPECT_EQ(j["config"]["format"], "json");
}

TEST(Cli, SimulatePaperAndOptimalModes) {
  EXPECT_EQ(run({"simulate", "--n", "4", "--marked", "5", "--iterations", "paper"}).json()["k"], 4);
  EXPECT_EQ(run({"simulate", "--n", "4", "--marked", "5", "--iterations", "optimal"}).json()["k"], 3);
  const auto anc = run({"simulate", "--n", "3", "--marked", "1,2", "--oracle-mode", "ancilla"});
  ASSERT_EQ(anc.status, 0) << anc.err;
  EXPECT_EQ(anc.json()["marked"], Json::array({1, 2}));
}

TEST(Cli, SimulateCsv) {
  const auto r = run({"simulate", "--n", "2", "--marked", "3", "--iterations", "1", "--format", "csv"});
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "element,probability,marked\n0,0,0\n1,0,0\n2,0,0\n3,1,1\n");
}

TEST(Cli, FormulaAtFourIsZero) {
  const auto r = run({"formula", "--n", "2", "--k", "sqrt"});
  ASSERT_EQ(r.status, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["records"][0]["A"].get<double>(), 0.0);
  EXPECT_EQ(j["verdicts"]["simplification_identity"], "pass");
}

TEST(Cli, FormulaWithCapitalNAndRealK) {
  const auto r = run({"formula", "--N", "16", "--k", "4"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NEAR(r.json()["records"][0]["A"].get<double>(), -0.021037280559539794922, 1e-15);
}

TEST(Cli, FormulaDomainErrorExitsOne) {
  const auto r = run({"formula", "--N", "2"});
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.error()["code"], "domain-error");
}

TEST(Cli, FormulaNeedsExactlyOneSize) {
  EXPECT_EQ(run({"formula"}).status, 2);
  EXPECT_EQ(run({"formula", "--n", "3", "--N", "8"}).status, 2);
  EXPECT_EQ(run({"formula", "--n", "3", "--k", "abc"}).status, 2);
}

TEST(Cli, ClaimsReportsVerdicts) {
  const auto r = run({"claims", "--n-min", "2", "--n-max", "8"});
  ASSERT_EQ(r.status, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["records"].size(), 7u);
  EXPECT_EQ(j["verdicts"]["a_squared_below_half"], "pass");
  EXPECT_EQ(j["verdicts"]["marked_at_least_half"], "fail");
  EXPECT_EQ(j["config"]["n_max"], 8);
}

TEST(Cli, CompareEmitsDiscrepancy) {
  const auto r = run({"compare", "--n", "4", "--k-mode", "paper"});
  ASSERT_EQ(r.status, 0) << r.err;
  const Json rec = r.json()["records"][0];
  EXPECT_NEAR(rec["simulator_unmarked_each"].get<double>(), 0.027886390686035156, 1e-15);
  EXPECT_EQ(r.json()["verdicts"]["diagram_matches_simulator"], "pass");
  EXPECT_EQ(r.json()["verdicts"]["formula_matches_simulator"], "fail");
}

TEST(Cli, CompareNanRatioIsString) {
  const auto r = run({"compare", "--n", "2", "--k-mode", "optimal"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.json()["records"][0]["discrepancy_ratio"], "nan");
}

TEST(Cli, CompareSkipsDiagramAboveFiveQubits) {
  const auto r = run({"compare", "--n", "7"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.json()["verdicts"]["diagram_matches_simulator"], "n/a");
  EXPECT_TRUE(r.json()["records"][0]["diagram_marked"].is_null());
}

TEST(Cli, DiagramEvalMissingFile) {
  const auto r = run({"diagram-eval", "missing-file.json"});
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.error()["code"], "io-not-found");
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, DiagramEvalSample) {
  const auto r = run({"diagram-eval", (kSamples / "grover_n2_k1.json").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const Json t = r.json()["tensor"];
  EXPECT_EQ(t["rows"], 4);
  EXPECT_EQ(t["cols"], 1);
  EXPECT_NEAR(t["entries"][3][0].get<double>(), 1.0, 1e-12);
}

TEST(Cli, DiagramEvalTypeErrorCarriesReport) {
  const auto r = run({"diagram-eval", (kSamples / "mismatched_wire.json").string()});
  EXPECT_EQ(r.status, 1);
  const Json e = r.error();
  EXPECT_EQ(e["code"], "type-error");
  EXPECT_EQ(e["report"]["mismatches"][0]["slice_index"], 1);
}

TEST(Cli, DiagramEvalParseErrorHasPosition) {
  const auto path = temp_file("grover_lab_cli_bad.json", "{\n  \"version\": 1,\n  oops\n}\n");
  const auto r = run({"diagram-eval", path.string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.error()["code"], "parse-error");
  EXPECT_NE(r.error()["message"].get<std::string>().find("line 3"), std::string::npos);
}

TEST(Cli, DiagramEvalCapFlag) {
  const auto r = run({"diagram-eval", (kSamples / "grover_n2_k1.json").string(), "--max-entries", "4"});
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.error()["code"], "cap-exceeded");
}

TEST(Cli, DiagramNormalizeSample) {
  const auto r = run({"diagram-normalize", (kSamples / "copy_delete.json").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const Json j = r.json();
  ASSERT_EQ(j["trace"].size(), 2u);
  EXPECT_EQ(j["trace"][0]["rule"], "R1-copy");
  EXPECT_EQ(j["trace"][1]["rule"], "R2-delete");
  EXPECT_EQ(j["budget_exhausted"], false);
  EXPECT_EQ(j["verdicts"]["semantics_preserved"], "pass");
  EXPECT_EQ(j["final"]["slices"].size(), 1u);
}

TEST(Cli, DiagramNormalizeBudget) {
  const auto r = run({"diagram-normalize", (kSamples / "copy_delete.json").string(), "--max-steps", "1"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.json()["budget_exhausted"], true);
  EXPECT_EQ(r.json()["trace"].size(), 1u);
  EXPECT_EQ(run({"diagram-normalize", (kSamples / "copy_delete.json").string(), "--max-steps", "0"}).status, 2);
}

TEST(Cli, DiagramGroverRoundTripsThroughFile) {
  const auto g = run({"diagram-grover", "--n", "2", "--marked", "3", "--iterations", "1"});
  ASSERT_EQ(g.status, 0) << g.err;
  const auto path = temp_file("grover_lab_cli_grover.json", g.out);
  const auto e = run({"diagram-eval", path.string()});
  ASSERT_EQ(e.status, 0) << e.err;
  EXPECT_NEAR(e.json()["tensor"]["entries"][3][0].get<double>(), 1.0, 1e-12);
  // The emitted diagram re-prints to the same diagram fields.
  const auto rt = run({"diagram-roundtrip", path.string()});
  ASSERT_EQ(rt.status, 0) << rt.err;
  Json a = g.json(), b = rt.json();
  for (const char* key : {"command", "config"}) {
    a.erase(key);
    b.erase(key);
  }
  EXPECT_EQ(a, b);
}

TEST(Cli, RulesCheckSingleRule) {
  const auto r = run({"rules-check", "--rule", "R3-point-inner-product", "--sizes", "4"});
  ASSERT_EQ(r.status, 0) << r.err;
  const Json rec = r.json()["records"][0];
  EXPECT_EQ(rec["rule"], "R3-point-inner-product");
  EXPECT_EQ(rec["instantiations"], 16);
  EXPECT_EQ(rec["max_deviation"].get<double>(), 0.0);
  EXPECT_EQ(rec["pass"], true);
}

TEST(Cli, RulesCheckAll) {
  const auto r = run({"rules-check", "--sizes", "1,2,3"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.json()["records"].size(), rules_catalog().size());
  EXPECT_EQ(r.json()["verdicts"]["all_rules_sound"], "pass");
  EXPECT_EQ(run({"rules-check", "--rule", "nope"}).status, 1);
}

TEST(Cli, SchemaSubcommand) {
  const auto r = run({"schema", "diagram"});
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(Json::parse(r.out)["title"], "Slice-normal-form string diagram");
  EXPECT_EQ(run({"schema", "nope"}).status, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).status, 2);
  EXPECT_EQ(run({"bogus"}).status, 2);
  EXPECT_EQ(run({"simulate", "--n", "2", "--marked", "1", "--frobnicate"}).status, 2);
  EXPECT_EQ(run({"simulate", "--n", "2"}).status, 2);
  EXPECT_EQ(run({"simulate", "--n", "2", "--marked", "x"}).status, 2);
  EXPECT_EQ(run({"simulate", "--n", "2", "--marked", "1", "--iterations", "often"}).status, 2);
  EXPECT_EQ(run({"simulate", "--n", "2", "--marked", "1", "--format", "xml"}).status, 2);
  EXPECT_EQ(run({"compare", "--n", "2", "--k-mode", "fast"}).status, 2);
}

TEST(Cli, DomainErrorsExitOne) {
  const auto r = run({"simulate", "--n", "2", "--marked", "9"});
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.error()["code"], "invalid-argument");
  const auto cap = run({"simulate", "--n", "30", "--marked", "0"});
  EXPECT_EQ(cap.status, 1);
  EXPECT_EQ(cap.error()["code"], "cap-exceeded");
}

TEST(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("simulate"), std::string::npos);
}

TEST(Cli, MaxQubitsEnvironmentOverride) {
  ::setenv("GROVER_LAB_MAX_QUBITS", "3", 1);
  const auto capped = run({"simulate", "--n", "4", "--marked", "0"});
  ::setenv("GROVER_LAB_MAX_QUBITS", "bad", 1);
  const auto bad = run({"simulate", "--n", "2", "--marked", "0"});
  ::unsetenv("GROVER_LAB_MAX_QUBITS");
  EXPECT_EQ(capped.status, 1);
  EXPECT_EQ(capped.error()["code"], "cap-exceeded");
  EXPECT_EQ(bad.status, 2);
  EXPECT_EQ(run({"simulate", "--n", "4", "--marked", "0"}).status, 0);
}

TEST(Cli, OutputIsByteIdenticalAcrossRuns) {
  const std::vector<std::vector<std::string>> commands = {
      {"simulate", "--n", "5", "--marked", "7,9"},
      {"formula", "--n", "12"},
      {"claims", "--n-min", "2", "--n-max", "10"},
      {"compare", "--n", "4"},
      {"diagram-normalize", (kSamples / "copy_delete.json").string()},
      {"rules-check", "--sizes", "2,4"}};
  for (const auto& c : commands) {
    const auto a = run(c), b = run(c);
    EXPECT_EQ(a.status, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Cli, ObjectKeysAreSorted) {
  const auto r = run({"compare", "--n", "3"});
  const std::string& s = r.out;
  EXPECT_LT(s.find("\"command\""), s.find("\"config\""));
  EXPECT_LT(s.find("\"config\""), s.find("\"records\""));
  EXPECT_LT(s.find("\"records\""), s.find("\"schema_version\""));
}
