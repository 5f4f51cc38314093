// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bertini/runner.hpp"

using namespace bertini;
using nlohmann::json;

namespace {

json avoidance() {
  return json::parse(R"({
    "name": "t_avoid", "kind": "avoidance", "field": {"p": 2}, "n": 2,
    "W": {"points": [["1","1","1"]]}, "d_lo": 1, "d_hi": 3, "tolerance": {"exact": true}
  })");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void expect_violation(const json& doc, const std::string& needle) {
  const auto v = schema_violations(experiment_schema(), doc);
  std::string all;
  for (const auto& s : v) all += s + "\n";
  EXPECT_NE(all.find(needle), std::string::npos) << "got:\n" << all;
  EXPECT_THROW(ExperimentConfig::parse(doc), ConfigError);
}

}  // namespace

TEST(Schema, AcceptsShippedConfigs) {
  int n = 0;
  for (const auto& e : std::filesystem::directory_iterator(BERTINI_SOURCE_DIR "/configs")) {
    if (e.path().extension() != ".json") continue;
    ++n;
    SCOPED_TRACE(e.path().string());
    EXPECT_TRUE(schema_violations(experiment_schema(), json::parse(slurp(e.path()))).empty());
    EXPECT_NO_THROW(ExperimentConfig::load(e.path().string()));
  }
  EXPECT_GE(n, 10);
}

TEST(Schema, Violations) {
  auto d = avoidance();
  d["bogus"] = 1;
  expect_violation(d, "(root): unknown key \"bogus\"");
  d = avoidance();
  d.erase("field");
  expect_violation(d, "missing required key \"field\"");
  d = avoidance();
  d["kind"] = "nonsense";
  expect_violation(d, "/kind");
  d = avoidance();
  d["field"]["p"] = "2";
  expect_violation(d, "/field/p: expected \"integer\"");
  d = avoidance();
  d["n"] = 0;
  expect_violation(d, "/n: below minimum");
  d = avoidance();
  d["W"] = {{"points", {{{"degree", 2}}}}};
  expect_violation(d, "/W/points/0: matches none");
  d = avoidance();
  d["tolerance"] = {{"per_degree", {{"five", 0.1}}}};
  expect_violation(d, "unknown key \"five\"");
  d = avoidance();
  d["n"] = 2.0;  // integral floats count as integers
  EXPECT_TRUE(schema_violations(experiment_schema(), d).empty());
}

TEST(Config, SemanticErrors) {
  auto d = avoidance();
  d.erase("W");
  EXPECT_THROW(ExperimentConfig::parse(d), ConfigError);
  d = avoidance();
  d["predicates"] = {"smooth"};
  EXPECT_THROW(ExperimentConfig::parse(d), ConfigError);
  d = avoidance();
  d["field"]["p"] = 4;
  EXPECT_THROW(ExperimentConfig::parse(d), ConfigError);
  d = avoidance();
  d["W"] = {{"points", {{"1", "1"}}}};
  EXPECT_THROW(ExperimentConfig::parse(d), ConfigError);
  d = avoidance();
  d["W"] = {{"points", {{"1", "1", "1"}}}, {"ideal", {"x0"}}};
  EXPECT_THROW(ExperimentConfig::parse(d), ConfigError);
  d = avoidance();
  d["d_lo"] = 4;
  EXPECT_THROW(ExperimentConfig::parse(d), ConfigError);
  d = avoidance();
  d["W"] = {{"ideal", {"x0 + y"}}};
  EXPECT_THROW(ExperimentConfig::parse(d), ConfigError);
}

TEST(Config, DimensionOfXDefaultsFromIdeal) {
  auto d = json::parse(R"({"name":"c","kind":"smooth_density","field":{"p":2},"n":2,
                           "X":{"ideal":["x0*x1 + x2^2"]},"d_lo":1,"d_hi":2})");
  EXPECT_EQ(ExperimentConfig::parse(d).census->problem.m, 1);
  d.erase("X");
  EXPECT_EQ(ExperimentConfig::parse(d).census->problem.m, 2);
}

TEST(Config, DegreeTwoPointsAndTaylor) {
  auto d = json::parse(R"({"name":"t","kind":"taylor_density","field":{"p":2},"n":2,
                           "Y":{"points":[{"degree":2,"coords":["1","g","0"]}]},
                           "taylor":[["0"],["g^2"]],"d_lo":2,"d_hi":2})");
  const auto c = ExperimentConfig::parse(d);
  ASSERT_EQ(c.census->predicate.taylor.size(), 2u);
  EXPECT_EQ(c.census->predicate.taylor[0][0], 0u);
  EXPECT_NE(c.census->predicate.taylor[1][0], 0u);
  d["taylor"] = {{"0", "0"}};
  EXPECT_THROW(ExperimentConfig::parse(d), ConfigError);
}

TEST(Run, AvoidanceArtifacts) {
  const auto c = ExperimentConfig::parse(avoidance());
  const auto out = run_experiment(c, Command::Census);
  EXPECT_EQ(out.exit_code, 0);
  const auto& csv = out.artifacts.at("report.csv");
  EXPECT_NE(csv.find("\n1,8,4,0,1,2,"), std::string::npos);
  EXPECT_NE(csv.find("\n3,1024,512,0,1,2,"), std::string::npos);
  const auto rep = json::parse(out.artifacts.at("report.json"));
  EXPECT_EQ(rep["status"], "pass");
  EXPECT_FALSE(rep["config"].contains("threads"));
  EXPECT_NE(out.summary.find("status: pass"), std::string::npos);
  EXPECT_THROW(run_experiment(c, Command::Zeta), ConfigError);
}

TEST(Run, ToleranceFailureExitsOne) {
  auto d = json::parse(R"({"name":"s","kind":"smooth_density","field":{"p":2},"n":2,
                           "d_lo":1,"d_hi":2,"tolerance":{"default":0.001}})");
  const auto out = run_experiment(ExperimentConfig::parse(d), Command::Census);
  EXPECT_EQ(out.exit_code, 1);
  EXPECT_EQ(json::parse(out.artifacts.at("report.json"))["status"], "fail");
  // containment has prediction 0, not the exact per-degree value
  d = json::parse(R"({"name":"c","kind":"containment","field":{"p":2},"n":2,
                      "W":{"ideal":["x0"]},"d_lo":1,"d_hi":2,"tolerance":{"exact":true}})");
  EXPECT_EQ(run_experiment(ExperimentConfig::parse(d), Command::Census).exit_code, 1);
}

TEST(Run, ThreadOverrideKeepsArtifacts) {
  auto d = json::parse(R"({"name":"s","kind":"smooth_density","field":{"p":2},"n":2,"d_lo":1,"d_hi":3})");
  const auto c = ExperimentConfig::parse(d);
  const auto a = run_experiment(c, Command::Census, {1, std::nullopt});
  const auto b = run_experiment(c, Command::Census, {4, std::nullopt});
  EXPECT_EQ(a.artifacts, b.artifacts);
}

TEST(Run, ZetaPlane) {
  const auto c = ExperimentConfig::load(BERTINI_SOURCE_DIR "/configs/zeta_plane_f2.json");
  const auto out = run_experiment(c, Command::Zeta);
  EXPECT_EQ(out.exit_code, 0);
  const auto z = json::parse(out.artifacts.at("zeta.json"));
  EXPECT_EQ(z["b"][0], 7);
  EXPECT_EQ(z["b"][1], 7);
  EXPECT_EQ(z["b"][2], 22);
  EXPECT_EQ(z["values"][0]["inverse_exact"], "21/64");
  EXPECT_NEAR(z["values"][0]["inverse_truncated"].get<double>(), 0.328125, 1e-6);
  EXPECT_EQ(out.artifacts.at("zeta.csv").substr(0, 24), "r,a_r,b_r\n1,7,7\n2,21,7\n3");
}

TEST(Run, ZetaRejectsSmallS) {
  auto d = json::parse(R"({"name":"z","kind":"zeta_table","field":{"p":2},"n":2,"s":[2]})");
  EXPECT_THROW(run_experiment(ExperimentConfig::parse(d), Command::Zeta), ConfigError);
}

TEST(Run, LiftQuadric) {
  const auto c = ExperimentConfig::load(BERTINI_SOURCE_DIR "/configs/lift_quadric_hyperplane_f2.json");
  const auto out = run_experiment(c, Command::Lift);
  EXPECT_EQ(out.exit_code, 0);
  const auto j = json::parse(out.artifacts.at("lifts.json"));
  EXPECT_GE(j["result"]["lifts"].size(), 5u);
  for (const auto& r : j["reverified"]) EXPECT_TRUE(r.get<bool>());
}

TEST(Run, WriteArtifacts) {
  const auto dir = std::filesystem::temp_directory_path() / "bertini_runner_test";
  std::filesystem::remove_all(dir);
  const auto out = run_experiment(ExperimentConfig::parse(avoidance()), Command::Census);
  write_artifacts(out, dir.string());
  EXPECT_EQ(slurp(dir / "report.csv"), out.artifacts.at("report.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "summary.txt"));
  std::filesystem::remove_all(dir);
}

TEST(Registry, MatchesDocsAndSchema) {
  const std::string doc = slurp(BERTINI_SOURCE_DIR "/docs/experiments.md");
  const auto kinds = experiment_schema()["properties"]["kind"]["enum"];
  EXPECT_EQ(kinds.size(), experiment_registry().size());
  for (const auto& k : experiment_registry()) {
    const std::string row = "| " + k.kind + " | " + to_string(k.command) + " | " + k.anchor + " |";
    EXPECT_NE(doc.find(row), std::string::npos) << row;
    EXPECT_NE(std::find(kinds.begin(), kinds.end(), k.kind), kinds.end()) << k.kind;
  }
}

TEST(Schema, RejectsSharedFixtures) {
  int n = 0;
  for (const auto& e : std::filesystem::directory_iterator(BERTINI_SOURCE_DIR "/tests/data/bad_schema")) {
    ++n;
    SCOPED_TRACE(e.path().string());
    EXPECT_FALSE(schema_violations(experiment_schema(), json::parse(slurp(e.path()))).empty());
    EXPECT_THROW(ExperimentConfig::load(e.path().string()), ConfigError);
  }
  EXPECT_GE(n, 10);
}
