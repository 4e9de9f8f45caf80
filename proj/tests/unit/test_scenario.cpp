#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>

#include "gvf/expression.hpp"
#include "gvf/scenario.hpp"

namespace gvf {
namespace {

using nlohmann::json;

json minimal() {
  return json::parse(R"({
    "path": {"shape": {"kind": "circle", "params": {"radius": 2}}},
    "sim": {"x0": [[3, 0]], "T": 1}
  })");
}

json with_obstacle() {
  auto doc = minimal();
  doc["obstacles"] = json::parse(R"([
    {"shape": {"kind": "circle", "params": {"center": [2, 0], "radius": 0.5}}, "c": -0.1, "k_r": 1}
  ])");
  return doc;
}

// Parses and returns the error message, or "" when parsing succeeds.
std::string parse_error(const json& doc) {
  try {
    parse_scenario(doc);
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return "";
}

TEST(Expression, Evaluates) {
  EXPECT_DOUBLE_EQ(evaluate_expression("pi/2"), std::numbers::pi / 2);
  EXPECT_DOUBLE_EQ(evaluate_expression("-(1 + 2) * 3"), -9.0);
  EXPECT_DOUBLE_EQ(evaluate_expression("2*e"), 2 * std::numbers::e);
  EXPECT_DOUBLE_EQ(evaluate_expression("1.5e-3"), 1.5e-3);
  EXPECT_DOUBLE_EQ(evaluate_expression("--2"), 2.0);
  EXPECT_DOUBLE_EQ(evaluate_expression("1 - 2 - 3"), -4.0);
  EXPECT_DOUBLE_EQ(evaluate_expression("8 / 4 / 2"), 1.0);
}

TEST(Expression, Rejects) {
  for (const char* bad : {"", "1 +", "foo", "(1", "1)", "1 / 0", "2 pi"}) {
    EXPECT_THROW(evaluate_expression(bad), InvalidArgument) << bad;
  }
}

TEST(Scenario, Defaults) {
  const auto s = parse_scenario(minimal());
  EXPECT_EQ(s.dimension, 2);
  EXPECT_EQ(s.path.gains, std::vector<double>{1.0});
  EXPECT_EQ(s.path.gamma, 1);
  EXPECT_EQ(s.composition, Composition::Normalized);
  EXPECT_FALSE(s.switching.enabled);
  EXPECT_EQ(s.model.kind, ModelKind::SingleIntegrator);
  EXPECT_DOUBLE_EQ(s.sim.dt, 1e-3);
  EXPECT_DOUBLE_EQ(s.sim.T, 1.0);
  EXPECT_TRUE(s.outputs.trajectory_csv);
  EXPECT_FALSE(s.outputs.svg);
  ASSERT_EQ(s.x0.size(), 1u);
  // Default window covers the start and the path with a margin.
  EXPECT_TRUE(s.window.contains(planar(3.0, 0.0)));
  EXPECT_TRUE(s.window.contains(planar(-2.0, -2.0)));

  const auto o = parse_scenario(with_obstacle()).obstacles.at(0);
  EXPECT_DOUBLE_EQ(o.l1, 0.1);
  EXPECT_DOUBLE_EQ(o.l2, 0.1);
  EXPECT_DOUBLE_EQ(o.l, 1.0);
  EXPECT_EQ(o.gamma, 1);
}

TEST(Scenario, ExpressionsInNumbers) {
  auto doc = minimal();
  doc["sim"]["x0"] = json::parse(R"([["2*1.5", "-pi/4"]])");
  const auto s = parse_scenario(doc);
  EXPECT_DOUBLE_EQ(s.x0[0][0], 3.0);
  EXPECT_DOUBLE_EQ(s.x0[0][1], -std::numbers::pi / 4);
  doc["sim"]["x0"] = json::parse(R"([["3 +"]])");
  EXPECT_EQ(parse_error(doc).rfind("sim.x0[0][0]:", 0), 0u);
}

TEST(Scenario, ErrorsNameTheKey) {
  auto starts_with = [](const std::string& msg, const std::string& prefix) { return msg.rfind(prefix, 0) == 0; };
  auto doc = with_obstacle();
  doc["obstacles"][0]["c"] = 0.2;
  EXPECT_TRUE(starts_with(parse_error(doc), "obstacles[0].c:")) << parse_error(doc);

  doc = with_obstacle();
  doc["obstacles"][0].erase("k_r");
  EXPECT_EQ(parse_error(doc), "obstacles[0].k_r: required");

  doc = with_obstacle();
  doc["obstacles"][0]["colour"] = "red";
  EXPECT_EQ(parse_error(doc), "obstacles[0].colour: unknown key");

  doc = minimal();
  doc["sim"]["x0"] = json::parse("[[1, 2, 3]]");
  EXPECT_TRUE(starts_with(parse_error(doc), "sim.x0[0]:")) << parse_error(doc);

  doc = minimal();
  doc["sim"]["dt"] = 0;
  EXPECT_TRUE(starts_with(parse_error(doc), "sim.dt:"));

  doc = minimal();
  doc.erase("path");
  EXPECT_EQ(parse_error(doc), "path: required");

  doc = minimal();
  doc["path"]["shape"]["kind"] = "torus";
  EXPECT_TRUE(starts_with(parse_error(doc), "path.shape.kind:")) << parse_error(doc);

  doc = minimal();
  doc["model"] = json::parse(R"({"kind": "dubins", "s": -1})");
  doc["sim"]["x0"] = json::parse("[[3, 0, 0]]");
  EXPECT_TRUE(starts_with(parse_error(doc), "model")) << parse_error(doc);

  doc = minimal();
  doc["window"] = json::parse("[1, 0, 0, 1]");
  EXPECT_TRUE(starts_with(parse_error(doc), "window:"));
}

TEST(Scenario, RejectsCoveredPathAndOverlaps) {
  auto doc = minimal();
  doc["obstacles"] = json::parse(R"([
    {"shape": {"kind": "circle", "params": {"radius": 3}}, "c": -1, "k_r": 1}
  ])");
  EXPECT_EQ(parse_error(doc), "obstacles: reactive areas cover the whole desired path");

  doc = with_obstacle();
  doc["obstacles"].push_back(doc["obstacles"][0]);
  EXPECT_EQ(parse_error(doc).rfind("obstacles:", 0), 0u);
}

TEST(Scenario, SwitchingNeedsPlanarScenario) {
  const auto doc = json::parse(R"({
    "path": {"shapes": [{"kind": "plane", "params": {"normal": [0, 0, 1]}},
                        {"kind": "plane", "params": {"normal": [0, 1, 0]}}]},
    "switching": {"enabled": true},
    "sim": {"x0": [[1, 1, 1]], "T": 1}
  })");
  EXPECT_EQ(parse_error(doc).rfind("switching.enabled:", 0), 0u);
}

TEST(Scenario, CanonicalRoundTrip) {
  const auto dir = std::filesystem::path(GVF_SCENARIO_DIR);
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    ++seen;
    const auto s = load_scenario(entry.path());
    const json canonical = to_json(s);
    const auto again = parse_scenario(canonical);
    EXPECT_EQ(to_json(again), canonical) << entry.path();
    EXPECT_EQ(again.x0.size(), s.x0.size());
    EXPECT_EQ(again.obstacles.size(), s.obstacles.size());
  }
  EXPECT_GE(seen, 8);
}

TEST(Scenario, SyntaxErrorsReportPosition) {
  const auto file = std::filesystem::temp_directory_path() / "gvf_bad_scenario.json";
  {
    std::ofstream out(file);
    out << "{\n  \"path\": {,\n}\n";
  }
  try {
    load_scenario(file);
    FAIL() << "expected a parse error";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find(file.string() + ":2:"), std::string::npos) << e.what();
  }
  std::filesystem::remove(file);
  EXPECT_THROW(load_scenario(file), InvalidArgument);
}

Scenario shipped(const std::string& name) {
  return load_scenario(std::filesystem::path(GVF_SCENARIO_DIR) / (name + ".json"));
}

TEST(Scenario, ErrorBoundMatchesDenseSampling) {
  const auto s = shipped("sim1");
  const auto stack = s.stack();
  for (const auto& x0 : s.x0) {
    const Vec p = s.model.position(x0);
    // Oracle: 800 x 800 grid over each reactive bounding box.
    double best = std::abs(s.path.error(p));
    for (const auto& obs : s.obstacles) {
      Window box{INFINITY, -INFINITY, INFINITY, -INFINITY};
      for (const auto& q : LevelCurve(obs.surface, 0.0).sample(1024)) {
        box = {std::min(box.x0, q.x()), std::max(box.x1, q.x()), std::min(box.y0, q.y()), std::max(box.y1, q.y())};
      }
      const int n = 800;
      for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
          const Vec q = planar(box.x0 + box.width() * i / n, box.y0 + box.height() * j / n);
          if (obs.surface.eval(q) <= 0.0) best = std::max(best, std::abs(s.path.error(q)));
        }
      }
    }
    const double M = estimate_error_bound(stack, p);
    EXPECT_GE(M, 1.05 * best * (1.0 - 1e-6));
    EXPECT_NEAR(M, 1.05 * best, 1.05 * best * 1e-3);
  }
}

TEST(Scenario, ShippedScenariosRespectTheirErrorBound) {
  for (const auto& entry : std::filesystem::directory_iterator(GVF_SCENARIO_DIR)) {
    const auto s = load_scenario(entry.path());
    const auto result = run_scenario(s);
    for (const auto& run : result.runs) {
      for (const auto& m : run.monitors) {
        if (m.objective == "error-bound" || m.objective == "safety" || m.objective == "monotone-outside") {
          EXPECT_FALSE(m.failed()) << s.name << " " << m.objective << " " << m.detail;
        }
      }
    }
  }
}

TEST(Scenario, EscapeCensus) {
  auto composite = shipped("sim2_composite");
  composite.sim.T = 30.0;
  const auto stuck = escape_census(composite, 3);
  EXPECT_EQ(stuck.sampled() + stuck.skipped, 9);
  EXPECT_GT(stuck.stuck, 0);
  EXPECT_EQ(stuck.stuck_seeds.size(), static_cast<std::size_t>(stuck.stuck));

  auto switching = shipped("sim2_switching");
  switching.sim.T = 30.0;
  const auto escaped = escape_census(switching, 3);
  EXPECT_EQ(escaped.stuck, 0);
  EXPECT_DOUBLE_EQ(escaped.fraction(), 1.0);
  EXPECT_THROW(escape_census(switching, 0), InvalidArgument);
}

}  // namespace
}  // namespace gvf
