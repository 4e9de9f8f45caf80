#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "gvf/monitors.hpp"

namespace gvf {

struct OutputOptions {
  bool trajectory_csv = true;
  bool grid = false;
  bool svg = false;
  int grid_resolution = 101;
};

/// A complete experiment: geometry, gains, switching, robot model, initial
/// conditions and outputs. Obtained from JSON via parse_scenario; all
/// defaults are applied and validated on load.
struct Scenario {
  std::string name;
  int dimension = 2;
  PathSpec path;
  std::vector<Obstacle> obstacles;
  Composition composition = Composition::Normalized;
  SwitchingConfig switching;
  RobotModel model;
  std::vector<State> x0;
  SimOptions sim;
  OutputOptions outputs;
  Window window;

  FieldStack stack() const { return FieldStack(path, obstacles, composition); }
};

/// Parses and validates. Errors name the offending key path, e.g.
/// "obstacles[0].c: repulsive level must be negative".
Scenario parse_scenario(const nlohmann::json& doc);

/// Reads a JSON file; syntax errors report line and column.
Scenario load_scenario(const std::filesystem::path& file);

/// Canonical JSON form with every default spelled out; parsing it again
/// yields an identical scenario.
nlohmann::json to_json(const Scenario& scenario);

nlohmann::json shape_to_json(const ShapeSpec& spec, int dimension);
ShapeSpec shape_from_json(const nlohmann::json& j, const std::string& key);

struct TrajectoryRun {
  Trajectory trajectory;
  std::vector<MonitorReport> monitors;
};

struct RunResult {
  std::vector<TrajectoryRun> runs;
  std::vector<SwitchPlan> plans;
  std::vector<std::string> warnings;

  bool any_failed() const;
};

/// Switching plans for every obstacle that admits one. Obstacles for which
/// no automatic level qualifies are skipped with a warning.
std::vector<SwitchPlan> plan_switching(const Scenario& scenario, std::vector<std::string>& warnings);

/// Integrates every initial condition and runs the applicable monitors.
RunResult run_scenario(const Scenario& scenario);

nlohmann::json run_report(const Scenario& scenario, const RunResult& result);

/// Finite-seed estimate of how many starts avoid getting stuck. Seeds are the
/// cell centers of an n x n grid over the scenario window (at the height of
/// the first start in 3D; Dubins seeds face along the guidance). Seeds inside
/// a repulsive area are skipped. A seed escapes unless its penetrability
/// check fails (stalled or singular inside a reactive area). Escaped seeds
/// still inside a reactive area at the horizon are also counted as undecided.
struct EscapeCensus {
  int seeds_per_axis = 8;
  int skipped = 0;
  int escaped = 0;
  int stuck = 0;
  int undecided = 0;
  std::vector<Vec> stuck_seeds;

  int sampled() const { return escaped + stuck; }
  double fraction() const { return sampled() ? static_cast<double>(escaped) / sampled() : 0.0; }
};

EscapeCensus escape_census(const Scenario& scenario, int seeds_per_axis = 8);

nlohmann::json to_json(const EscapeCensus& census);

}  // namespace gvf
