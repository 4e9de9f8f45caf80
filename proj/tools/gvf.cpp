// gvf: command-line driver for scenario files.

#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>

#include "gvf/conditions.hpp"
#include "gvf/export.hpp"
#include "gvf/expression.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kMonitorFailure = 1;
constexpr int kInputError = 2;

std::vector<double> split_numbers(const std::string& text, std::size_t expected, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(gvf::evaluate_expression(cell));
  if (out.size() != expected) {
    throw gvf::InvalidArgument(what + ": expected " + std::to_string(expected) + " comma-separated numbers");
  }
  return out;
}

gvf::Window parse_window(const std::string& text) {
  const auto v = split_numbers(text, 4, "--window");
  if (!(v[1] > v[0] && v[3] > v[2])) throw gvf::InvalidArgument("--window: need x0 < x1 and y0 < y1");
  return {v[0], v[1], v[2], v[3]};
}

void require_planar(const gvf::Scenario& sc, const char* cmd) {
  if (sc.dimension != 2) throw gvf::InvalidArgument(std::string(cmd) + ": planar scenarios only");
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gvf::InvalidArgument(path.string() + ": cannot write");
  out << text;
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_simulate(const std::string& file, const std::string& out_dir) {
  const auto sc = gvf::load_scenario(file);
  const auto result = gvf::run_scenario(sc);
  json report = gvf::run_report(sc, result);
  for (const auto& w : gvf::geometry_warnings(sc)) {
    spdlog::warn("{}", w);
    report["warnings"].push_back(w);
  }
  if (out_dir.empty()) {
    print_json(report);
  } else {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    if (sc.outputs.trajectory_csv) {
      for (std::size_t k = 0; k < result.runs.size(); ++k) {
        std::ofstream csv(dir / ("traj_" + std::to_string(k) + ".csv"), std::ios::binary);
        gvf::write_trajectory_csv(csv, result.runs[k].trajectory);
      }
    }
    if (sc.outputs.grid && sc.dimension == 2) {
      std::ofstream csv(dir / "grid.csv", std::ios::binary);
      const auto stack = sc.stack();
      gvf::write_grid_csv(csv, [&stack](const gvf::Vec& p, double t) { return stack(p, t); }, sc.window,
                          sc.outputs.grid_resolution);
    }
    if (sc.outputs.svg) {
      gvf::RenderOptions opt;
      if (sc.dimension == 3) opt.projection = gvf::Projection::XY;
      for (const auto& r : result.runs) {
        std::vector<gvf::Vec> pts;
        for (std::size_t i = 0; i < r.trajectory.samples.size(); ++i) pts.push_back(r.trajectory.position(i));
        opt.trajectories.push_back(std::move(pts));
      }
      write_file(dir / "figure.svg", gvf::render_svg(sc, opt));
    }
    write_file(dir / "report.json", report.dump(2) + "\n");
  }
  for (std::size_t k = 0; k < result.runs.size(); ++k) {
    for (const auto& m : result.runs[k].monitors) {
      std::cerr << "trajectory " << k << ": " << m.objective << ": " << gvf::to_string(m.verdict)
                << (m.detail.empty() ? "" : " (" + m.detail + ")") << '\n';
    }
  }
  return result.any_failed() ? kMonitorFailure : kOk;
}

int cmd_grid(const std::string& file, const std::string& window, int res, double t, const std::string& out) {
  const auto sc = gvf::load_scenario(file);
  require_planar(sc, "grid");
  const gvf::Window w = window.empty() ? sc.window : parse_window(window);
  const auto stack = sc.stack();
  const gvf::FieldProvider field = [&stack](const gvf::Vec& p, double tt) { return stack(p, tt); };
  if (out.empty()) {
    gvf::write_grid_csv(std::cout, field, w, res, t);
  } else {
    std::ofstream csv(out, std::ios::binary);
    gvf::write_grid_csv(csv, field, w, res, t);
  }
  return kOk;
}

int cmd_equilibria(const std::string& file, const std::string& window, int grid_n) {
  const auto sc = gvf::load_scenario(file);
  require_planar(sc, "equilibria");
  const gvf::Window w = window.empty() ? sc.window : parse_window(window);
  const auto stack = sc.stack();
  const auto search = gvf::find_equilibria(gvf::composite_field(stack), w, grid_n);
  json eqs = json::array();
  for (const auto& e : search.equilibria) {
    json j = gvf::to_json(e);
    j["phi_path"] = sc.path.error(e.location);
    std::vector<gvf::Region> regions;
    for (const auto& o : sc.obstacles) regions.push_back(gvf::region_of(o, e.location));
    j["region"] = gvf::region_label(regions);
    eqs.push_back(j);
  }
  print_json({{"window", {w.x0, w.x1, w.y0, w.y1}},
              {"grid_n", grid_n},
              {"seeds", search.seeds},
              {"dropped", search.dropped},
              {"equilibria", eqs}});
  return kOk;
}

int cmd_index(const std::string& file, const std::vector<std::string>& boundary, std::size_t obstacle) {
  const auto sc = gvf::load_scenario(file);
  require_planar(sc, "index");
  const auto stack = sc.stack();
  const std::string& kind = boundary.at(0);
  if (kind == "custom-circle") {
    if (boundary.size() != 2) throw gvf::InvalidArgument("--boundary custom-circle needs cx,cy,r");
    const auto v = split_numbers(boundary[1], 3, "custom-circle");
    if (!(v[2] > 0.0)) throw gvf::InvalidArgument("custom-circle: radius must be positive");
    const int idx = gvf::poincare_index(gvf::composite_field(stack), gvf::circle_curve(gvf::planar(v[0], v[1]), v[2]), 1024);
    print_json({{"boundary", "custom-circle"}, {"center", {v[0], v[1]}}, {"radius", v[2]}, {"index", idx}});
    return kOk;
  }
  if (kind != "reactive" && kind != "repulsive") {
    throw gvf::InvalidArgument("--boundary: expected reactive, repulsive or custom-circle");
  }
  if (obstacle >= sc.obstacles.size()) throw gvf::InvalidArgument("--obstacle: no such obstacle");
  const double level = kind == "reactive" ? 0.0 : sc.obstacles[obstacle].c;
  json j = gvf::to_json(gvf::index_census(stack, obstacle, level));
  j["boundary"] = kind;
  print_json(j);
  return kOk;
}

int cmd_conditions(const std::string& file) {
  const auto sc = gvf::load_scenario(file);
  json j = gvf::to_json(gvf::condition_report(sc));
  j["scenario"] = sc.name;
  j["geometry_warnings"] = gvf::geometry_warnings(sc);
  print_json(j);
  return kOk;
}

int cmd_escape(const std::string& file, int seeds) {
  const auto sc = gvf::load_scenario(file);
  json j = gvf::to_json(gvf::escape_census(sc, seeds));
  j["scenario"] = sc.name;
  print_json(j);
  return kOk;
}

int cmd_render(const std::string& file, const std::string& traj_dir, const std::string& project, int res,
               const std::string& out, double t) {
  const auto sc = gvf::load_scenario(file);
  gvf::RenderOptions opt;
  opt.contour_resolution = res;
  opt.time = t;
  if (!project.empty()) opt.projection = gvf::projection_from_string(project);
  if (!traj_dir.empty()) {
    std::vector<std::pair<int, fs::path>> files;
    const std::regex pattern(R"(traj_(\d+)\.csv)");
    for (const auto& entry : fs::directory_iterator(traj_dir)) {
      std::smatch m;
      const std::string name = entry.path().filename().string();
      if (std::regex_match(name, m, pattern)) files.emplace_back(std::stoi(m[1]), entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& [k, path] : files) {
      std::ifstream in(path);
      opt.trajectories.push_back(gvf::read_trajectory_positions(in));
    }
  }
  const std::string svg = gvf::render_svg(sc, opt);
  if (out.empty()) {
    std::cout << svg;
  } else {
    write_file(out, svg);
  }
  return kOk;
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("gvf");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("GVF_LOG")) spdlog::cfg::helpers::load_levels(env);
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Guiding vector fields with reactive obstacle avoidance"};
  app.require_subcommand(1);

  std::string scenario, out, window, traj_dir, project;
  int res = 101, grid_n = 192, contour_res = 256, seeds = 8;
  double t = 0.0;
  std::vector<std::string> boundary;
  std::size_t obstacle = 0;

  auto* sim = app.add_subcommand("simulate", "Integrate every initial condition and run the monitors");
  sim->add_option("scenario", scenario, "Scenario JSON file")->required();
  sim->add_option("--out", out, "Directory for trajectory CSVs, report.json and optional grid/figure");

  auto* grid = app.add_subcommand("grid", "Sample the composite field on a grid (CSV x,y,u,v)");
  grid->add_option("scenario", scenario)->required();
  grid->add_option("--window", window, "x0,x1,y0,y1 (default: scenario window)");
  grid->add_option("--res", res, "Nodes per axis")->check(CLI::Range(2, 100000));
  grid->add_option("--t", t, "Time for moving obstacles");
  grid->add_option("--out", out, "Output file (default: stdout)");

  auto* eq = app.add_subcommand("equilibria", "Find and classify equilibria of the composite field");
  eq->add_option("scenario", scenario)->required();
  eq->add_option("--window", window, "x0,x1,y0,y1 (default: scenario window)");
  eq->add_option("--grid", grid_n, "Seed grid nodes per axis")->check(CLI::Range(16, 4096));

  auto* idx = app.add_subcommand("index", "Poincare index of the composite field along a boundary");
  idx->add_option("scenario", scenario)->required();
  idx->add_option("--boundary", boundary, "reactive | repulsive | custom-circle cx,cy,r")->required()->expected(1, 2);
  idx->add_option("--obstacle", obstacle, "Obstacle index for reactive/repulsive boundaries");

  auto* cond = app.add_subcommand("conditions", "Check the sufficient conditions for convergence");
  cond->add_option("scenario", scenario)->required();

  auto* esc = app.add_subcommand("escape", "Fraction of grid-seeded starts that do not get stuck");
  esc->add_option("scenario", scenario)->required();
  esc->add_option("--seeds", seeds, "Seeds per axis over the scenario window")->check(CLI::Range(1, 256));

  auto* render = app.add_subcommand("render", "Draw boundaries, path and trajectories as SVG");
  render->add_option("scenario", scenario)->required();
  render->add_option("--traj", traj_dir, "Directory with traj_<k>.csv files");
  render->add_option("--project", project, "Projection for 3D scenarios: xy, xz or yz");
  render->add_option("--res", contour_res, "Contour grid nodes per axis")->check(CLI::Range(2, 4096));
  render->add_option("--t", t, "Time at which moving obstacles are drawn");
  render->add_option("--out", out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*sim) return cmd_simulate(scenario, out);
    if (*grid) return cmd_grid(scenario, window, res, t, out);
    if (*eq) return cmd_equilibria(scenario, window, grid_n);
    if (*idx) return cmd_index(scenario, boundary, obstacle);
    if (*cond) return cmd_conditions(scenario);
    if (*esc) return cmd_escape(scenario, seeds);
    if (*render) return cmd_render(scenario, traj_dir, project, contour_res, out, t);
  } catch (const gvf::Error& e) {
    std::cerr << "gvf: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "gvf: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
