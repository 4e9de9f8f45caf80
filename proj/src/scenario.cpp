#include "gvf/scenario.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "gvf/expression.hpp"

namespace gvf {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw InvalidArgument(key + ": " + what);
}

void check_keys(const json& j, const std::string& key, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) fail(key, "expected an object");
  for (const auto& [k, v] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      fail(key.empty() ? k : key + "." + k, "unknown key");
    }
  }
}

std::string join(const std::string& key, const std::string& child) {
  return key.empty() ? child : key + "." + child;
}

double number(const json& j, const std::string& key) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      return evaluate_expression(j.get<std::string>());
    } catch (const InvalidArgument& e) {
      fail(key, e.what());
    }
  }
  fail(key, "expected a number or an expression string");
}

double number_or(const json& obj, const std::string& key, const std::string& name, double fallback) {
  auto it = obj.find(name);
  return it == obj.end() ? fallback : number(*it, join(key, name));
}

double required_number(const json& obj, const std::string& key, const std::string& name) {
  auto it = obj.find(name);
  if (it == obj.end()) fail(join(key, name), "required");
  return number(*it, join(key, name));
}

std::vector<double> numbers(const json& j, const std::string& key) {
  if (!j.is_array()) fail(key, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

bool boolean_or(const json& obj, const std::string& key, const std::string& name, bool fallback) {
  auto it = obj.find(name);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) fail(join(key, name), "expected true or false");
  return it->get<bool>();
}

std::string string_or(const json& obj, const std::string& key, const std::string& name, std::string fallback) {
  auto it = obj.find(name);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) fail(join(key, name), "expected a string");
  return it->get<std::string>();
}

int sign_or(const json& obj, const std::string& key, const std::string& name) {
  const double g = number_or(obj, key, name, 1.0);
  if (g != 1.0 && g != -1.0) fail(join(key, name), "must be +1 or -1");
  return static_cast<int>(g);
}

Vec vec_of(const std::vector<double>& v) {
  Vec out = Vec::Zero();
  for (std::size_t i = 0; i < v.size() && i < 3; ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

const std::set<std::string, std::less<>> kVectorParams = {"center", "normal", "samples"};

ImplicitFunction build_shape(const json& j, const std::string& key) {
  const ShapeSpec spec = shape_from_json(j, key);
  try {
    return make_shape(spec);
  } catch (const Error& e) {
    fail(key, e.what());
  }
}

// Points on a planar path: the level curve when the shape is star-shaped,
// otherwise zero crossings along vertical lines through the window.
std::vector<Vec> path_points(const ImplicitFunction& f, const Window& w) {
  if (auto c = f.center(); c && f.eval(*c) < 0.0) return LevelCurve(f, 0.0).sample(360);
  std::vector<Vec> pts;
  const int nx = 200, ny = 400;
  for (int i = 0; i < nx; ++i) {
    const double x = w.x0 + w.width() * i / (nx - 1);
    double y_prev = w.y0, v_prev = f.eval(planar(x, y_prev));
    for (int j = 1; j < ny; ++j) {
      const double y = w.y0 + w.height() * j / (ny - 1);
      const double v = f.eval(planar(x, y));
      if ((v_prev <= 0.0) != (v <= 0.0)) pts.push_back(planar(x, 0.5 * (y + y_prev)));
      y_prev = y;
      v_prev = v;
    }
  }
  return pts;
}

Window default_window(const Scenario& s) {
  Window w{INFINITY, -INFINITY, INFINITY, -INFINITY};
  auto add = [&](const Vec& p) {
    w.x0 = std::min(w.x0, p.x());
    w.x1 = std::max(w.x1, p.x());
    w.y0 = std::min(w.y0, p.y());
    w.y1 = std::max(w.y1, p.y());
  };
  for (const auto& x : s.x0) add(s.model.position(x));
  for (const auto& obs : s.obstacles) {
    auto c = obs.surface.center();
    if (!c || !(obs.surface.eval(*c) < 0.0)) continue;
    const auto pts = s.dimension == 2 ? LevelCurve(obs.surface, 0.0).sample(128)
                                      : level_surface_points(obs.surface, 0.0, 256);
    for (const auto& p : pts) add(p);
  }
  if (s.dimension == 2) {
    const auto& f = s.path.surfaces[0];
    if (auto c = f.center(); c && f.eval(*c) < 0.0) {
      for (const auto& p : LevelCurve(f, 0.0).sample(128)) add(p);
    }
  }
  const double mx = std::max(0.2 * w.width(), 0.5), my = std::max(0.2 * w.height(), 0.5);
  return {w.x0 - mx, w.x1 + mx, w.y0 - my, w.y1 + my};
}

json vec_json(const Vec& v, int dim) {
  json a = json::array();
  for (int i = 0; i < dim; ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

ShapeSpec shape_from_json(const json& j, const std::string& key) {
  check_keys(j, key, {"kind", "params", "basis", "motion"});
  ShapeSpec spec;
  auto kind = j.find("kind");
  if (kind == j.end() || !kind->is_string()) fail(join(key, "kind"), "required shape kind");
  try {
    spec.kind = shape_kind_from_string(kind->get<std::string>());
  } catch (const InvalidArgument& e) {
    fail(join(key, "kind"), e.what());
  }
  if (spec.kind == ShapeKind::Custom) fail(join(key, "kind"), "custom shapes are only available through the library API");
  if (auto params = j.find("params"); params != j.end()) {
    if (!params->is_object()) fail(join(key, "params"), "expected an object");
    for (const auto& [name, value] : params->items()) {
      const std::string pkey = join(key, "params." + name);
      if (value.is_array()) {
        std::vector<double> flat;
        for (std::size_t i = 0; i < value.size(); ++i) {
          const std::string ikey = pkey + "[" + std::to_string(i) + "]";
          if (value[i].is_array()) {
            for (double v : numbers(value[i], ikey)) flat.push_back(v);
          } else {
            flat.push_back(number(value[i], ikey));
          }
        }
        spec.params[name] = std::move(flat);
      } else {
        spec.params[name] = {number(value, pkey)};
      }
    }
  }
  if (auto basis = j.find("basis"); basis != j.end()) {
    if (!basis->is_string()) fail(join(key, "basis"), "expected a string");
    try {
      spec.basis = radial_basis_from_string(basis->get<std::string>());
    } catch (const InvalidArgument& e) {
      fail(join(key, "basis"), e.what());
    }
  }
  if (auto motion = j.find("motion"); motion != j.end()) {
    check_keys(*motion, join(key, "motion"), {"velocity"});
    if (auto vel = motion->find("velocity"); vel != motion->end()) {
      const auto v = numbers(*vel, join(key, "motion.velocity"));
      if (v.size() != 2 && v.size() != 3) fail(join(key, "motion.velocity"), "expected 2 or 3 components");
      spec.velocity = vec_of(v);
    }
  }
  return spec;
}

json shape_to_json(const ShapeSpec& spec, int dimension) {
  json j;
  j["kind"] = std::string(to_string(spec.kind));
  json params = json::object();
  for (const auto& [name, values] : spec.params) {
    if (name == "samples") {
      json pts = json::array();
      for (std::size_t i = 0; i + 2 < values.size(); i += 3) pts.push_back({values[i], values[i + 1], values[i + 2]});
      params[name] = pts;
    } else if (kVectorParams.count(name) || values.size() != 1) {
      params[name] = values;
    } else {
      params[name] = values[0];
    }
  }
  j["params"] = params;
  if (spec.kind == ShapeKind::RbfSurface) j["basis"] = std::string(to_string(spec.basis));
  if (!spec.velocity.isZero(0.0)) j["motion"] = {{"velocity", vec_json(spec.velocity, dimension)}};
  return j;
}

Scenario parse_scenario(const json& doc) {
  check_keys(doc, "", {"name", "dimension", "path", "obstacles", "composition", "switching", "model", "sim",
                       "outputs", "window"});
  Scenario s;
  s.name = string_or(doc, "", "name", "scenario");

  // Path.
  auto pj = doc.find("path");
  if (pj == doc.end()) fail("path", "required");
  check_keys(*pj, "path", {"shape", "shapes", "k_p", "k", "gamma"});
  if (pj->contains("shape")) {
    s.path.surfaces.push_back(build_shape((*pj)["shape"], "path.shape"));
    s.path.gains = {number_or(*pj, "path", "k_p", 1.0)};
    if (pj->contains("shapes") || pj->contains("k")) fail("path", "use either shape/k_p (2D) or shapes/k (3D)");
  } else if (pj->contains("shapes")) {
    const auto& shapes = (*pj)["shapes"];
    if (!shapes.is_array() || shapes.size() != 2) fail("path.shapes", "expected two shapes");
    for (std::size_t i = 0; i < 2; ++i) {
      s.path.surfaces.push_back(build_shape(shapes[i], "path.shapes[" + std::to_string(i) + "]"));
    }
    s.path.gains = pj->contains("k") ? numbers((*pj)["k"], "path.k") : std::vector<double>{1.0, 1.0};
    if (pj->contains("k_p")) fail("path.k_p", "3D paths take gains as path.k");
  } else {
    fail("path.shape", "required");
  }
  s.path.gamma = sign_or(*pj, "path", "gamma");
  try {
    s.path.validate();
  } catch (const InvalidArgument& e) {
    fail("path", e.what());
  }
  s.dimension = s.path.dimension();
  if (doc.contains("dimension")) {
    const double d = number(doc["dimension"], "dimension");
    if (d != s.dimension) fail("dimension", "does not match the path (" + std::to_string(s.dimension) + "D)");
  }

  // Obstacles.
  if (auto oj = doc.find("obstacles"); oj != doc.end()) {
    if (!oj->is_array()) fail("obstacles", "expected a list");
    for (std::size_t i = 0; i < oj->size(); ++i) {
      const std::string key = "obstacles[" + std::to_string(i) + "]";
      const auto& o = (*oj)[i];
      check_keys(o, key, {"shape", "c", "l1", "l2", "k_r", "gamma", "l", "bypass"});
      if (!o.contains("shape")) fail(join(key, "shape"), "required");
      Obstacle obs;
      obs.surface = build_shape(o["shape"], join(key, "shape"));
      obs.c = required_number(o, key, "c");
      if (!(obs.c < 0.0)) fail(join(key, "c"), "repulsive level must be negative");
      obs.l1 = number_or(o, key, "l1", 0.1);
      obs.l2 = number_or(o, key, "l2", 0.1);
      obs.k_r = required_number(o, key, "k_r");
      obs.gamma = sign_or(o, key, "gamma");
      obs.l = number_or(o, key, "l", 1.0);
      if (o.contains("bypass")) {
        const auto v = numbers(o["bypass"], join(key, "bypass"));
        if (v.size() != 3) fail(join(key, "bypass"), "expected 3 components");
        obs.bypass = vec_of(v);
      }
      if (obs.surface.dimension() != s.dimension) fail(join(key, "shape"), "dimension differs from the path");
      try {
        obs.validate();
      } catch (const InvalidArgument& e) {
        fail(key, e.what());
      }
      s.obstacles.push_back(std::move(obs));
    }
  }

  try {
    s.composition = composition_from_string(string_or(doc, "", "composition", "normalized"));
  } catch (const InvalidArgument& e) {
    fail("composition", e.what());
  }

  // Switching.
  if (auto sj = doc.find("switching"); sj != doc.end()) {
    check_keys(*sj, "switching", {"enabled", "delta", "epsilon", "epsilon_o"});
    s.switching.enabled = boolean_or(*sj, "switching", "enabled", false);
    if (auto d = sj->find("delta"); d != sj->end() && !(d->is_string() && d->get<std::string>() == "auto")) {
      s.switching.delta = number(*d, "switching.delta");
      if (!(*s.switching.delta > 0.0)) fail("switching.delta", "must be positive");
    }
    s.switching.epsilon = number_or(*sj, "switching", "epsilon", 0.1);
    s.switching.epsilon_o = number_or(*sj, "switching", "epsilon_o", 0.2);
    if (!(s.switching.epsilon > 0.0)) fail("switching.epsilon", "must be positive");
    if (!(s.switching.epsilon_o > 0.0)) fail("switching.epsilon_o", "must be positive");
    if (s.switching.enabled && s.dimension != 2) fail("switching.enabled", "switching needs a planar scenario");
  }

  // Model.
  s.model.dimension = s.dimension;
  if (auto mj = doc.find("model"); mj != doc.end()) {
    check_keys(*mj, "model", {"kind", "s", "k_theta"});
    try {
      s.model.kind = model_kind_from_string(string_or(*mj, "model", "kind", "single-integrator"));
    } catch (const InvalidArgument& e) {
      fail("model.kind", e.what());
    }
    s.model.s = number_or(*mj, "model", "s", 1.0);
    s.model.k_theta = number_or(*mj, "model", "k_theta", 5.0);
  }
  try {
    s.model.validate();
  } catch (const InvalidArgument& e) {
    fail("model", e.what());
  }

  // Simulation.
  auto simj = doc.find("sim");
  if (simj == doc.end()) fail("sim", "required");
  check_keys(*simj, "sim", {"x0", "dt", "T"});
  s.sim.dt = number_or(*simj, "sim", "dt", 1e-3);
  s.sim.T = required_number(*simj, "sim", "T");
  if (!(s.sim.dt > 0.0)) fail("sim.dt", "must be positive");
  if (!(s.sim.T >= s.sim.dt)) fail("sim.T", "must be at least dt");
  auto xj = simj->find("x0");
  if (xj == simj->end()) fail("sim.x0", "required");
  if (!xj->is_array() || xj->empty()) fail("sim.x0", "expected a non-empty list of initial states");
  for (std::size_t i = 0; i < xj->size(); ++i) {
    const std::string key = "sim.x0[" + std::to_string(i) + "]";
    const auto v = numbers((*xj)[i], key);
    if (static_cast<int>(v.size()) != s.model.state_size()) {
      fail(key, "expected " + std::to_string(s.model.state_size()) + " values for a " +
                    std::to_string(s.dimension) + "D " + std::string(to_string(s.model.kind)) + " state");
    }
    State x(s.model.state_size());
    for (std::size_t k = 0; k < v.size(); ++k) x[static_cast<Eigen::Index>(k)] = v[k];
    s.x0.push_back(x);
  }

  // Outputs.
  if (auto oj = doc.find("outputs"); oj != doc.end()) {
    check_keys(*oj, "outputs", {"trajectory_csv", "grid", "svg", "grid_resolution"});
    s.outputs.trajectory_csv = boolean_or(*oj, "outputs", "trajectory_csv", true);
    s.outputs.grid = boolean_or(*oj, "outputs", "grid", false);
    s.outputs.svg = boolean_or(*oj, "outputs", "svg", false);
    const double res = number_or(*oj, "outputs", "grid_resolution", 101);
    if (res < 2 || res != std::floor(res)) fail("outputs.grid_resolution", "must be an integer >= 2");
    s.outputs.grid_resolution = static_cast<int>(res);
  }

  // Cross-object checks.
  FieldStack stack = s.stack();
  try {
    stack.validate();
  } catch (const InvalidArgument& e) {
    fail("obstacles", e.what());
  }

  if (auto wj = doc.find("window"); wj != doc.end()) {
    const auto w = numbers(*wj, "window");
    if (w.size() != 4 || !(w[1] > w[0]) || !(w[3] > w[2])) fail("window", "expected [x0, x1, y0, y1] with x0 < x1, y0 < y1");
    s.window = {w[0], w[1], w[2], w[3]};
  } else {
    s.window = default_window(s);
  }

  if (s.dimension == 2 && !s.obstacles.empty()) {
    const auto pts = path_points(s.path.surfaces[0], s.window);
    const bool exposed = std::any_of(pts.begin(), pts.end(), [&](const Vec& p) {
      return std::all_of(s.obstacles.begin(), s.obstacles.end(),
                         [&](const Obstacle& o) { return o.surface.eval(p) >= 0.0; });
    });
    if (!pts.empty() && !exposed) fail("obstacles", "reactive areas cover the whole desired path");
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InvalidArgument(file.string() + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InvalidArgument(file.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": parse error: " + e.what());
  }
  try {
    return parse_scenario(doc);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(file.string() + ": " + e.what());
  }
}

json to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["dimension"] = s.dimension;
  json path;
  if (s.dimension == 2) {
    path["shape"] = shape_to_json(s.path.surfaces[0].spec(), 2);
    path["k_p"] = s.path.gains[0];
  } else {
    path["shapes"] = {shape_to_json(s.path.surfaces[0].spec(), 3), shape_to_json(s.path.surfaces[1].spec(), 3)};
    path["k"] = s.path.gains;
  }
  path["gamma"] = s.path.gamma;
  j["path"] = path;
  json obstacles = json::array();
  for (const auto& o : s.obstacles) {
    json oj;
    oj["shape"] = shape_to_json(o.surface.spec(), s.dimension);
    oj["c"] = o.c;
    oj["l1"] = o.l1;
    oj["l2"] = o.l2;
    oj["k_r"] = o.k_r;
    oj["gamma"] = o.gamma;
    oj["l"] = o.l;
    if (s.dimension == 3) oj["bypass"] = vec_json(o.bypass, 3);
    obstacles.push_back(oj);
  }
  j["obstacles"] = obstacles;
  j["composition"] = std::string(to_string(s.composition));
  j["switching"] = {{"enabled", s.switching.enabled},
                    {"delta", s.switching.delta ? json(*s.switching.delta) : json("auto")},
                    {"epsilon", s.switching.epsilon},
                    {"epsilon_o", s.switching.epsilon_o}};
  j["model"] = {{"kind", std::string(to_string(s.model.kind))}, {"s", s.model.s}, {"k_theta", s.model.k_theta}};
  json x0 = json::array();
  for (const auto& x : s.x0) x0.push_back(std::vector<double>(x.data(), x.data() + x.size()));
  j["sim"] = {{"x0", x0}, {"dt", s.sim.dt}, {"T", s.sim.T}};
  j["outputs"] = {{"trajectory_csv", s.outputs.trajectory_csv},
                  {"grid", s.outputs.grid},
                  {"svg", s.outputs.svg},
                  {"grid_resolution", s.outputs.grid_resolution}};
  j["window"] = {s.window.x0, s.window.x1, s.window.y0, s.window.y1};
  return j;
}

bool RunResult::any_failed() const {
  for (const auto& r : runs) {
    for (const auto& m : r.monitors) {
      if (m.failed()) return true;
    }
  }
  return false;
}

std::vector<SwitchPlan> plan_switching(const Scenario& scenario, std::vector<std::string>& warnings) {
  std::vector<SwitchPlan> plans;
  if (!scenario.switching.enabled) return plans;
  const FieldStack stack = scenario.stack();
  for (std::size_t i = 0; i < scenario.obstacles.size(); ++i) {
    try {
      auto plan = make_switch_plan(stack, i, scenario.switching);
      for (const auto& w : plan.warnings) warnings.push_back(w);
      plans.push_back(std::move(plan));
    } catch (const ConfigError& e) {
      if (scenario.switching.delta) throw;
      warnings.push_back("obstacles[" + std::to_string(i) + "]: switching disabled: " + e.what());
    }
  }
  return plans;
}

RunResult run_scenario(const Scenario& scenario) {
  RunResult result;
  const FieldStack stack = scenario.stack();
  result.plans = plan_switching(scenario, result.warnings);
  for (const auto& w : result.warnings) spdlog::warn("{}", w);

  std::optional<DwellBound> dwell;
  for (const auto& plan : result.plans) {
    const auto b = dwell_bound(stack, plan);
    if (!dwell) dwell = b;
    dwell->d = std::min(dwell->d, b.d);
    dwell->v_m = std::max(dwell->v_m, b.v_m);
  }

  for (std::size_t i = 0; i < scenario.x0.size(); ++i) {
    spdlog::debug("{}: integrating initial condition {} of {}", scenario.name, i + 1, scenario.x0.size());
    TrajectoryRun run;
    run.trajectory = integrate(scenario.model, stack, scenario.x0[i], scenario.sim, result.plans);
    const auto& traj = run.trajectory;
    if (traj.termination != Termination::Horizon) {
      spdlog::warn("{}: trajectory {} ended early ({}): {}", scenario.name, i, to_string(traj.termination),
                   traj.message);
    }
    run.monitors.push_back(check_safety(traj, scenario.obstacles));
    if (scenario.model.kind == ModelKind::SingleIntegrator) {
      const double M = estimate_error_bound(stack, scenario.model.position(scenario.x0[i]), scenario.sim.T);
      run.monitors.push_back(check_error_bound(traj, M));
      run.monitors.push_back(check_monotone_outside(traj, stack));
    }
    run.monitors.push_back(check_penetrability(traj));
    if (dwell) run.monitors.push_back(check_dwell(traj, *dwell, scenario.sim.dt));
    result.runs.push_back(std::move(run));
  }
  return result;
}

EscapeCensus escape_census(const Scenario& scenario, int seeds_per_axis) {
  if (seeds_per_axis < 1) throw InvalidArgument("escape census: seeds per axis must be positive");
  EscapeCensus census;
  census.seeds_per_axis = seeds_per_axis;
  const FieldStack stack = scenario.stack();
  std::vector<std::string> warnings;
  const auto plans = plan_switching(scenario, warnings);
  const auto& w = scenario.window;
  const double z = scenario.dimension == 3 ? scenario.x0.front()[2] : 0.0;
  for (int j = 0; j < seeds_per_axis; ++j) {
    for (int i = 0; i < seeds_per_axis; ++i) {
      Vec p(w.x0 + w.width() * (i + 0.5) / seeds_per_axis, w.y0 + w.height() * (j + 0.5) / seeds_per_axis, z);
      const bool blocked = std::any_of(scenario.obstacles.begin(), scenario.obstacles.end(),
                                       [&](const Obstacle& o) { return o.surface.eval(p) <= o.c; });
      if (blocked) {
        ++census.skipped;
        continue;
      }
      State x0(scenario.model.state_size());
      for (int d = 0; d < scenario.dimension; ++d) x0[d] = p[d];
      if (scenario.model.kind == ModelKind::Dubins) {
        try {
          const Vec g = stack(p);
          x0[scenario.dimension] = std::atan2(g.y(), g.x());
        } catch (const SingularityError&) {
          x0[scenario.dimension] = 0.0;
        }
      }
      const auto traj = integrate(scenario.model, stack, x0, scenario.sim, plans);
      const auto verdict = check_penetrability(traj).verdict;
      if (verdict == Verdict::Fail) {
        ++census.stuck;
        census.stuck_seeds.push_back(p);
      } else {
        ++census.escaped;
        if (verdict == Verdict::Indeterminate) ++census.undecided;
      }
    }
  }
  return census;
}

json to_json(const EscapeCensus& census) {
  json seeds = json::array();
  for (const auto& p : census.stuck_seeds) seeds.push_back({p.x(), p.y()});
  return {{"seeds_per_axis", census.seeds_per_axis}, {"sampled", census.sampled()}, {"skipped", census.skipped},
          {"escaped", census.escaped},     {"stuck", census.stuck},        {"undecided", census.undecided},
          {"fraction", census.fraction()}, {"stuck_seeds", seeds}};
}

json run_report(const Scenario& scenario, const RunResult& result) {
  json j;
  j["scenario"] = scenario.name;
  j["warnings"] = result.warnings;
  json plans = json::array();
  for (const auto& p : result.plans) {
    json windows = json::array();
    for (const auto& w : p.windows) windows.push_back({{"center", vec_json(w.center, 2)}, {"radius", w.radius}});
    json pts = json::array();
    for (const auto& q : p.intersections) pts.push_back(vec_json(q, 2));
    plans.push_back({{"obstacle", p.obstacle},
                     {"delta", p.delta},
                     {"equal_level", p.equal_level},
                     {"epsilon", p.epsilon},
                     {"intersections", pts},
                     {"exit_windows", windows}});
  }
  j["switching"] = plans;
  json runs = json::array();
  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    const auto& r = result.runs[i];
    const auto& traj = r.trajectory;
    json tj;
    tj["index"] = i;
    tj["x0"] = std::vector<double>(scenario.x0[i].data(), scenario.x0[i].data() + scenario.x0[i].size());
    tj["termination"] = std::string(to_string(traj.termination));
    if (!traj.message.empty()) tj["message"] = traj.message;
    tj["samples"] = traj.samples.size();
    const auto& last = traj.samples.back();
    tj["final"] = {{"t", last.t},
                   {"state", std::vector<double>(last.state.data(), last.state.data() + last.state.size())},
                   {"phi", last.phi},
                   {"region", region_label(last.regions)}};
    json switches = json::array();
    for (const auto& e : traj.switches) {
      switches.push_back({{"t", e.t}, {"sigma", e.sigma}, {"obstacle", e.obstacle}, {"position", vec_json(e.position, 2)}});
    }
    tj["switches"] = switches;
    json monitors = json::array();
    for (const auto& m : r.monitors) monitors.push_back(to_json(m));
    tj["monitors"] = monitors;
    runs.push_back(tj);
  }
  j["trajectories"] = runs;
  j["status"] = result.any_failed() ? "fail" : "pass";
  return j;
}

}  // namespace gvf
