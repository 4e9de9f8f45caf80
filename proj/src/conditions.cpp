#include "gvf/conditions.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gvf/export.hpp"

namespace gvf {
namespace {

using nlohmann::json;

json point_json(const Vec& p) { return json::array({p.x(), p.y()}); }

Window curve_box(const std::vector<Vec>& pts, double margin_frac) {
  Window w{INFINITY, -INFINITY, INFINITY, -INFINITY};
  for (const auto& p : pts) {
    w.x0 = std::min(w.x0, p.x());
    w.x1 = std::max(w.x1, p.x());
    w.y0 = std::min(w.y0, p.y());
    w.y1 = std::max(w.y1, p.y());
  }
  const double m = margin_frac * std::max(w.width(), w.height());
  return {w.x0 - m, w.x1 + m, w.y0 - m, w.y1 + m};
}

Window reactive_box(const Obstacle& obs, double level = 0.0) {
  return curve_box(LevelCurve(obs.surface, level).sample(256), 0.05);
}

void require_planar(const FieldStack& stack, const char* what) {
  if (stack.dimension() != 2) throw PreconditionError(std::string(what) + ": planar scenarios only");
}

// Index around an isolated point, measured on a circle that excludes the
// other listed points. Shrinks the circle when the field vanishes on it.
int small_circle_index(const PlanarField& field, const Vec& q, const std::vector<Vec>& others) {
  double r = 1e-3;
  for (const auto& o : others) {
    const double d = (o - q).norm();
    if (d > 0.0) r = std::min(r, d / 3.0);
  }
  for (int attempt = 0; attempt < 8; ++attempt, r *= 0.5) {
    try {
      return poincare_index(field, circle_curve(q, r), 256);
    } catch (const IndexUndefinedError&) {
    }
  }
  throw IndexUndefinedError("no small circle around (" + std::to_string(q.x()) + ", " + std::to_string(q.y()) +
                            ") avoids a zero of the field");
}

// A critical point of a component function is a singular point of the
// normalized composite wherever that component carries positive weight. In
// raw mode the component merely vanishes and the composite stays smooth.
bool is_singular(const FieldStack& stack, const Vec& q, std::optional<std::size_t> obstacle) {
  if (stack.mode() != Composition::Normalized) return false;
  const auto w = stack.weights(q);
  if (obstacle) return w[*obstacle].zero_out > 0.0;
  double path_weight = 1.0;
  for (const auto& b : w) path_weight *= b.zero_in;
  return path_weight > 0.0;
}

ConditionCheck indeterminate(std::string id, std::string detail) {
  ConditionCheck c;
  c.id = std::move(id);
  c.verdict = Verdict::Indeterminate;
  c.detail = std::move(detail);
  return c;
}

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::Fail || b == Verdict::Fail) return Verdict::Fail;
  if (a == Verdict::Indeterminate || b == Verdict::Indeterminate) return Verdict::Indeterminate;
  return Verdict::Pass;
}

// Critical points of the obstacle function inside its reactive area.
std::vector<Vec> reactive_singular_points(const Obstacle& obs) {
  std::vector<Vec> out;
  for (const auto& q : critical_points(obs.surface, reactive_box(obs), 160)) {
    if (obs.surface.eval(q) < 0.0) out.push_back(q);
  }
  return out;
}

// Along the flow of gamma E grad(phi) - k (phi - shift) grad(phi), |phi - shift|
// never increases, so the inset of q lies in {|phi - shift| >= |phi(q) - shift|}.
// A level set at distance `gap` from shift is avoided when |phi(q) - shift| > gap.
json singular_evidence(const HessianSign& hs, double phi, const std::string& rule, bool ok) {
  return {{"point", point_json(hs.point)},
          {"phi", phi},
          {"eigenvalues", hs.eigenvalues},
          {"eigen_verdict", std::string(to_string(hs.verdict))},
          {"rule", rule},
          {"ok", ok}};
}

ConditionCheck check_c1(const Scenario& sc, std::string id) {
  ConditionCheck out;
  out.id = std::move(id);
  const auto& path = sc.path.surfaces[0];
  const Window& w = sc.window;

  // Path singular set: bounded, and no initial condition in its inset.
  const auto pss = critical_points(path, w, 160);
  const double border = 1e-2 * std::max(w.width(), w.height());
  bool bounded = true;
  for (const auto& p : pss) {
    if (p.x() - w.x0 < border || w.x1 - p.x() < border || p.y() - w.y0 < border || w.y1 - p.y() < border) {
      bounded = false;
    }
  }
  json pss_ev = json::array();
  bool x0_ok = true;
  const auto path_signs = hessian_sign_report(path, pss);
  for (const auto& hs : path_signs) {
    const double phi_p = path.eval(hs.point);
    json starts = json::array();
    for (std::size_t k = 0; k < sc.x0.size(); ++k) {
      const Vec x = sc.model.position(sc.x0[k]);
      bool ok;
      std::string rule;
      if (hs.verdict == HessianVerdict::AllNegative) {
        ok = (x - hs.point).norm() > 1e-9;
        rule = "inset is the point itself";
      } else {
        ok = std::abs(path.eval(x)) < std::abs(phi_p);
        rule = "|phi(x0)| < |phi(p)|";
      }
      if (!ok) {
        x0_ok = false;
        starts.push_back({{"x0", k}, {"rule", rule}});
      }
    }
    json ev = singular_evidence(hs, phi_p, "", starts.empty());
    ev.erase("rule");
    ev["unresolved_starts"] = starts;
    pss_ev.push_back(ev);
  }

  // Obstacle singular sets stay off the repulsive boundaries.
  bool rss_ok = true;
  json rss_ev = json::array();
  for (std::size_t i = 0; i < sc.obstacles.size(); ++i) {
    const auto& obs = sc.obstacles[i];
    const auto pts = reactive_singular_points(obs);
    for (const auto& hs : hessian_sign_report(obs.surface, pts)) {
      const double phi = obs.surface.eval(hs.point);
      bool ok;
      std::string rule;
      if (hs.verdict == HessianVerdict::AllNegative) {
        ok = std::abs(phi - obs.c) > 1e-9;
        rule = "inset is the point itself";
      } else {
        ok = std::abs(phi) > std::abs(obs.c);
        rule = "level separation |phi(q)| > |c|";
      }
      rss_ok = rss_ok && ok;
      json ev = singular_evidence(hs, phi, rule, ok);
      ev["obstacle"] = i;
      rss_ev.push_back(ev);
    }
  }

  out.evidence = {{"path_singular_points", pss_ev},
                  {"path_singular_set_bounded", bounded},
                  {"obstacle_singular_points", rss_ev},
                  {"window", {w.x0, w.x1, w.y0, w.y1}}};
  if (bounded && x0_ok && rss_ok) {
    out.verdict = Verdict::Pass;
    out.detail = "singular insets avoid the repulsive boundaries and the initial conditions";
  } else {
    out.verdict = Verdict::Indeterminate;
    std::vector<std::string> why;
    if (!bounded) why.push_back("path critical points reach the window border");
    if (!x0_ok) why.push_back("an initial condition may lie in the inset of a path critical point");
    if (!rss_ok) why.push_back("an obstacle critical point is neither isolated nor level-separated");
    for (std::size_t k = 0; k < why.size(); ++k) out.detail += (k ? "; " : "") + why[k];
  }
  return out;
}

ConditionCheck check_composite_c2(const Scenario& sc, const FieldStack& stack) {
  ConditionCheck out;
  out.id = "composite.C2";
  const auto& path = sc.path.surfaces[0];
  const auto pss = critical_points(path, sc.window, 160);
  json inside = json::array();
  for (const auto& p : pss) {
    for (std::size_t i = 0; i < sc.obstacles.size(); ++i) {
      if (sc.obstacles[i].surface.eval(p) < 0.0) inside.push_back({{"point", point_json(p)}, {"obstacle", i}});
    }
  }
  bool single = true;
  json census = json::array();
  for (std::size_t i = 0; i < sc.obstacles.size(); ++i) {
    const auto c = mixed_area_census(stack, i);
    single = single && c.equilibria.size() == 1;
    json eqs = json::array();
    for (const auto& e : c.equilibria) eqs.push_back(to_json(e));
    census.push_back({{"obstacle", i},
                      {"equilibria", eqs},
                      {"saddles", c.saddles},
                      {"others", c.others},
                      {"stable", c.stable}});
  }
  out.evidence = {{"path_singular_points_in_reactive_areas", inside}, {"mixed_area_census", census}};
  if (inside.empty() && single) {
    out.verdict = Verdict::Pass;
    out.detail = "each mixed area holds exactly one equilibrium and no path critical point is enclosed";
  } else {
    out.verdict = Verdict::Fail;
    out.detail = !inside.empty() ? "a path critical point lies inside a reactive area"
                                 : "a mixed area does not hold exactly one equilibrium";
  }
  return out;
}

ConditionCheck check_composite_c3(const Scenario& sc, const FieldStack& stack) {
  ConditionCheck out;
  out.id = "composite.C3";
  RobotModel model;
  model.dimension = 2;
  SimOptions opts;
  opts.dt = 1e-2;
  opts.T = 60.0;
  Verdict verdict = Verdict::Pass;
  json per = json::array();
  for (std::size_t i = 0; i < sc.obstacles.size(); ++i) {
    const auto& obs = sc.obstacles[i];
    json ev = {{"obstacle", i}};
    bool found = false;
    for (const auto& seed : LevelCurve(obs.surface, obs.c).sample(8)) {
      State x0(2);
      x0 << seed.x(), seed.y();
      const auto traj = integrate(model, stack, x0, opts);
      for (const auto& s : traj.samples) {
        if (obs.surface.eval(model.position(s.state)) >= 0.0) {
          ev["seed"] = point_json(seed);
          ev["t_reactive_boundary"] = s.t;
          found = true;
          break;
        }
      }
      if (found) break;
    }
    ev["reached"] = found;
    if (!found) verdict = combine(verdict, Verdict::Indeterminate);
    per.push_back(ev);
  }
  out.verdict = verdict;
  out.evidence = {{"obstacles", per}, {"dt", opts.dt}, {"horizon", opts.T}, {"seeds_per_obstacle", 8}};
  out.detail = verdict == Verdict::Pass
                   ? "a trajectory from every repulsive boundary reaches the reactive boundary"
                   : "no sampled trajectory from some repulsive boundary reached its reactive boundary";
  return out;
}

ConditionCheck check_switching_c2(const Scenario& sc, const FieldStack& stack) {
  ConditionCheck out;
  out.id = "switching.C2";
  SwitchingConfig cfg = sc.switching;
  cfg.enabled = true;
  Verdict verdict = Verdict::Pass;
  json per = json::array();
  for (std::size_t i = 0; i < sc.obstacles.size(); ++i) {
    const auto& obs = sc.obstacles[i];
    json ev = {{"obstacle", i}};
    SwitchPlan plan;
    try {
      plan = make_switch_plan(stack, i, cfg);
    } catch (const ConfigError& e) {
      ev["error"] = e.what();
      verdict = combine(verdict, Verdict::Indeterminate);
      per.push_back(ev);
      continue;
    }
    ev["delta"] = plan.delta;
    ev["equal_level"] = plan.equal_level;
    ev["epsilon"] = plan.epsilon;
    const double gap = plan.delta - plan.equal_level + plan.epsilon;
    json pts = json::array();
    const auto rss = reactive_singular_points(obs);
    for (const auto& hs : hessian_sign_report(obs.surface, rss, plan.delta)) {
      const double phi = obs.surface.eval(hs.point);
      bool ok;
      std::string rule;
      if (hs.verdict == HessianVerdict::AllNegative) {
        ok = !plan.in_band(phi);
        rule = "inset is the point itself";
      } else {
        ok = std::abs(phi - plan.delta) > gap;
        rule = "level separation |phi(q) - delta| > delta - equal_level + epsilon";
      }
      if (!ok) verdict = combine(verdict, Verdict::Indeterminate);
      pts.push_back(singular_evidence(hs, phi, rule, ok));
    }
    ev["singular_points"] = pts;
    per.push_back(ev);
  }
  out.verdict = verdict;
  out.evidence = {{"obstacles", per}, {"switching_enabled", sc.switching.enabled}};
  out.detail = verdict == Verdict::Pass ? "perturbed singular insets avoid every switching band"
                                        : "some perturbed singular inset could not be separated from its band";
  return out;
}

ConditionCheck check_switching_c3(const Scenario& sc) {
  ConditionCheck out;
  out.id = "switching.C3";
  json bad = json::array();
  for (std::size_t k = 0; k < sc.x0.size(); ++k) {
    const Vec x = sc.model.position(sc.x0[k]);
    for (std::size_t i = 0; i < sc.obstacles.size(); ++i) {
      const double phi = sc.obstacles[i].surface.eval(x);
      if (phi < 0.0) bad.push_back({{"x0", k}, {"obstacle", i}, {"phi", phi}});
    }
  }
  out.evidence = {{"starts_in_reactive_areas", bad}, {"initial_sigma", 1}};
  out.verdict = bad.empty() ? Verdict::Pass : Verdict::Fail;
  out.detail = bad.empty() ? "every initial condition starts outside the reactive areas with sigma = 1"
                           : "an initial condition starts inside a reactive area";
  return out;
}

}  // namespace

PlanarField composite_field(const FieldStack& stack, double t) {
  return [stack, t](const Vec& p) { return stack(p, t); };
}

MixedAreaCensus mixed_area_census(const FieldStack& stack, std::size_t obstacle, int grid_n) {
  require_planar(stack, "mixed_area_census");
  const auto& obs = stack.obstacles().at(obstacle);
  MixedAreaCensus out;
  out.obstacle = obstacle;
  const auto search = find_equilibria(composite_field(stack), reactive_box(obs), grid_n);
  out.dropped_seeds = search.dropped;
  for (const auto& e : search.equilibria) {
    const double phi = obs.surface.eval(e.location);
    if (!(phi > obs.c && phi < 0.0)) continue;
    if (e.kind == EquilibriumClass::Saddle) {
      ++out.saddles;
    } else if (e.kind == EquilibriumClass::Degenerate) {
      ++out.degenerate;
    } else {
      ++out.others;
    }
    if (e.stable) ++out.stable;
    out.equilibria.push_back(e);
  }
  return out;
}

BoundaryIndex boundary_index(const FieldStack& stack, std::size_t obstacle, double level) {
  require_planar(stack, "boundary_index");
  const auto& obs = stack.obstacles().at(obstacle);
  const auto field = composite_field(stack);
  const double eta = 1e-3 * std::abs(obs.c);
  BoundaryIndex out;
  out.level_requested = level;
  std::string last;
  for (double l : {level, level - eta, level + eta}) {
    try {
      const LevelCurve curve(obs.surface, l);
      out.index = poincare_index(field, [&curve](double s) { return curve(s); }, 1024);
      out.level_used = l;
      if (l != level) spdlog::debug("boundary_index: level {} undefined, measured at {}", level, l);
      return out;
    } catch (const IndexUndefinedError& e) {
      last = e.what();
    }
  }
  throw IndexUndefinedError("obstacles[" + std::to_string(obstacle) + "]: " + last);
}

int IndexCensus::inside_sum() const {
  int s = 0;
  for (const auto& c : inside) s += c.index;
  return s;
}

IndexCensus index_census(const FieldStack& stack, std::size_t obstacle, double level, int grid_n) {
  require_planar(stack, "index_census");
  const auto& obs = stack.obstacles().at(obstacle);
  const auto field = composite_field(stack);
  IndexCensus out;
  out.obstacle = obstacle;
  out.boundary = boundary_index(stack, obstacle, level);
  const double L = out.boundary.level_used;
  const Window box = curve_box(LevelCurve(obs.surface, L).sample(256), 0.02);

  std::vector<Vec> points;
  struct Candidate {
    Vec q;
    std::string what;
    std::optional<std::size_t> obstacle;
  };
  std::vector<Candidate> singular;
  const auto search = find_equilibria(field, box, grid_n);
  for (const auto& e : search.equilibria) {
    if (obs.surface.eval(e.location) < L) points.push_back(e.location);
  }
  for (const auto& q : critical_points(obs.surface, box, grid_n)) {
    singular.push_back({q, "reactive field of obstacle " + std::to_string(obstacle), obstacle});
  }
  for (const auto& q : critical_points(stack.path().surfaces[0], box, grid_n)) {
    singular.push_back({q, "path field", std::nullopt});
  }
  std::erase_if(singular, [&](const Candidate& s) {
    const Vec& q = s.q;
    if (!(obs.surface.eval(q) < L) || !is_singular(stack, q, s.obstacle)) return true;
    return std::any_of(points.begin(), points.end(), [&](const Vec& p) { return (p - q).norm() < 1e-6; });
  });
  std::vector<Vec> all = points;
  for (const auto& s : singular) all.push_back(s.q);

  for (const auto& e : search.equilibria) {
    if (!(obs.surface.eval(e.location) < L)) continue;
    IndexContribution c;
    c.location = e.location;
    c.source = "equilibrium";
    c.kind = std::string(to_string(e.kind));
    c.index = e.index ? *e.index : small_circle_index(field, e.location, all);
    out.inside.push_back(c);
  }
  for (const auto& s : singular) {
    IndexContribution c;
    c.location = s.q;
    c.source = "singular point";
    c.kind = s.what;
    c.index = small_circle_index(field, s.q, all);
    out.inside.push_back(c);
  }
  return out;
}

const ConditionCheck& ConditionReport::at(std::string_view id) const {
  for (const auto& c : checks) {
    if (c.id == id) return c;
  }
  throw InvalidArgument("no condition check named " + std::string(id));
}

ConditionReport condition_report(const Scenario& sc) {
  ConditionReport report;
  const char* ids[] = {"composite.C1", "composite.C2", "composite.C3",
                       "switching.C1", "switching.C2", "switching.C3"};
  const FieldStack stack = sc.stack();
  std::string unsupported;
  if (sc.dimension != 2) unsupported = "conditions are only checked for planar scenarios";
  if (stack.has_moving_obstacles()) unsupported = "conditions are only checked for static obstacles";
  if (sc.obstacles.empty()) unsupported = "scenario has no obstacles";
  if (!unsupported.empty()) {
    for (const char* id : ids) report.checks.push_back(indeterminate(id, unsupported));
    return report;
  }
  auto guarded = [&](const char* id, auto&& fn) {
    try {
      report.checks.push_back(fn());
    } catch (const Error& e) {
      report.checks.push_back(indeterminate(id, e.what()));
    }
  };
  guarded("composite.C1", [&] { return check_c1(sc, "composite.C1"); });
  guarded("composite.C2", [&] { return check_composite_c2(sc, stack); });
  guarded("composite.C3", [&] { return check_composite_c3(sc, stack); });
  report.checks.push_back(report.checks[0]);
  report.checks.back().id = "switching.C1";
  guarded("switching.C2", [&] { return check_switching_c2(sc, stack); });
  guarded("switching.C3", [&] { return check_switching_c3(sc); });
  return report;
}

namespace {

std::string fmt_point(const Vec& p, int dim) {
  std::string s = "(" + std::to_string(p.x()) + ", " + std::to_string(p.y());
  if (dim == 3) s += ", " + std::to_string(p.z());
  return s + ")";
}

// Connected components of a segment soup; endpoints closer than tol are joined.
int contour_components(const std::vector<Segment>& segs, double tol) {
  std::vector<std::size_t> parent(segs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      const bool touch = (segs[i].a - segs[j].a).norm() < tol || (segs[i].a - segs[j].b).norm() < tol ||
                         (segs[i].b - segs[j].a).norm() < tol || (segs[i].b - segs[j].b).norm() < tol;
      if (touch) parent[find(i)] = find(j);
    }
  }
  int n = 0;
  for (std::size_t i = 0; i < segs.size(); ++i) n += find(i) == i ? 1 : 0;
  return n;
}

}  // namespace

std::vector<std::string> geometry_warnings(const Scenario& sc) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < sc.obstacles.size(); ++i) {
    const auto& obs = sc.obstacles[i];
    const auto& f = obs.surface;
    const std::string key = "obstacles[" + std::to_string(i) + "]: ";
    if (sc.dimension == 3) {
      double worst = INFINITY;
      Vec arg = Vec::Zero();
      for (const auto& q : level_surface_points(f, 0.0, 4000)) {
        const Vec g = f.gradient(q);
        const double sine = g.cross(obs.bypass).norm() / (g.norm() * obs.bypass.norm());
        if (sine < worst) {
          worst = sine;
          arg = q;
        }
      }
      if (worst < 0.05) {
        out.push_back(key + "bypass direction is nearly normal to the reactive surface near " + fmt_point(arg, 3) +
                      "; the reactive field may stagnate there");
      }
      continue;
    }
    const auto c = f.center();
    if (!c || !(f.eval(*c) < obs.c)) {
      out.push_back(key + "no star center inside the repulsive boundary; boundary checks skipped");
      continue;
    }
    for (double level : {0.0, obs.c}) {
      for (const auto& q : LevelCurve(f, level).sample(720)) {
        if (f.gradient(q).norm() < 1e-8) {
          out.push_back(key + "gradient vanishes near " + fmt_point(q, 2) + " on the " +
                        (level == 0.0 ? "reactive" : "repulsive") + " boundary");
          break;
        }
      }
    }
    const Window box = reactive_box(obs);
    const auto segs = marching_squares([&](double x, double y) { return f.eval(planar(x, y)); }, box, 256,
                                       equal_level(bump_pair(obs)));
    const int parts = contour_components(segs, 1e-9 * std::max(box.width(), box.height()));
    if (parts != 1) {
      out.push_back(key + "equal-weight level set has " + std::to_string(parts) + " connected components");
    }
  }
  return out;
}

json to_json(const Equilibrium& eq) {
  json ev = json::array();
  for (const auto& l : eq.eigenvalues) ev.push_back({l.real(), l.imag()});
  return {{"location", point_json(eq.location)},
          {"eigenvalues", ev},
          {"class", std::string(to_string(eq.kind))},
          {"index", eq.index ? json(*eq.index) : json(nullptr)},
          {"stable", eq.stable},
          {"residual", eq.residual}};
}

json to_json(const IndexCensus& census) {
  json inside = json::array();
  for (const auto& c : census.inside) {
    inside.push_back({{"location", point_json(c.location)}, {"index", c.index}, {"source", c.source}, {"kind", c.kind}});
  }
  return {{"obstacle", census.obstacle},
          {"level_requested", census.boundary.level_requested},
          {"level_used", census.boundary.level_used},
          {"boundary_index", census.boundary.index},
          {"inside", inside},
          {"inside_sum", census.inside_sum()},
          {"additive", census.additive()}};
}

json to_json(const ConditionReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"id", c.id},
                      {"verdict", std::string(to_string(c.verdict))},
                      {"pass", c.verdict == Verdict::Indeterminate ? json(nullptr) : json(c.verdict == Verdict::Pass)},
                      {"detail", c.detail},
                      {"evidence", c.evidence}});
  }
  return {{"checks", checks}};
}

}  // namespace gvf
