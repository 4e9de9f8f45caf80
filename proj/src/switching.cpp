#include "gvf/switching.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

#include "gvf/vector_fields.hpp"

namespace gvf {
namespace {

LevelCurve level_curve(const Obstacle& obs, double level) {
  try {
    return LevelCurve(obs.surface, level);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("switching needs a star-shaped obstacle: ") + e.what());
  }
}

// Sine of the angle between the path and obstacle gradients.
double transversality(const PathSpec& path, const Obstacle& obs, const Vec& q) {
  const Vec a = path.surfaces[0].gradient(q), b = obs.surface.gradient(q);
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::abs(a.x() * b.y() - a.y() * b.x()) / (na * nb);
}

std::optional<Vec> unit_path_field(const PathSpec& path, const Vec& p) {
  const Vec v = path_field(path, p);
  const double n = v.norm();
  if (!(n > 0.0)) return std::nullopt;
  return Vec(v / n);
}

bool points_outward(const PathSpec& path, const Obstacle& obs, const Vec& p) {
  auto v = unit_path_field(path, p);
  const Vec g = obs.surface.gradient(p);
  if (!v || g.norm() == 0.0) return false;
  return v->dot(g / g.norm()) > 0.0;
}

}  // namespace

std::vector<Vec> level_path_intersections(const Obstacle& obs, const PathSpec& path, double level,
                                          int n_samples) {
  const LevelCurve curve = level_curve(obs, level);
  const auto& fp = path.surfaces.at(0);
  std::vector<double> s(static_cast<std::size_t>(n_samples) + 1);
  std::vector<double> v(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = static_cast<double>(i) / n_samples;
    v[i] = i + 1 == s.size() ? v[0] : fp.eval(curve(s[i]));
  }
  std::vector<Vec> roots;
  auto add = [&](const Vec& q) {
    for (const auto& r : roots) {
      if ((r - q).norm() < 1e-8) return;
    }
    roots.push_back(q);
  };
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (v[i] == 0.0) {
      add(curve(s[i]));
      continue;
    }
    if (v[i] * v[i + 1] >= 0.0) continue;
    double lo = s[i], hi = s[i + 1], vlo = v[i];
    for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double vm = fp.eval(curve(mid));
      if ((vm < 0.0) == (vlo < 0.0)) {
        lo = mid;
        vlo = vm;
      } else {
        hi = mid;
      }
    }
    Vec q = curve(0.5 * (lo + hi));
    // Newton polish on (phi_path, phi_obs - level).
    for (int it = 0; it < 8; ++it) {
      const Vec ga = fp.gradient(q), gb = obs.surface.gradient(q);
      Eigen::Matrix2d J;
      J << ga.x(), ga.y(), gb.x(), gb.y();
      if (std::abs(J.determinant()) < 1e-12 * std::max(1.0, J.norm() * J.norm())) break;
      const Eigen::Vector2d r(fp.eval(q), obs.surface.eval(q) - level);
      const Eigen::Vector2d step = J.fullPivLu().solve(-r);
      if (step.norm() > 1e-3) break;
      q += planar(step.x(), step.y());
      if (step.norm() < 1e-15) break;
    }
    add(q);
  }
  return roots;
}

double choose_delta(const Obstacle& obs, const PathSpec& path) {
  const double base = std::abs(obs.c);
  std::string reasons;
  const auto zero_curve = level_curve(obs, 0.0).sample(512);
  for (double frac : {0.125, 0.25, 0.5}) {
    const double delta = frac * base;
    const auto delta_curve = level_curve(obs, delta).sample(512);
    if (!(min_distance(zero_curve, delta_curve) > 1e-9)) {
      reasons += " delta=" + std::to_string(delta) + ": touches the reactive boundary;";
      continue;
    }
    const auto roots = level_path_intersections(obs, path, delta);
    if (roots.empty()) {
      reasons += " delta=" + std::to_string(delta) + ": no intersection with the path;";
      continue;
    }
    const bool transversal = std::all_of(roots.begin(), roots.end(), [&](const Vec& q) {
      return transversality(path, obs, q) > 1e-3;
    });
    const auto below = level_path_intersections(obs, path, delta * (1.0 - 1e-3)).size();
    const auto above = level_path_intersections(obs, path, delta * (1.0 + 1e-3)).size();
    if (!transversal || below != roots.size() || above != roots.size()) {
      reasons += " delta=" + std::to_string(delta) + ": path tangency;";
      continue;
    }
    return delta;
  }
  throw ConfigError("no automatic switching level qualifies (" + reasons.substr(1) +
                    " ) set switching.delta manually");
}

Vec perturbed_reactive_field(const Obstacle& obs, double delta, const Vec& p) {
  return reactive_field_2d(obs, p, 0.0, delta);
}

std::vector<ExitWindow> exit_windows(const Obstacle& obs, const PathSpec& path,
                                     std::span<const Vec> intersections, double epsilon_o) {
  std::vector<Vec> outward;
  for (const auto& q : intersections) {
    if (points_outward(path, obs, q)) outward.push_back(q);
  }
  if (outward.empty()) return {};
  double radius = epsilon_o;
  for (std::size_t i = 0; i < outward.size(); ++i) {
    for (std::size_t j = i + 1; j < outward.size(); ++j) {
      radius = std::min(radius, (outward[i] - outward[j]).norm() / 3.0);
    }
  }
  auto sign_holds = [&](double r) {
    for (const auto& q : outward) {
      for (int k = 0; k < 16; ++k) {
        const double th = 2.0 * std::numbers::pi * k / 16;
        if (!points_outward(path, obs, q + r * planar(std::cos(th), std::sin(th)))) return false;
      }
    }
    return true;
  };
  int halvings = 0;
  while (!sign_holds(radius)) {
    radius *= 0.5;
    if (++halvings > 40) throw ConfigError("exit windows: outward direction does not hold near an exit point");
  }
  std::vector<ExitWindow> windows;
  for (const auto& q : outward) windows.push_back({q, radius});
  return windows;
}

SwitchPlan make_switch_plan(const FieldStack& stack, std::size_t obstacle, const SwitchingConfig& cfg) {
  const auto& obs = stack.obstacles().at(obstacle);
  const std::string tag = "obstacles[" + std::to_string(obstacle) + "]: ";
  if (stack.dimension() != 2) throw ConfigError(tag + "switching is only available for planar scenarios");
  if (obs.surface.is_moving()) throw ConfigError(tag + "switching is only available for static obstacles");
  if (!(cfg.epsilon > 0.0)) throw ConfigError("switching.epsilon must be positive");
  if (!(cfg.epsilon_o > 0.0)) throw ConfigError("switching.epsilon_o must be positive");

  SwitchPlan plan;
  plan.obstacle = obstacle;
  plan.equal_level = equal_level(bump_pair(obs));
  plan.epsilon = cfg.epsilon;
  if (!(plan.equal_level + cfg.epsilon < 0.0) || !(plan.equal_level - cfg.epsilon > obs.c)) {
    throw ConfigError(tag + "switching band leaves the mixed area; reduce switching.epsilon");
  }
  if (cfg.delta) {
    if (!(*cfg.delta > 0.0)) throw ConfigError("switching.delta must be positive");
    plan.delta = *cfg.delta;
  } else {
    plan.delta = choose_delta(obs, stack.path());
  }
  plan.intersections = level_path_intersections(obs, stack.path(), plan.delta);
  plan.windows = exit_windows(obs, stack.path(), plan.intersections, cfg.epsilon_o);
  if (plan.windows.empty()) {
    plan.warnings.push_back(tag + "no exit window; once switched, the perturbed reactive field is kept");
  }
  return plan;
}

SwitchState switch_step(const SwitchState& state, const Vec& p, double t,
                        const std::vector<SwitchPlan>& plans, const FieldStack& stack) {
  SwitchState next = state;
  if (state.sigma == 1) {
    for (const auto& plan : plans) {
      if (!plan.in_band(stack.obstacles()[plan.obstacle].surface.eval(p, t))) continue;
      next.sigma = 2;
      next.obstacle = plan.obstacle;
      next.last_switch_time = t;
      next.log.push_back({t, 2, plan.obstacle, p});
      break;
    }
    return next;
  }
  for (const auto& plan : plans) {
    if (plan.obstacle != state.obstacle) continue;
    if (!(stack.obstacles()[plan.obstacle].surface.eval(p, t) > 0.0)) break;
    const bool inside = std::any_of(plan.windows.begin(), plan.windows.end(), [&](const ExitWindow& w) {
      return (p - w.center).norm() <= w.radius;
    });
    if (inside) {
      next.sigma = 1;
      next.last_switch_time = t;
      next.log.push_back({t, 1, plan.obstacle, p});
    }
    break;
  }
  return next;
}

Vec switched_field(const SwitchState& state, const FieldStack& stack, const std::vector<SwitchPlan>& plans,
                   const Vec& p, double t) {
  if (state.sigma == 1) return stack(p, t);
  for (const auto& plan : plans) {
    if (plan.obstacle == state.obstacle) {
      return perturbed_reactive_field(stack.obstacles()[plan.obstacle], plan.delta, p);
    }
  }
  throw PreconditionError("switched_field: no switching plan for the active obstacle");
}

DwellBound dwell_bound(const FieldStack& stack, const SwitchPlan& plan, int samples) {
  const auto& obs = stack.obstacles().at(plan.obstacle);
  DwellBound out;
  const auto reactive = LevelCurve(obs.surface, 0.0).sample(720);
  const auto band_edge = LevelCurve(obs.surface, plan.equal_level + plan.epsilon).sample(720);
  out.d = min_distance(reactive, band_edge);

  Window box{INFINITY, -INFINITY, INFINITY, -INFINITY};
  for (const auto& q : reactive) {
    box.x0 = std::min(box.x0, q.x());
    box.x1 = std::max(box.x1, q.x());
    box.y0 = std::min(box.y0, q.y());
    box.y1 = std::max(box.y1, q.y());
  }
  auto visit = [&](const Vec& p) {
    try {
      out.v_m = std::max(out.v_m, stack(p).norm());
    } catch (const SingularityError&) {
    }
    out.v_m = std::max(out.v_m, perturbed_reactive_field(obs, plan.delta, p).norm());
  };
  for (int j = 0; j < samples; ++j) {
    for (int i = 0; i < samples; ++i) {
      const Vec p = planar(box.x0 + box.width() * i / (samples - 1), box.y0 + box.height() * j / (samples - 1));
      const double phi = obs.surface.eval(p);
      if (phi >= obs.c && phi <= 0.0) visit(p);
    }
  }
  for (const auto& q : reactive) visit(q);
  for (const auto& q : LevelCurve(obs.surface, obs.c).sample(720)) visit(q);
  return out;
}

}  // namespace gvf
