#include "gvf/monitors.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gvf/vector_fields.hpp"

namespace gvf {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

struct Box {
  Vec lo = Vec::Constant(kInf);
  Vec hi = Vec::Constant(-kInf);
  void add(const Vec& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
};

std::optional<Box> reactive_box(const Obstacle& obs, double t) {
  auto c = obs.surface.center(t);
  if (!c || !(obs.surface.eval(*c, t) < 0.0)) return std::nullopt;
  const auto pts = obs.surface.dimension() == 2 ? LevelCurve(obs.surface, 0.0, t).sample(256)
                                                : level_surface_points(obs.surface, 0.0, 1000, t);
  Box box;
  for (const auto& p : pts) box.add(p);
  const Vec pad = 0.01 * (box.hi - box.lo);
  box.lo -= pad;
  box.hi += pad;
  return box;
}

double path_error_abs(const PathSpec& path, const Vec& p) { return std::abs(path.error(p)); }

MonitorReport make_report(std::string objective) {
  MonitorReport r;
  r.objective = std::move(objective);
  return r;
}

}  // namespace

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

nlohmann::json to_json(const MonitorReport& report) {
  nlohmann::json j;
  j["objective"] = report.objective;
  j["pass"] = report.verdict == Verdict::Indeterminate ? nlohmann::json() : nlohmann::json(report.passed());
  j["verdict"] = to_string(report.verdict);
  j["margin"] = finite_or_null(report.margin);
  j["t_violation"] = report.t_violation ? nlohmann::json(*report.t_violation) : nlohmann::json();
  j["params"] = report.params;
  if (!report.detail.empty()) j["detail"] = report.detail;
  return j;
}

MonitorReport check_safety(const Trajectory& traj, const std::vector<Obstacle>& obstacles) {
  auto r = make_report("safety");
  r.margin = kInf;
  bool indeterminate = false;
  std::vector<std::size_t> exempt;
  for (std::size_t i = 0; i < obstacles.size() && !traj.samples.empty(); ++i) {
    const auto& obs = obstacles[i];
    const bool starts_inside = obs.surface.eval(traj.position(0), 0.0) <= obs.c;
    if (starts_inside) exempt.push_back(i);
    bool exited = !starts_inside;
    for (std::size_t k = 1; k < traj.samples.size(); ++k) {
      const double t = traj.samples[k].t;
      const double gap = obs.surface.eval(traj.position(k), t) - obs.c;
      if (!exited) {
        if (gap > 0.0) exited = true;
        else continue;
      }
      r.margin = std::min(r.margin, gap);
      if (gap <= 0.0) {
        if (!r.t_violation || t < *r.t_violation) r.t_violation = t;
        r.detail = "sample at t=" + std::to_string(t) + " inside the repulsive area of obstacle " +
                   std::to_string(i) + (starts_inside ? " after leaving it" : "");
        break;
      }
    }
    if (starts_inside && !exited) {
      indeterminate = true;
      r.detail = "start inside the repulsive area of obstacle " + std::to_string(i) + " and no exit before the horizon";
    }
  }
  r.params["exempt_obstacles"] = exempt;
  r.verdict = r.t_violation ? Verdict::Fail : (indeterminate ? Verdict::Indeterminate : Verdict::Pass);
  return r;
}

double estimate_error_bound(const FieldStack& stack, const Vec& x0, double horizon) {
  double best = path_error_abs(stack.path(), x0);
  const int dim = stack.dimension();
  std::mt19937_64 rng(0x5eed);
  for (std::size_t i = 0; i < stack.obstacles().size(); ++i) {
    const auto& obs = stack.obstacles()[i];
    std::vector<double> times{0.0};
    if (obs.surface.is_moving() && horizon > 0.0) {
      for (int k = 1; k <= 20; ++k) times.push_back(horizon * k / 20.0);
    }
    for (double t : times) {
      auto box = reactive_box(obs, t);
      if (!box) {
        spdlog::warn("error bound: obstacle {} has no star center; its reactive area is not sampled", i);
        continue;
      }
      std::uniform_real_distribution<double> u(0.0, 1.0);
      double area_best = -1.0;
      Vec arg = Vec::Zero();
      for (int n = 0; n < 10000; ++n) {
        Vec p = Vec::Zero();
        for (int d = 0; d < dim; ++d) p[d] = box->lo[d] + u(rng) * (box->hi[d] - box->lo[d]);
        if (obs.surface.eval(p, t) > 0.0) continue;
        const double e = path_error_abs(stack.path(), p);
        if (e > area_best) {
          area_best = e;
          arg = p;
        }
      }
      if (area_best < 0.0) continue;
      // Compass search for a local maximum inside the closed reactive area.
      double step = 0.01 * (box->hi - box->lo).norm();
      while (step > 1e-7) {
        bool improved = false;
        for (int d = 0; d < dim && !improved; ++d) {
          for (double sgn : {1.0, -1.0}) {
            Vec q = arg;
            q[d] += sgn * step;
            if (obs.surface.eval(q, t) > 0.0) continue;
            const double e = path_error_abs(stack.path(), q);
            if (e > area_best) {
              area_best = e;
              arg = q;
              improved = true;
              break;
            }
          }
        }
        if (!improved) step *= 0.5;
      }
      best = std::max(best, area_best);
      // Maxima of |e| usually sit on the boundary, where axis moves stall.
      if (dim == 2) {
        const LevelCurve curve(obs.surface, 0.0, t);
        const int n = 4096;
        int arg_k = 0;
        double edge_best = -1.0;
        for (int k = 0; k < n; ++k) {
          const double e = path_error_abs(stack.path(), curve(static_cast<double>(k) / n));
          if (e > edge_best) {
            edge_best = e;
            arg_k = k;
          }
        }
        double lo = static_cast<double>(arg_k - 1) / n, hi = static_cast<double>(arg_k + 1) / n;
        auto at = [&](double s) { return path_error_abs(stack.path(), curve(s - std::floor(s))); };
        for (int it = 0; it < 60; ++it) {
          const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
          if (at(m1) < at(m2)) lo = m1;
          else hi = m2;
        }
        best = std::max({best, edge_best, at(0.5 * (lo + hi))});
      } else {
        for (const auto& q : level_surface_points(obs.surface, 0.0, 4000, t)) {
          best = std::max(best, path_error_abs(stack.path(), q));
        }
      }
    }
  }
  return 1.05 * best;
}

MonitorReport check_error_bound(const Trajectory& traj, double M) {
  auto r = make_report("error-bound");
  double worst = 0.0;
  for (const auto& s : traj.samples) {
    const double e = std::abs(s.phi);
    worst = std::max(worst, e);
    if (e > M && !r.t_violation) r.t_violation = s.t;
  }
  r.margin = M - worst;
  r.params["M"] = M;
  r.params["max_error"] = worst;
  r.verdict = r.t_violation ? Verdict::Fail : Verdict::Pass;
  return r;
}

MonitorReport check_monotone_outside(const Trajectory& traj, const FieldStack& stack) {
  auto r = make_report("monotone-outside");
  if (traj.model.kind != ModelKind::SingleIntegrator) {
    r.verdict = Verdict::Indeterminate;
    r.margin = std::numeric_limits<double>::quiet_NaN();
    r.detail = "only single-integrator runs are checked";
    return r;
  }
  const auto& path = stack.path();
  auto error = [&](std::size_t k) {
    const Vec p = traj.position(k);
    if (path.surfaces.size() == 1) return std::abs(path.surfaces[0].eval(p));
    double v = 0.0;
    for (std::size_t i = 0; i < path.surfaces.size(); ++i) {
      const double phi = path.surfaces[i].eval(p);
      v += 0.5 * path.gains[i] * phi * phi;
    }
    return v;
  };
  auto outside = [&](std::size_t k) {
    const auto& s = traj.samples[k];
    return s.sigma == 1 && std::all_of(s.regions.begin(), s.regions.end(),
                                       [](Region g) { return g == Region::NonReactive; });
  };
  r.margin = kInf;
  int pairs = 0;
  for (std::size_t k = 0; k + 1 < traj.samples.size(); ++k) {
    if (!outside(k) || !outside(k + 1)) continue;
    const double a = error(k), b = error(k + 1);
    if (a < 1e-6) continue;
    ++pairs;
    r.margin = std::min(r.margin, a - b);
    if (b > a + 1e-9) {
      r.t_violation = traj.samples[k + 1].t;
      r.detail = "error increased outside the reactive areas at t=" + std::to_string(traj.samples[k + 1].t);
      break;
    }
  }
  r.params["checked_pairs"] = pairs;
  r.params["slack"] = 1e-9;
  r.verdict = r.t_violation ? Verdict::Fail : Verdict::Pass;
  return r;
}

MonitorReport check_penetrability(const Trajectory& traj) {
  auto r = make_report("penetrability");
  auto inside = [&](const Sample& s) {
    return std::any_of(s.regions.begin(), s.regions.end(), [](Region g) { return g != Region::NonReactive; });
  };
  double longest = 0.0;
  int runs = 0;
  bool in_run = false;
  double run_start = 0.0;
  bool open_at_end = false;
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const auto& s = traj.samples[k];
    if (inside(s)) {
      if (!in_run) {
        in_run = true;
        run_start = s.t;
        ++runs;
      }
      if (k + 1 == traj.samples.size()) {
        open_at_end = true;
        longest = std::max(longest, s.t - run_start);
      }
    } else if (in_run) {
      longest = std::max(longest, s.t - run_start);
      in_run = false;
    }
  }
  r.margin = longest;
  r.params["runs"] = runs;
  r.params["longest_run"] = longest;
  if (!open_at_end) {
    r.verdict = Verdict::Pass;
    return r;
  }
  const auto& last = traj.samples.back();
  r.params["final_field_norm"] = finite_or_null(last.field_norm);
  if (traj.termination == Termination::Singularity) {
    r.verdict = Verdict::Fail;
    r.t_violation = last.t;
    r.detail = "hit a field singularity inside a reactive area: " + traj.message;
  } else if (last.field_norm < 1e-4) {
    r.verdict = Verdict::Fail;
    r.t_violation = last.t;
    r.detail = "stuck at an equilibrium inside a reactive area";
  } else {
    r.verdict = Verdict::Indeterminate;
    r.detail = "still inside a reactive area at the horizon";
  }
  return r;
}

MonitorReport check_dwell(const Trajectory& traj, const DwellBound& bound, double dt) {
  auto r = make_report("dwell");
  const double required = bound.min_dwell(dt);
  double min_gap = kInf;
  for (std::size_t i = 1; i < traj.switches.size(); ++i) {
    const double gap = traj.switches[i].t - traj.switches[i - 1].t;
    if (gap < min_gap) {
      min_gap = gap;
      if (gap < required) r.t_violation = traj.switches[i].t;
    }
  }
  const double horizon = traj.samples.empty() ? 0.0 : traj.samples.back().t;
  const double max_switches = std::ceil(horizon * bound.v_m / bound.d) + 1.0;
  r.margin = min_gap - required;
  r.params["d"] = bound.d;
  r.params["v_m"] = bound.v_m;
  r.params["required_gap"] = required;
  r.params["min_gap"] = finite_or_null(min_gap);
  r.params["switches"] = traj.switches.size();
  r.params["max_switches"] = max_switches;
  const bool zeno = static_cast<double>(traj.switches.size()) > max_switches;
  if (zeno) r.detail = "more switches than the dwell bound allows";
  r.verdict = (r.t_violation || zeno) ? Verdict::Fail : Verdict::Pass;
  return r;
}

MonitorReport check_lyapunov(const Trajectory& traj, const Obstacle& obs, LyapunovLaw law,
                             const LyapunovParams& params) {
  if (traj.model.kind != ModelKind::SingleIntegrator) {
    throw PreconditionError("check_lyapunov: needs a single-integrator trajectory");
  }
  if (law == LyapunovLaw::Static && obs.surface.is_moving()) {
    throw PreconditionError("check_lyapunov: the static law needs a static obstacle");
  }
  if (traj.samples.size() < 3) throw PreconditionError("check_lyapunov: trajectory too short");
  auto V = [&](std::size_t k) {
    const double phi = obs.surface.eval(traj.position(k), traj.samples[k].t);
    return 0.5 * phi * phi;
  };
  const auto n = traj.samples.size();
  MonitorReport r;
  switch (law) {
    case LyapunovLaw::Static: {
      r.objective = "lyapunov-static";
      const double dt = traj.samples[1].t - traj.samples[0].t;
      double worst = 0.0;
      int checked = 0;
      for (std::size_t k = 1; k + 1 < n; ++k) {
        const Vec p = traj.position(k);
        const double phi = obs.surface.eval(p);
        if (std::abs(phi) < 1e-6) continue;
        const Vec g = obs.surface.gradient(p);
        const double field = reactive_field(obs, p).norm();
        if (!(field > 0.0)) continue;
        const double expected = -obs.k_r * phi * phi * g.squaredNorm() / field;
        const double measured = (V(k + 1) - V(k - 1)) / (2.0 * dt);
        const double rel = std::abs(measured - expected) / std::abs(expected);
        ++checked;
        if (rel > worst) {
          worst = rel;
          if (rel > params.rel_tol && !r.t_violation) r.t_violation = traj.samples[k].t;
        }
      }
      r.margin = params.rel_tol - worst;
      r.params["max_relative_error"] = worst;
      r.params["checked"] = checked;
      r.verdict = r.t_violation ? Verdict::Fail : Verdict::Pass;
      break;
    }
    case LyapunovLaw::Moving: {
      r.objective = "lyapunov-moving";
      const double v0 = V(0);
      const double floor = 1e-24;
      r.margin = kInf;
      for (std::size_t k = 1; k < n; ++k) {
        const double envelope = v0 * std::exp(-2.0 * obs.l * traj.samples[k].t) * (1.0 + params.rel_tol) + floor;
        const double v = V(k);
        r.margin = std::min(r.margin, envelope - v);
        if ((v > envelope || v > V(k - 1) * (1.0 + 1e-9) + floor) && !r.t_violation) {
          r.t_violation = traj.samples[k].t;
        }
      }
      r.params["V0"] = v0;
      r.params["l"] = obs.l;
      r.verdict = r.t_violation ? Verdict::Fail : Verdict::Pass;
      break;
    }
    case LyapunovLaw::Noisy: {
      r.objective = "lyapunov-noisy";
      const double denom = 2.0 * obs.l - 2.0 * params.epsilon - 1.0;
      if (!(denom > 0.0)) throw PreconditionError("check_lyapunov: the noisy law needs l > 1/2 + epsilon");
      const double bound = params.rho_b * params.rho_b / (2.0 * denom) * 1.1;
      const double terminal = V(n - 1);
      r.margin = bound - terminal;
      r.params["bound"] = bound;
      r.params["terminal_V"] = terminal;
      r.params["rho_b"] = params.rho_b;
      r.params["epsilon"] = params.epsilon;
      if (terminal > bound) r.t_violation = traj.samples.back().t;
      r.verdict = r.t_violation ? Verdict::Fail : Verdict::Pass;
      break;
    }
  }
  return r;
}

}  // namespace gvf
