#include "gvf/sim.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace gvf {
namespace {

using Guidance = std::function<Vec(const Vec& p, double t, const SwitchState& sw)>;
using Labeler = std::function<void(Sample& sample, const Vec& p)>;

Trajectory run(const RobotModel& model, const Guidance& guidance, const State& x0, const SimOptions& opts,
               const Labeler& label, const std::function<SwitchState(const SwitchState&, const Vec&, double)>& step_switch) {
  model.validate();
  if (!(opts.dt > 0.0)) throw InvalidArgument("sim: dt must be positive");
  if (!(opts.T >= opts.dt)) throw InvalidArgument("sim: T must be at least dt");
  if (x0.size() != model.state_size()) {
    throw InvalidArgument("sim: initial state has " + std::to_string(x0.size()) + " components, model expects " +
                          std::to_string(model.state_size()));
  }
  if (!x0.allFinite()) throw InvalidArgument("sim: initial state must be finite");

  Trajectory traj;
  traj.model = model;
  const auto steps = static_cast<long>(std::floor(opts.T / opts.dt + 1e-9));
  traj.samples.reserve(static_cast<std::size_t>(steps) + 1);
  SwitchState sw;
  State x = x0;
  const double dt = opts.dt;

  auto deriv = [&](const State& s, double t) {
    return model_derivative(model, s, guidance(model.position(s), t, sw));
  };

  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    const Vec p = model.position(x);
    if (step_switch && k < steps) sw = step_switch(sw, p, t);
    Sample sample;
    sample.t = t;
    sample.state = x;
    sample.sigma = sw.sigma;
    label(sample, p);
    try {
      sample.field_norm = guidance(p, t, sw).norm();
    } catch (const SingularityError& e) {
      sample.field_norm = std::numeric_limits<double>::quiet_NaN();
    }
    traj.samples.push_back(std::move(sample));
    if (k >= steps) break;

    try {
      const State k1 = deriv(x, t);
      const State k2 = deriv(x + 0.5 * dt * k1, t + 0.5 * dt);
      const State k3 = deriv(x + 0.5 * dt * k2, t + 0.5 * dt);
      const State k4 = deriv(x + dt * k3, t + dt);
      x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const SingularityError& e) {
      traj.termination = Termination::Singularity;
      traj.message = e.what();
      break;
    }
    if (!x.allFinite() || model.position(x).norm() > opts.divergence_norm) {
      traj.termination = Termination::Divergence;
      traj.message = "state norm exceeded " + std::to_string(opts.divergence_norm);
      break;
    }
  }
  traj.switches = sw.log;
  return traj;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::SingleIntegrator ? "single-integrator" : "dubins";
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "single-integrator") return ModelKind::SingleIntegrator;
  if (name == "dubins") return ModelKind::Dubins;
  throw InvalidArgument("unknown model kind '" + std::string(name) + "'");
}

std::string_view to_string(Termination reason) {
  switch (reason) {
    case Termination::Horizon: return "horizon";
    case Termination::Singularity: return "singularity";
    case Termination::Divergence: return "divergence";
  }
  return "unknown";
}

Vec RobotModel::position(const State& x) const {
  return dimension == 2 ? planar(x[0], x[1]) : Vec(x[0], x[1], x[2]);
}

void RobotModel::validate() const {
  if (dimension != 2 && dimension != 3) throw InvalidArgument("model: dimension must be 2 or 3");
  if (kind == ModelKind::Dubins) {
    if (!(s > 0.0)) throw InvalidArgument("model.s must be positive");
    if (!(k_theta > 0.0)) throw InvalidArgument("model.k_theta must be positive");
  }
}

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

State model_derivative(const RobotModel& model, const State& x, const Vec& guidance) {
  State d(model.state_size());
  if (model.kind == ModelKind::SingleIntegrator) {
    for (int i = 0; i < model.dimension; ++i) d[i] = guidance[i];
    return d;
  }
  const double gxy = std::hypot(guidance.x(), guidance.y());
  if (!(gxy > 0.0)) throw SingularityError("dubins: planar guidance vanishes");
  const double th = x[model.dimension];
  const double th_d = std::atan2(guidance.y(), guidance.x());
  d[0] = model.s * std::cos(th);
  d[1] = model.s * std::sin(th);
  if (model.dimension == 3) d[2] = std::clamp(model.s * guidance.z() / gxy, -model.s, model.s);
  d[model.dimension] = model.k_theta * wrap_angle(th_d - th);
  return d;
}

std::string region_label(const std::vector<Region>& regions) {
  for (std::size_t i = 0; i < regions.size(); ++i) {
    if (regions[i] == Region::Repulsive) return "repulsive:" + std::to_string(i);
    if (regions[i] == Region::Mixed) return "mixed:" + std::to_string(i);
  }
  return "free";
}

Trajectory integrate(const RobotModel& model, const FieldProvider& field, const State& x0, const SimOptions& opts,
                     const std::function<double(const Vec&)>& error) {
  Guidance g = [&field](const Vec& p, double t, const SwitchState&) { return field(p, t); };
  Labeler label = [&error](Sample& s, const Vec& p) {
    s.phi = error ? error(p) : std::numeric_limits<double>::quiet_NaN();
  };
  return run(model, g, x0, opts, label, {});
}

Trajectory integrate(const RobotModel& model, const FieldStack& stack, const State& x0, const SimOptions& opts,
                     const std::vector<SwitchPlan>& plans) {
  if (model.dimension != stack.dimension()) throw InvalidArgument("sim: model and scenario dimensions differ");
  Guidance g = [&](const Vec& p, double t, const SwitchState& sw) {
    return plans.empty() ? stack(p, t) : switched_field(sw, stack, plans, p, t);
  };
  Labeler label = [&stack](Sample& s, const Vec& p) {
    s.regions.reserve(stack.obstacles().size());
    for (const auto& obs : stack.obstacles()) s.regions.push_back(region_of(obs, p, s.t));
    s.phi = stack.path().error(p);
  };
  std::function<SwitchState(const SwitchState&, const Vec&, double)> step;
  if (!plans.empty()) {
    step = [&](const SwitchState& sw, const Vec& p, double t) { return switch_step(sw, p, t, plans, stack); };
  }
  return run(model, g, x0, opts, label, step);
}

}  // namespace gvf
