#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "gvf/switching.hpp"

namespace gvf {

/// Integrator state: position, followed by the heading for Dubins models.
using State = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;

enum class ModelKind { SingleIntegrator, Dubins };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

struct RobotModel {
  ModelKind kind = ModelKind::SingleIntegrator;
  int dimension = 2;
  double s = 1.0;        // Dubins forward speed
  double k_theta = 5.0;  // Dubins heading gain

  int state_size() const { return dimension + (kind == ModelKind::Dubins ? 1 : 0); }
  Vec position(const State& x) const;
  void validate() const;
};

/// Single integrator: the guidance itself. Dubins 2D: (s cos th, s sin th,
/// k_theta wrap(th_d - th)) with th_d the planar guidance angle. Dubins 3D adds
/// a vertical rate s g_z / |g_xy| saturated to [-s, s].
/// Throws SingularityError for a Dubins model with zero planar guidance.
State model_derivative(const RobotModel& model, const State& x, const Vec& guidance);

/// Angle wrapped into (-pi, pi].
double wrap_angle(double a);

enum class Termination { Horizon, Singularity, Divergence };

std::string_view to_string(Termination reason);

struct Sample {
  double t = 0.0;
  State state;
  int sigma = 1;
  std::vector<Region> regions;  // one per obstacle
  double phi = 0.0;             // path-following error
  double field_norm = 0.0;      // norm of the active guidance at the sample
};

struct Trajectory {
  RobotModel model;
  std::vector<Sample> samples;
  std::vector<SwitchEvent> switches;
  Termination termination = Termination::Horizon;
  std::string message;  // details for early termination

  Vec position(std::size_t k) const { return model.position(samples[k].state); }
};

/// Region label for CSV output: "free", "mixed:i" or "repulsive:i" for the
/// first obstacle whose reactive area contains the sample.
std::string region_label(const std::vector<Region>& regions);

using FieldProvider = std::function<Vec(const Vec& p, double t)>;

struct SimOptions {
  double dt = 1e-3;
  double T = 10.0;
  double divergence_norm = 1e6;
};

/// Fixed-step RK4 under an arbitrary field. The recorded phi is error(p) when
/// given, NaN otherwise.
Trajectory integrate(const RobotModel& model, const FieldProvider& field, const State& x0,
                     const SimOptions& opts, const std::function<double(const Vec&)>& error = {});

/// Fixed-step RK4 under the composite field of the stack, or under the
/// switched field when plans are given. The switch automaton runs once at the
/// top of each step; sigma is frozen within the step.
Trajectory integrate(const RobotModel& model, const FieldStack& stack, const State& x0,
                     const SimOptions& opts, const std::vector<SwitchPlan>& plans = {});

}  // namespace gvf
