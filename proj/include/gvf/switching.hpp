#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gvf/blending.hpp"

namespace gvf {

struct SwitchingConfig {
  bool enabled = false;
  std::optional<double> delta;  // perturbation level; chosen automatically when empty
  double epsilon = 0.1;         // half-width of the band around the equal-weight level
  double epsilon_o = 0.2;       // requested exit-window radius
};

struct ExitWindow {
  Vec center = Vec::Zero();
  double radius = 0.0;
};

/// Switching data resolved for one obstacle.
struct SwitchPlan {
  std::size_t obstacle = 0;
  double delta = 0.0;
  double equal_level = 0.0;
  double epsilon = 0.0;
  std::vector<Vec> intersections;  // path zero set meets phi = delta
  std::vector<ExitWindow> windows;  // intersections where the path field points outward
  std::vector<std::string> warnings;

  bool in_band(double phi) const { return std::abs(phi - equal_level) <= epsilon; }
};

struct SwitchEvent {
  double t = 0.0;
  int sigma = 1;
  std::size_t obstacle = 0;
  Vec position = Vec::Zero();
};

struct SwitchState {
  int sigma = 1;
  std::size_t obstacle = 0;  // obstacle driving sigma = 2
  double last_switch_time = -std::numeric_limits<double>::infinity();
  std::vector<SwitchEvent> log;
};

/// Roots of {path phi = 0, obstacle phi = level}, found from sign changes of
/// the path function along the level curve and polished by 2D Newton.
std::vector<Vec> level_path_intersections(const Obstacle& obs, const PathSpec& path, double level,
                                          int n_samples = 720);

/// Tries |c|/8, |c|/4, |c|/2 and returns the first level whose intersection
/// set with the path is nonempty, transversal and stable under a 0.1%
/// change of the level. Throws ConfigError if none qualifies.
double choose_delta(const Obstacle& obs, const PathSpec& path);

/// gamma E grad(phi) - k_r (phi - delta) grad(phi).
Vec perturbed_reactive_field(const Obstacle& obs, double delta, const Vec& p);

/// Intersections at which the unit path field has a positive component along
/// the outward obstacle normal, with a common radius no larger than the
/// requested one, a third of the smallest pairwise distance, and small enough
/// that the outward sign holds on each window circle.
std::vector<ExitWindow> exit_windows(const Obstacle& obs, const PathSpec& path,
                                     std::span<const Vec> intersections, double epsilon_o);

SwitchPlan make_switch_plan(const FieldStack& stack, std::size_t obstacle, const SwitchingConfig& cfg);

/// Two-state automaton: 1 -> 2 when |phi_i - equal_level_i| <= epsilon for
/// some planned obstacle i; 2 -> 1 when phi_i > 0 inside one of its exit
/// windows; otherwise unchanged.
SwitchState switch_step(const SwitchState& state, const Vec& p, double t,
                        const std::vector<SwitchPlan>& plans, const FieldStack& stack);

/// sigma = 1: composite field; sigma = 2: perturbed reactive field of the
/// active obstacle.
Vec switched_field(const SwitchState& state, const FieldStack& stack,
                   const std::vector<SwitchPlan>& plans, const Vec& p, double t = 0.0);

/// Distance between the outer band edge and the reactive boundary, and the
/// largest field norm over the closed mixed area under either mode.
struct DwellBound {
  double d = 0.0;
  double v_m = 0.0;
  double min_dwell(double dt) const { return d / v_m - dt; }
};

DwellBound dwell_bound(const FieldStack& stack, const SwitchPlan& plan, int samples = 200);

}  // namespace gvf
