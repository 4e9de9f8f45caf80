#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <string_view>

#include "gvf/sim.hpp"

namespace gvf {

enum class Verdict { Pass, Fail, Indeterminate };

std::string_view to_string(Verdict verdict);

struct MonitorReport {
  std::string objective;
  Verdict verdict = Verdict::Indeterminate;
  double margin = 0.0;               // signed; negative means violated
  std::optional<double> t_violation;  // first violating sample, if any
  nlohmann::json params = nlohmann::json::object();
  std::string detail;

  bool passed() const { return verdict == Verdict::Pass; }
  bool failed() const { return verdict == Verdict::Fail; }
};

/// {objective, pass, verdict, margin, t_violation, params, detail}; pass is
/// null for indeterminate reports and non-finite margins are null.
nlohmann::json to_json(const MonitorReport& report);

/// No sample after t = 0 lies in a closed repulsive area. A start inside a
/// repulsive area is exempt for that obstacle; it must leave and not return.
/// margin = min over checked samples of phi_i - c_i.
MonitorReport check_safety(const Trajectory& traj, const std::vector<Obstacle>& obstacles);

/// 1.05 max(|e(x0)|, max |e| over each closed reactive area), where e is the
/// path-following error. Area maxima come from 10^4 rejection samples per
/// obstacle refined by compass search, plus a dense boundary scan (refined
/// along the curve parameter in 2D). Moving obstacles are sampled at 21
/// instants of [0, horizon].
double estimate_error_bound(const FieldStack& stack, const Vec& x0, double horizon = 0.0);

/// All |phi| <= M. margin = M - max |phi|.
MonitorReport check_error_bound(const Trajectory& traj, double M);

/// On every maximal run of samples outside all reactive areas with sigma = 1,
/// the error decreases from sample to sample (slack 1e-9; samples with error
/// below 1e-6 are skipped). The error is |phi| in 2D and (k1 phi1^2 +
/// k2 phi2^2) / 2 in 3D. Only single-integrator runs are checked.
MonitorReport check_monotone_outside(const Trajectory& traj, const FieldStack& stack);

/// Every maximal run inside a reactive area ends with an exit sample. A run
/// cut off by the horizon is indeterminate, or a failure when the trajectory
/// has stalled there (final field norm below 1e-4) or hit a singularity.
/// margin = longest time spent in a reactive area.
MonitorReport check_penetrability(const Trajectory& traj);

/// Consecutive switches are at least d / v_m - dt apart.
MonitorReport check_dwell(const Trajectory& traj, const DwellBound& bound, double dt);

enum class LyapunovLaw { Static, Moving, Noisy };

struct LyapunovParams {
  double rho_b = 0.0;    // noise bound (noisy law)
  double epsilon = 0.0;  // ISS margin (noisy law)
  double rel_tol = 1e-2;
};

/// V = phi^2 / 2 along a trajectory driven by the obstacle's reactive field
/// only. Static: central-difference dV/dt matches -k_r phi^2 |grad phi|^2 /
/// |reactive field| (normalized flow). Moving: V(t) <= V(0) e^(-2 l t)(1 + tol).
/// Noisy: terminal V <= rho_b^2 / (2 (2 l - 2 eps - 1)) (1 + 0.1).
MonitorReport check_lyapunov(const Trajectory& traj, const Obstacle& obs, LyapunovLaw law,
                             const LyapunovParams& params = {});

}  // namespace gvf
