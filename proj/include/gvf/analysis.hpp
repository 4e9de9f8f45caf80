#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gvf/implicit.hpp"

namespace gvf {

/// Autonomous planar field evaluated at points with z = 0.
using PlanarField = std::function<Vec(const Vec&)>;

/// Closed curve sampled by s in [0, 1).
using ClosedCurve = std::function<Vec(double)>;

enum class EquilibriumClass { Node, Focus, Center, Saddle, Degenerate };

std::string_view to_string(EquilibriumClass kind);

struct Equilibrium {
  Vec location = Vec::Zero();
  std::complex<double> eigenvalues[2];
  EquilibriumClass kind = EquilibriumClass::Degenerate;
  std::optional<int> index;  // +1 node/focus/center, -1 saddle, none if degenerate
  bool stable = false;       // both eigenvalues have negative real part
  double residual = 0.0;
};

struct EquilibriumSearch {
  std::vector<Equilibrium> equilibria;  // sorted by (x, y)
  int seeds = 0;
  int dropped = 0;  // seeds whose polishing did not converge
};

/// Seeds are grid cells over the window in which both field components take
/// both signs at the corners; each is polished by Levenberg-Marquardt damped
/// Newton iteration. Roots within 10 tol of each other are merged.
EquilibriumSearch find_equilibria(const PlanarField& field, const Window& window, int grid_n = 128,
                                  double tol = 1e-10);

/// Central-difference Jacobian with step h.
Eigen::Matrix2d jacobian(const PlanarField& field, const Vec& p, double h = 1e-5);
/// Fourth-order central-difference Jacobian with step h.
Eigen::Matrix2d jacobian4(const PlanarField& field, const Vec& p, double h = 1e-3);

/// Throws PreconditionError if |field(point)| >= tol.
Equilibrium classify_equilibrium(const PlanarField& field, const Vec& point, double tol = 1e-8);

/// Winding number of the field direction along the curve. Increments larger
/// than pi/2 are refined by bisection. Throws IndexUndefinedError if the field
/// vanishes (or is singular) on the curve and ConvergenceError past 2^20 samples.
int poincare_index(const PlanarField& field, const ClosedCurve& curve, int n_samples = 512);

ClosedCurve circle_curve(const Vec& center, double radius);

enum class HessianVerdict { AllNegative, AtLeastOneNegative, Indeterminate };

std::string_view to_string(HessianVerdict verdict);

struct HessianSign {
  Vec point = Vec::Zero();
  std::vector<double> eigenvalues;  // of (phi(q) - shift) H(q), ascending
  HessianVerdict verdict = HessianVerdict::Indeterminate;
};

/// Eigen-sign summary of (phi(q) - shift) H_phi(q) at each point.
std::vector<HessianSign> hessian_sign_report(const ImplicitFunction& f, std::span<const Vec> points,
                                             double shift = 0.0);

/// Critical points of a planar implicit function inside the window.
std::vector<Vec> critical_points(const ImplicitFunction& f, const Window& window, int grid_n = 128);

}  // namespace gvf
