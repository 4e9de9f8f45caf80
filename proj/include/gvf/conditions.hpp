#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "gvf/analysis.hpp"
#include "gvf/scenario.hpp"

namespace gvf {

/// Composite field of the stack frozen at time t, as a planar field.
PlanarField composite_field(const FieldStack& stack, double t = 0.0);

/// Equilibria of the composite field in the mixed area c < phi_i < 0 of one
/// obstacle. The search window is the bounding box of its reactive boundary.
struct MixedAreaCensus {
  std::size_t obstacle = 0;
  std::vector<Equilibrium> equilibria;
  int saddles = 0;
  int others = 0;  // nodes, foci, centers
  int stable = 0;
  int degenerate = 0;
  int dropped_seeds = 0;
};

MixedAreaCensus mixed_area_census(const FieldStack& stack, std::size_t obstacle, int grid_n = 192);

/// Index of the composite field along the level curve phi_i = level. When the
/// field vanishes on that curve, the level is moved inward, then outward, by
/// 1e-3 |c|; level_used records the curve actually measured.
struct BoundaryIndex {
  double level_requested = 0.0;
  double level_used = 0.0;
  int index = 0;
};

BoundaryIndex boundary_index(const FieldStack& stack, std::size_t obstacle, double level);

struct IndexContribution {
  Vec location = Vec::Zero();
  int index = 0;
  std::string source;  // "equilibrium" or "singular point"
  std::string kind;    // equilibrium class, or the vanishing component
};

/// Boundary index compared with the sum over everything enclosed: composite
/// equilibria plus points where a component field is singular, each measured
/// on a small circle when its class does not fix the index.
struct IndexCensus {
  std::size_t obstacle = 0;
  BoundaryIndex boundary;
  std::vector<IndexContribution> inside;

  int inside_sum() const;
  bool additive() const { return inside_sum() == boundary.index; }
};

IndexCensus index_census(const FieldStack& stack, std::size_t obstacle, double level, int grid_n = 192);

struct ConditionCheck {
  std::string id;  // e.g. "composite.C1"
  Verdict verdict = Verdict::Indeterminate;
  std::string detail;
  nlohmann::json evidence = nlohmann::json::object();
};

/// Sufficient conditions for the composite field (C1-C3) and for the
/// switched field (C1-C3), each with the numbers that decided it. Planar
/// scenarios with static obstacles only; everything else is indeterminate.
struct ConditionReport {
  std::vector<ConditionCheck> checks;

  const ConditionCheck& at(std::string_view id) const;
};

ConditionReport condition_report(const Scenario& scenario);

/// Numerical checks of the geometric assumptions, reported as warnings and
/// never enforced: nonvanishing obstacle gradients on sampled reactive and
/// repulsive boundaries, a single connected equal-weight level set per planar
/// obstacle (by contour tracing), and, in 3D, surface points where the bypass
/// direction is nearly normal so the reactive field may stagnate. Moving
/// obstacles are checked at t = 0.
std::vector<std::string> geometry_warnings(const Scenario& scenario);

nlohmann::json to_json(const Equilibrium& eq);
nlohmann::json to_json(const IndexCensus& census);
nlohmann::json to_json(const ConditionReport& report);

}  // namespace gvf
