#pragma once

#include <string_view>
#include <vector>

#include "gvf/implicit.hpp"

namespace gvf {

/// Smooth weights fading the path field in and the reactive field out across
/// the mixed band c < phi < 0.
struct BumpPair {
  double c = -0.5;
  double l1 = 0.1;
  double l2 = 0.1;
};

struct BumpValues {
  double zero_in = 1.0;
  double zero_out = 0.0;
};

BumpPair bump_pair(const Obstacle& obs);

/// zero_in = f1 / (f1 + f2), zero_out = f2 / (f1 + f2) with
/// f1 = exp(l1 / (c - phi)) for phi > c, f2 = exp(l2 / phi) for phi < 0.
BumpValues bump_values(const BumpPair& b, double phi);

/// Level l2 c / (l1 + l2) on which both weights equal 1/2.
double equal_level(const BumpPair& b);

enum class Composition {
  Normalized,  // unit path and reactive fields
  Raw,         // unnormalized fields; moving obstacles use the motion-compensated reactive field
};

std::string_view to_string(Composition mode);
Composition composition_from_string(std::string_view name);

/// Path field plus obstacle fields blended by per-obstacle bump weights:
///   (prod_i zero_in_i) path + sum_i zero_out_i reactive_i
/// Component fields with zero weight are never evaluated.
class FieldStack {
 public:
  FieldStack() = default;
  FieldStack(PathSpec path, std::vector<Obstacle> obstacles = {},
             Composition mode = Composition::Normalized);

  /// Composite field. Throws SingularityError naming the vanishing component.
  Vec operator()(const Vec& p, double t = 0.0) const;

  Vec path_field(const Vec& p) const;
  /// Reactive field of obstacle i as blended in the current mode, unnormalized.
  Vec reactive_field(std::size_t i, const Vec& p, double t = 0.0) const;
  std::vector<BumpValues> weights(const Vec& p, double t = 0.0) const;

  const PathSpec& path() const { return path_; }
  const std::vector<Obstacle>& obstacles() const { return obstacles_; }
  Composition mode() const { return mode_; }
  int dimension() const { return path_.dimension(); }
  bool has_moving_obstacles() const;

  /// Validates path and obstacles, and checks by boundary sampling that
  /// reactive areas are pairwise disjoint at t = 0. Throws InvalidArgument.
  void validate() const;

 private:
  PathSpec path_;
  std::vector<Obstacle> obstacles_;
  Composition mode_ = Composition::Normalized;
};

}  // namespace gvf
