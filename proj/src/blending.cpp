#include "gvf/blending.hpp"

#include <cmath>
#include <string>

#include "gvf/vector_fields.hpp"

namespace gvf {
namespace {

constexpr double kExpFloor = -700.0;

std::string describe(const Vec& p) {
  return "(" + std::to_string(p.x()) + ", " + std::to_string(p.y()) + ", " + std::to_string(p.z()) + ")";
}

}  // namespace

BumpPair bump_pair(const Obstacle& obs) { return {obs.c, obs.l1, obs.l2}; }

BumpValues bump_values(const BumpPair& b, double phi) {
  if (phi <= b.c) return {0.0, 1.0};
  if (phi >= 0.0) return {1.0, 0.0};
  const double a1 = b.l1 / (b.c - phi);
  const double a2 = b.l2 / phi;
  const bool f1_zero = a1 < kExpFloor, f2_zero = a2 < kExpFloor;
  if (f1_zero && !f2_zero) return {0.0, 1.0};
  if (f2_zero && !f1_zero) return {1.0, 0.0};
  // f1 / (f1 + f2) written as a logistic of the exponent difference.
  return {1.0 / (1.0 + std::exp(a2 - a1)), 1.0 / (1.0 + std::exp(a1 - a2))};
}

double equal_level(const BumpPair& b) { return b.l2 * b.c / (b.l1 + b.l2); }

std::string_view to_string(Composition mode) {
  return mode == Composition::Normalized ? "normalized" : "raw";
}

Composition composition_from_string(std::string_view name) {
  if (name == "normalized") return Composition::Normalized;
  if (name == "raw") return Composition::Raw;
  throw InvalidArgument("unknown composition '" + std::string(name) + "'");
}

FieldStack::FieldStack(PathSpec path, std::vector<Obstacle> obstacles, Composition mode)
    : path_(std::move(path)), obstacles_(std::move(obstacles)), mode_(mode) {}

Vec FieldStack::path_field(const Vec& p) const { return gvf::path_field(path_, p); }

Vec FieldStack::reactive_field(std::size_t i, const Vec& p, double t) const {
  const auto& obs = obstacles_.at(i);
  if (mode_ == Composition::Raw && obs.surface.is_moving()) return reactive_field_moving(obs, p, t);
  return gvf::reactive_field(obs, p, t);
}

std::vector<BumpValues> FieldStack::weights(const Vec& p, double t) const {
  std::vector<BumpValues> w;
  w.reserve(obstacles_.size());
  for (const auto& obs : obstacles_) w.push_back(bump_values(bump_pair(obs), obs.surface.eval(p, t)));
  return w;
}

Vec FieldStack::operator()(const Vec& p, double t) const {
  const bool normalized = mode_ == Composition::Normalized;
  double path_weight = 1.0;
  Vec acc = Vec::Zero();
  for (std::size_t i = 0; i < obstacles_.size(); ++i) {
    const auto& obs = obstacles_[i];
    const BumpValues w = bump_values(bump_pair(obs), obs.surface.eval(p, t));
    path_weight *= w.zero_in;
    if (w.zero_out == 0.0) continue;
    Vec r = reactive_field(i, p, t);
    if (normalized) {
      const double n = r.norm();
      if (!(n > 0.0)) {
        throw SingularityError("reactive field of obstacle " + std::to_string(i) + " vanishes at " +
                               describe(p));
      }
      r /= n;
    }
    acc += w.zero_out * r;
  }
  if (path_weight > 0.0) {
    Vec v = path_field(p);
    if (normalized) {
      const double n = v.norm();
      if (!(n > 0.0)) throw SingularityError("path field vanishes at " + describe(p));
      v /= n;
    }
    acc += path_weight * v;
  }
  return acc;
}

bool FieldStack::has_moving_obstacles() const {
  for (const auto& obs : obstacles_) {
    if (obs.surface.is_moving()) return true;
  }
  return false;
}

void FieldStack::validate() const {
  path_.validate();
  const int dim = path_.dimension();
  for (std::size_t i = 0; i < obstacles_.size(); ++i) {
    const auto& obs = obstacles_[i];
    try {
      obs.validate();
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("obstacles[" + std::to_string(i) + "]: " + e.what());
    }
    if (obs.surface.dimension() != dim) {
      throw InvalidArgument("obstacles[" + std::to_string(i) + "]: dimension differs from the path");
    }
  }
  // Reactive areas must be pairwise disjoint: no boundary sample or center of
  // one obstacle may lie in the closed reactive area of another.
  std::vector<std::vector<Vec>> boundaries(obstacles_.size());
  for (std::size_t i = 0; i < obstacles_.size(); ++i) {
    const auto& f = obstacles_[i].surface;
    auto c = f.center();
    if (!c || !(f.eval(*c) < 0.0)) continue;
    boundaries[i] = dim == 2 ? LevelCurve(f, 0.0).sample(256) : level_surface_points(f, 0.0, 512);
    boundaries[i].push_back(*c);
  }
  for (std::size_t i = 0; i < obstacles_.size(); ++i) {
    for (std::size_t j = 0; j < obstacles_.size(); ++j) {
      if (i == j) continue;
      for (const auto& q : boundaries[i]) {
        if (obstacles_[j].surface.eval(q) <= 0.0) {
          throw InvalidArgument("obstacles[" + std::to_string(i) + "] and obstacles[" +
                                std::to_string(j) + "]: reactive areas overlap");
        }
      }
    }
  }
}

}  // namespace gvf
