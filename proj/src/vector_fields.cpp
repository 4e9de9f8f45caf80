#include "gvf/vector_fields.hpp"

#include <sstream>

namespace gvf {
namespace {

std::string describe(const Vec& p) {
  std::ostringstream os;
  os << "(" << p.x() << ", " << p.y() << ", " << p.z() << ")";
  return os.str();
}

}  // namespace

Vec normalize(const Vec& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw SingularityError("cannot normalize a zero vector");
  return v / n;
}

Vec path_field_2d(const PathSpec& path, const Vec& p) {
  const auto& f = path.surfaces.at(0);
  const double phi = f.eval(p);
  const Vec g = f.gradient(p);
  return static_cast<double>(path.gamma) * rotate90(g) - path.gains.at(0) * phi * g;
}

Vec path_field_3d(const PathSpec& path, const Vec& p) {
  const auto& f1 = path.surfaces.at(0);
  const auto& f2 = path.surfaces.at(1);
  const Vec g1 = f1.gradient(p), g2 = f2.gradient(p);
  return g1.cross(g2) - path.gains.at(0) * f1.eval(p) * g1 - path.gains.at(1) * f2.eval(p) * g2;
}

Vec path_field(const PathSpec& path, const Vec& p) {
  return path.surfaces.size() == 1 ? path_field_2d(path, p) : path_field_3d(path, p);
}

Vec reactive_field_2d(const Obstacle& obs, const Vec& p, double t, double shift) {
  const double phi = obs.surface.eval(p, t) - shift;
  const Vec g = obs.surface.gradient(p, t);
  return static_cast<double>(obs.gamma) * rotate90(g) - obs.k_r * phi * g;
}

Vec reactive_field_3d(const Obstacle& obs, const Vec& p, double t) {
  const double phi = obs.surface.eval(p, t);
  const Vec g = obs.surface.gradient(p, t);
  return g.cross(obs.bypass) - obs.k_r * phi * g;
}

Vec reactive_field(const Obstacle& obs, const Vec& p, double t) {
  return obs.surface.dimension() == 2 ? reactive_field_2d(obs, p, t) : reactive_field_3d(obs, p, t);
}

Vec reactive_field_moving(const Obstacle& obs, const Vec& p, double t, double rho) {
  const double phi = obs.surface.eval(p, t);
  const Vec g = obs.surface.gradient(p, t);
  const double g2 = g.squaredNorm();
  if (!(g2 > 0.0)) {
    throw SingularityError("moving reactive field: obstacle gradient vanishes at " + describe(p));
  }
  const Vec tangent = obs.surface.dimension() == 2 ? Vec(static_cast<double>(obs.gamma) * rotate90(g))
                                                   : Vec(g.cross(obs.bypass));
  const double dphi_dt = obs.surface.time_derivative(p, t);
  return tangent - obs.k_r * phi * g + ((-dphi_dt + rho - obs.l * phi) / g2) * g;
}

}  // namespace gvf
