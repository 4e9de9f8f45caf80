#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gvf {

// Points and vectors live in R^3. Planar quantities keep z = 0 throughout, so
// 2D and 3D scenarios share one fixed-size, allocation-free representation.
using Vec = Eigen::Vector3d;
using Mat = Eigen::Matrix3d;
using Vec2 = Eigen::Vector2d;

inline Vec planar(double x, double y) { return Vec(x, y, 0.0); }

/// 90 degree counterclockwise rotation of the xy components: E(a, b) = (-b, a).
inline Vec rotate90(const Vec& v) { return Vec(-v.y(), v.x(), 0.0); }

/// Axis-aligned planar box [x0, x1] x [y0, y1].
struct Window {
  double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;

  bool contains(const Vec& p) const { return p.x() >= x0 && p.x() <= x1 && p.y() >= y0 && p.y() <= y1; }
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A guiding field (or one of its components) vanished where a direction was
/// required, e.g. normalizing at a gradient critical point.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Shape parameters or gains violate their documented constraints.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// RBF Gram system singular or too ill-conditioned to fit.
class FitError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Poincare index requested on a curve where the field vanishes.
class IndexUndefinedError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A configuration (switching level, exit windows) could not be chosen
/// automatically and needs manual input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gvf
