#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gvf/types.hpp"

namespace gvf {

enum class ShapeKind {
  Circle,
  RotatedEllipse,
  Cassini,
  Sinusoid,
  QuarticBlob,
  Plane,
  Sphere,
  RbfSurface,
  Custom,
};

std::string_view to_string(ShapeKind kind);
/// Parses the scenario spelling ("circle", "rotated-ellipse", ...).
ShapeKind shape_kind_from_string(std::string_view name);

/// Radial functions available for RBF surface fitting.
enum class RadialBasis {
  LogQuadratic,  // f(r) = r^2 ln(r + 1)
  Cubic,         // f(r) = r^3
};

std::string_view to_string(RadialBasis basis);
RadialBasis radial_basis_from_string(std::string_view name);

/// Shape parameters by name. Scalars are stored as one-element vectors.
using ParamMap = std::map<std::string, std::vector<double>>;

/// Everything needed to rebuild an ImplicitFunction. Parameters per kind:
///
///   circle           center[2] = 0, radius                 x'^2 + y'^2 - R^2
///   rotated-ellipse  center[2] = 0, a, b, beta = 0         rotated x'^2/a^2 + y'^2/b^2 - 1
///   cassini          center[2] = 0, f, k                   |p - c - f e1|^2 |p - c + f e1|^2 - k
///   sinusoid-curve   amplitude = 1, frequency = 1,
///                    phase = 0, offset = 0                 y - offset - A sin(w x + phase)
///   quartic-blob     center[2] = 0, a = 2, b = 3, d = 2    a x'^4 + a y'^4 - b x'^2 y'^2 - d
///   plane            normal[2|3], offset = 0               n . p - offset
///   sphere           center[3] = 0, radius                 |p - c|^2 - R^2
///   rbf-surface      samples[3N]                           -1 + sum_k w_k f(|p - q_k|)
///
/// A nonzero velocity translates the shape: phi(p, t) = phi_static(p - v t).
struct ShapeSpec {
  ShapeKind kind = ShapeKind::Circle;
  ParamMap params;
  RadialBasis basis = RadialBasis::LogQuadratic;
  Vec velocity = Vec::Zero();

  bool operator==(const ShapeSpec& other) const;
};

/// Static part of an implicit function. Implementations without closed-form
/// derivatives inherit the finite-difference defaults.
class Shape {
 public:
  explicit Shape(int dimension) : dimension_(dimension) {}
  virtual ~Shape() = default;

  virtual double value(const Vec& p) const = 0;
  virtual Vec gradient(const Vec& p) const;
  virtual Mat hessian(const Vec& p) const;
  virtual bool analytic() const { return false; }
  /// A point from which every level set below the reactive level is
  /// star-shaped, when the shape has one.
  virtual std::optional<Vec> center() const { return std::nullopt; }

  int dimension() const { return dimension_; }

 private:
  int dimension_;
};

/// Scalar field phi(p, t) whose level sets describe paths and obstacle
/// boundaries. Immutable after construction; copies share the shape.
class ImplicitFunction {
 public:
  ImplicitFunction() = default;
  ImplicitFunction(std::shared_ptr<const Shape> shape, ShapeSpec spec);

  double eval(const Vec& p, double t = 0.0) const;
  Vec gradient(const Vec& p, double t = 0.0) const;
  Mat hessian(const Vec& p, double t = 0.0) const;
  /// Partial derivative in t at fixed p.
  double time_derivative(const Vec& p, double t = 0.0) const;

  Vec offset(double t) const { return spec_.velocity * t; }
  bool is_moving() const { return !spec_.velocity.isZero(0.0); }
  int dimension() const { return shape_->dimension(); }
  bool analytic() const { return shape_->analytic(); }
  ShapeKind kind() const { return spec_.kind; }
  const ShapeSpec& spec() const { return spec_; }
  /// Star center translated to time t.
  std::optional<Vec> center(double t = 0.0) const;
  const Shape& shape() const { return *shape_; }
  const std::shared_ptr<const Shape>& shape_ptr() const { return shape_; }
  explicit operator bool() const { return static_cast<bool>(shape_); }

 private:
  std::shared_ptr<const Shape> shape_;
  ShapeSpec spec_;
};

/// Builds an implicit function from its spec. Throws InvalidArgument on
/// missing or out-of-range parameters and FitError for unfittable RBF samples.
ImplicitFunction make_shape(const ShapeSpec& spec);

/// Wraps an arbitrary static function; derivatives use central differences.
ImplicitFunction make_custom(std::function<double(const Vec&)> value, int dimension,
                             std::optional<Vec> center = std::nullopt,
                             const Vec& velocity = Vec::Zero());

struct RbfFit {
  ImplicitFunction function;
  Eigen::VectorXd weights;
  double rcond = 0.0;  // reciprocal condition estimate of the Gram matrix
};

/// Fits phi(q) = -1 + sum_k w_k f(|q - q_k|) with phi(q_k) = 0 for all samples.
RbfFit fit_rbf_surface(std::span<const Vec> samples,
                       RadialBasis basis = RadialBasis::LogQuadratic);

double radial_value(RadialBasis basis, double r);

// Central differences over the first `dimension` coordinates. The gradient
// step is 1e-6 max(1, |p|) and the Hessian step 1e-4 max(1, |p|); the Hessian
// is filled symmetrically.
Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& p, int dimension);
Mat fd_hessian(const std::function<double(const Vec&)>& f, const Vec& p, int dimension);

// ---------------------------------------------------------------------------
// Level sets

/// First crossing of phi(., t) = level along center + r dir, r > 0. Requires
/// phi(center) < level. Returns nullopt if no crossing before r_max.
std::optional<Vec> ray_level_crossing(const ImplicitFunction& f, double level,
                                      const Vec& center, const Vec& dir, double t = 0.0,
                                      double r_max = 1e3);

/// Closed planar level curve parametrized by s in [0, 1) via rays from the
/// shape center, counterclockwise. Throws InvalidArgument if the shape has no
/// center or the level does not enclose it.
class LevelCurve {
 public:
  LevelCurve(ImplicitFunction f, double level, double t = 0.0);
  LevelCurve(ImplicitFunction f, double level, const Vec& center, double t = 0.0);

  Vec operator()(double s) const;
  std::vector<Vec> sample(int n) const;
  double level() const { return level_; }
  const Vec& center() const { return center_; }

 private:
  ImplicitFunction f_;
  double level_;
  Vec center_;
  double t_;
};

/// Points of a closed level surface in 3D along Fibonacci-sphere rays.
std::vector<Vec> level_surface_points(const ImplicitFunction& f, double level, int n,
                                      double t = 0.0);

/// Minimum pairwise distance between two point clouds.
double min_distance(std::span<const Vec> a, std::span<const Vec> b);

// ---------------------------------------------------------------------------
// Paths and obstacles

/// Obstacle boundaries: reactive at phi = 0, repulsive at phi = c < 0, with
/// phi negative inside.
struct Obstacle {
  ImplicitFunction surface;
  double c = -0.5;
  double l1 = 0.1;  // zero-in rate
  double l2 = 0.1;  // zero-out rate
  double k_r = 1.0;
  int gamma = 1;
  double l = 1.0;              // convergence rate of the moving reactive field
  Vec bypass = Vec::UnitX();   // 3D reactive field direction v

  /// Throws InvalidArgument naming the offending field.
  void validate() const;
};

enum class Region { Repulsive, Mixed, NonReactive };

std::string_view to_string(Region region);

/// Closed repulsive area iff phi <= c, mixed iff c < phi < 0, closed
/// non-reactive iff phi >= 0.
Region region_of(const Obstacle& obs, const Vec& p, double t = 0.0);

/// Desired path: one surface with gain k_p in 2D, two surfaces with gains
/// (k1, k2) in 3D.
struct PathSpec {
  std::vector<ImplicitFunction> surfaces;
  std::vector<double> gains;
  int gamma = 1;

  int dimension() const;
  /// phi in 2D; max(|phi1|, |phi2|) in 3D.
  double error(const Vec& p) const;
  void validate() const;
};

}  // namespace gvf
