#include "gvf/implicit.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace gvf {
namespace {

constexpr double kPi = std::numbers::pi;

struct KindName {
  ShapeKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {ShapeKind::Circle, "circle"},         {ShapeKind::RotatedEllipse, "rotated-ellipse"},
    {ShapeKind::Cassini, "cassini"},       {ShapeKind::Sinusoid, "sinusoid-curve"},
    {ShapeKind::QuarticBlob, "quartic-blob"}, {ShapeKind::Plane, "plane"},
    {ShapeKind::Sphere, "sphere"},         {ShapeKind::RbfSurface, "rbf-surface"},
    {ShapeKind::Custom, "custom"},
};

std::string kind_label(const ShapeSpec& spec) { return std::string(to_string(spec.kind)); }

double scalar_param(const ShapeSpec& spec, const std::string& key,
                    std::optional<double> fallback = std::nullopt) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) {
    if (fallback) return *fallback;
    throw InvalidArgument(kind_label(spec) + ": missing parameter '" + key + "'");
  }
  if (it->second.size() != 1) {
    throw InvalidArgument(kind_label(spec) + ": parameter '" + key + "' must be a scalar");
  }
  if (!std::isfinite(it->second[0])) {
    throw InvalidArgument(kind_label(spec) + ": parameter '" + key + "' must be finite");
  }
  return it->second[0];
}

Vec vector_param(const ShapeSpec& spec, const std::string& key, std::size_t size,
                 bool required = false) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) {
    if (required) throw InvalidArgument(kind_label(spec) + ": missing parameter '" + key + "'");
    return Vec::Zero();
  }
  if (it->second.size() != size) {
    std::ostringstream os;
    os << kind_label(spec) << ": parameter '" << key << "' must have " << size << " components";
    throw InvalidArgument(os.str());
  }
  Vec v = Vec::Zero();
  for (std::size_t i = 0; i < size; ++i) v[static_cast<Eigen::Index>(i)] = it->second[i];
  if (!v.allFinite()) throw InvalidArgument(kind_label(spec) + ": parameter '" + key + "' must be finite");
  return v;
}

double positive_param(const ShapeSpec& spec, const std::string& key,
                      std::optional<double> fallback = std::nullopt) {
  const double v = scalar_param(spec, key, fallback);
  if (!(v > 0.0)) {
    throw InvalidArgument(kind_label(spec) + ": parameter '" + key + "' must be positive");
  }
  return v;
}

// ---------------------------------------------------------------------------

class Circle final : public Shape {
 public:
  Circle(const Vec& center, double radius) : Shape(2), center_(center), r2_(radius * radius) {}
  double value(const Vec& p) const override {
    const double dx = p.x() - center_.x(), dy = p.y() - center_.y();
    return dx * dx + dy * dy - r2_;
  }
  Vec gradient(const Vec& p) const override {
    return planar(2.0 * (p.x() - center_.x()), 2.0 * (p.y() - center_.y()));
  }
  Mat hessian(const Vec&) const override {
    Mat h = Mat::Zero();
    h(0, 0) = h(1, 1) = 2.0;
    return h;
  }
  bool analytic() const override { return true; }
  std::optional<Vec> center() const override { return center_; }

 private:
  Vec center_;
  double r2_;
};

class RotatedEllipse final : public Shape {
 public:
  RotatedEllipse(const Vec& center, double a, double b, double beta)
      : Shape(2),
        center_(center),
        ia2_(1.0 / (a * a)),
        ib2_(1.0 / (b * b)),
        u_(std::cos(beta), std::sin(beta), 0.0),
        w_(std::sin(beta), -std::cos(beta), 0.0) {}

  double value(const Vec& p) const override {
    const Vec d = planar(p.x() - center_.x(), p.y() - center_.y());
    const double u = u_.dot(d), w = w_.dot(d);
    return u * u * ia2_ + w * w * ib2_ - 1.0;
  }
  Vec gradient(const Vec& p) const override {
    const Vec d = planar(p.x() - center_.x(), p.y() - center_.y());
    return 2.0 * u_.dot(d) * ia2_ * u_ + 2.0 * w_.dot(d) * ib2_ * w_;
  }
  Mat hessian(const Vec&) const override {
    return 2.0 * ia2_ * u_ * u_.transpose() + 2.0 * ib2_ * w_ * w_.transpose();
  }
  bool analytic() const override { return true; }
  std::optional<Vec> center() const override { return center_; }

 private:
  Vec center_;
  double ia2_, ib2_;
  Vec u_, w_;
};

// Product of squared distances to the two foci minus k.
class Cassini final : public Shape {
 public:
  Cassini(const Vec& center, double f, double k) : Shape(2), center_(center), f_(f), k_(k) {}

  double value(const Vec& p) const override {
    const auto [P, Q] = factors(p);
    return P * Q - k_;
  }
  Vec gradient(const Vec& p) const override {
    const auto [P, Q] = factors(p);
    const auto [gP, gQ] = factor_gradients(p);
    return Q * gP + P * gQ;
  }
  Mat hessian(const Vec& p) const override {
    const auto [P, Q] = factors(p);
    const auto [gP, gQ] = factor_gradients(p);
    Mat h = gP * gQ.transpose() + gQ * gP.transpose();
    h(0, 0) += 2.0 * (P + Q);
    h(1, 1) += 2.0 * (P + Q);
    return h;
  }
  bool analytic() const override { return true; }
  std::optional<Vec> center() const override { return center_; }

 private:
  std::pair<double, double> factors(const Vec& p) const {
    const double dx = p.x() - center_.x(), dy = p.y() - center_.y();
    const double P = (dx - f_) * (dx - f_) + dy * dy;
    const double Q = (dx + f_) * (dx + f_) + dy * dy;
    return {P, Q};
  }
  std::pair<Vec, Vec> factor_gradients(const Vec& p) const {
    const double dx = p.x() - center_.x(), dy = p.y() - center_.y();
    return {planar(2.0 * (dx - f_), 2.0 * dy), planar(2.0 * (dx + f_), 2.0 * dy)};
  }

  Vec center_;
  double f_, k_;
};

class Sinusoid final : public Shape {
 public:
  Sinusoid(double amplitude, double frequency, double phase, double offset)
      : Shape(2), a_(amplitude), w_(frequency), ph_(phase), off_(offset) {}

  double value(const Vec& p) const override {
    return p.y() - off_ - a_ * std::sin(w_ * p.x() + ph_);
  }
  Vec gradient(const Vec& p) const override {
    return planar(-a_ * w_ * std::cos(w_ * p.x() + ph_), 1.0);
  }
  Mat hessian(const Vec& p) const override {
    Mat h = Mat::Zero();
    h(0, 0) = a_ * w_ * w_ * std::sin(w_ * p.x() + ph_);
    return h;
  }
  bool analytic() const override { return true; }

 private:
  double a_, w_, ph_, off_;
};

class QuarticBlob final : public Shape {
 public:
  QuarticBlob(const Vec& center, double a, double b, double d)
      : Shape(2), center_(center), a_(a), b_(b), d_(d) {}

  double value(const Vec& p) const override {
    const double X = p.x() - center_.x(), Y = p.y() - center_.y();
    const double X2 = X * X, Y2 = Y * Y;
    return a_ * X2 * X2 + a_ * Y2 * Y2 - b_ * X2 * Y2 - d_;
  }
  Vec gradient(const Vec& p) const override {
    const double X = p.x() - center_.x(), Y = p.y() - center_.y();
    return planar(4.0 * a_ * X * X * X - 2.0 * b_ * X * Y * Y,
                  4.0 * a_ * Y * Y * Y - 2.0 * b_ * X * X * Y);
  }
  Mat hessian(const Vec& p) const override {
    const double X = p.x() - center_.x(), Y = p.y() - center_.y();
    Mat h = Mat::Zero();
    h(0, 0) = 12.0 * a_ * X * X - 2.0 * b_ * Y * Y;
    h(1, 1) = 12.0 * a_ * Y * Y - 2.0 * b_ * X * X;
    h(0, 1) = h(1, 0) = -4.0 * b_ * X * Y;
    return h;
  }
  bool analytic() const override { return true; }
  std::optional<Vec> center() const override { return center_; }

 private:
  Vec center_;
  double a_, b_, d_;
};

class Plane final : public Shape {
 public:
  Plane(int dimension, const Vec& normal, double offset)
      : Shape(dimension), normal_(normal), offset_(offset) {}
  double value(const Vec& p) const override { return normal_.dot(p) - offset_; }
  Vec gradient(const Vec&) const override { return normal_; }
  Mat hessian(const Vec&) const override { return Mat::Zero(); }
  bool analytic() const override { return true; }

 private:
  Vec normal_;
  double offset_;
};

class Sphere final : public Shape {
 public:
  Sphere(const Vec& center, double radius) : Shape(3), center_(center), r2_(radius * radius) {}
  double value(const Vec& p) const override { return (p - center_).squaredNorm() - r2_; }
  Vec gradient(const Vec& p) const override { return 2.0 * (p - center_); }
  Mat hessian(const Vec&) const override { return 2.0 * Mat::Identity(); }
  bool analytic() const override { return true; }
  std::optional<Vec> center() const override { return center_; }

 private:
  Vec center_;
  double r2_;
};

// f'(r) / r and f''(r); both vanish at r = 0 for the supported bases.
std::pair<double, double> radial_derivatives(RadialBasis basis, double r) {
  switch (basis) {
    case RadialBasis::LogQuadratic: {
      const double L = std::log1p(r);
      const double s = 1.0 + r;
      return {2.0 * L + r / s, 2.0 * L + 2.0 * r / s + (r * r + 2.0 * r) / (s * s)};
    }
    case RadialBasis::Cubic:
      return {3.0 * r, 6.0 * r};
  }
  return {0.0, 0.0};
}

class RbfSurface final : public Shape {
 public:
  RbfSurface(std::vector<Vec> samples, Eigen::VectorXd weights, RadialBasis basis)
      : Shape(3), samples_(std::move(samples)), weights_(std::move(weights)), basis_(basis) {}

  double value(const Vec& p) const override {
    double acc = -1.0;
    for (std::size_t k = 0; k < samples_.size(); ++k) {
      acc += weights_[static_cast<Eigen::Index>(k)] * radial_value(basis_, (p - samples_[k]).norm());
    }
    return acc;
  }
  Vec gradient(const Vec& p) const override {
    Vec g = Vec::Zero();
    for (std::size_t k = 0; k < samples_.size(); ++k) {
      const Vec d = p - samples_[k];
      const double r = d.norm();
      g += weights_[static_cast<Eigen::Index>(k)] * radial_derivatives(basis_, r).first * d;
    }
    return g;
  }
  Mat hessian(const Vec& p) const override {
    Mat h = Mat::Zero();
    for (std::size_t k = 0; k < samples_.size(); ++k) {
      const Vec d = p - samples_[k];
      const double r = d.norm();
      if (r < 1e-300) continue;
      const auto [d1_over_r, d2] = radial_derivatives(basis_, r);
      const Vec u = d / r;
      const Mat uu = u * u.transpose();
      h += weights_[static_cast<Eigen::Index>(k)] * (d2 * uu + d1_over_r * (Mat::Identity() - uu));
    }
    return h;
  }
  bool analytic() const override { return true; }

 private:
  std::vector<Vec> samples_;
  Eigen::VectorXd weights_;
  RadialBasis basis_;
};

class CustomShape final : public Shape {
 public:
  CustomShape(std::function<double(const Vec&)> f, int dimension, std::optional<Vec> center)
      : Shape(dimension), f_(std::move(f)), center_(std::move(center)) {}
  double value(const Vec& p) const override { return f_(p); }
  std::optional<Vec> center() const override { return center_; }

 private:
  std::function<double(const Vec&)> f_;
  std::optional<Vec> center_;
};

std::vector<Vec> unflatten_samples(const ShapeSpec& spec) {
  auto it = spec.params.find("samples");
  if (it == spec.params.end()) throw InvalidArgument("rbf-surface: missing parameter 'samples'");
  const auto& flat = it->second;
  if (flat.size() % 3 != 0) {
    throw InvalidArgument("rbf-surface: 'samples' must be a list of 3D points");
  }
  std::vector<Vec> samples;
  for (std::size_t i = 0; i < flat.size(); i += 3) samples.emplace_back(flat[i], flat[i + 1], flat[i + 2]);
  return samples;
}

ShapeSpec rbf_spec(std::span<const Vec> samples, RadialBasis basis) {
  ShapeSpec spec;
  spec.kind = ShapeKind::RbfSurface;
  spec.basis = basis;
  auto& flat = spec.params["samples"];
  for (const auto& q : samples) flat.insert(flat.end(), {q.x(), q.y(), q.z()});
  return spec;
}

int dimension_of_vector(const ShapeSpec& spec, const std::string& key) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) return 2;
  return static_cast<int>(it->second.size());
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(ShapeKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

ShapeKind shape_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw InvalidArgument("unknown shape kind '" + std::string(name) + "'");
}

std::string_view to_string(RadialBasis basis) {
  switch (basis) {
    case RadialBasis::LogQuadratic: return "log-quadratic";
    case RadialBasis::Cubic: return "cubic";
  }
  return "unknown";
}

RadialBasis radial_basis_from_string(std::string_view name) {
  if (name == "log-quadratic") return RadialBasis::LogQuadratic;
  if (name == "cubic") return RadialBasis::Cubic;
  throw InvalidArgument("unknown radial basis '" + std::string(name) + "'");
}

bool ShapeSpec::operator==(const ShapeSpec& other) const {
  return kind == other.kind && params == other.params && basis == other.basis &&
         velocity == other.velocity;
}

double radial_value(RadialBasis basis, double r) {
  switch (basis) {
    case RadialBasis::LogQuadratic: return r * r * std::log1p(r);
    case RadialBasis::Cubic: return r * r * r;
  }
  return 0.0;
}

Vec Shape::gradient(const Vec& p) const {
  return fd_gradient([this](const Vec& q) { return value(q); }, p, dimension_);
}

Mat Shape::hessian(const Vec& p) const {
  return fd_hessian([this](const Vec& q) { return value(q); }, p, dimension_);
}

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& p, int dimension) {
  const double h = 1e-6 * std::max(1.0, p.norm());
  Vec g = Vec::Zero();
  for (int i = 0; i < dimension; ++i) {
    Vec a = p, b = p;
    a[i] += h;
    b[i] -= h;
    g[i] = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

Mat fd_hessian(const std::function<double(const Vec&)>& f, const Vec& p, int dimension) {
  const double h = 1e-4 * std::max(1.0, p.norm());
  Mat H = Mat::Zero();
  const double f0 = f(p);
  for (int i = 0; i < dimension; ++i) {
    Vec a = p, b = p;
    a[i] += h;
    b[i] -= h;
    H(i, i) = (f(a) - 2.0 * f0 + f(b)) / (h * h);
    for (int j = i + 1; j < dimension; ++j) {
      Vec pp = p, pm = p, mp = p, mm = p;
      pp[i] += h; pp[j] += h;
      pm[i] += h; pm[j] -= h;
      mp[i] -= h; mp[j] += h;
      mm[i] -= h; mm[j] -= h;
      H(i, j) = H(j, i) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
    }
  }
  return H;
}

// ---------------------------------------------------------------------------

ImplicitFunction::ImplicitFunction(std::shared_ptr<const Shape> shape, ShapeSpec spec)
    : shape_(std::move(shape)), spec_(std::move(spec)) {}

double ImplicitFunction::eval(const Vec& p, double t) const {
  return shape_->value(t == 0.0 ? p : Vec(p - offset(t)));
}

Vec ImplicitFunction::gradient(const Vec& p, double t) const {
  return shape_->gradient(t == 0.0 ? p : Vec(p - offset(t)));
}

Mat ImplicitFunction::hessian(const Vec& p, double t) const {
  return shape_->hessian(t == 0.0 ? p : Vec(p - offset(t)));
}

double ImplicitFunction::time_derivative(const Vec& p, double t) const {
  if (!is_moving()) return 0.0;
  return -gradient(p, t).dot(spec_.velocity);
}

std::optional<Vec> ImplicitFunction::center(double t) const {
  auto c = shape_->center();
  if (c) *c += offset(t);
  return c;
}

ImplicitFunction make_shape(const ShapeSpec& spec) {
  std::shared_ptr<const Shape> shape;
  int dimension = 2;
  switch (spec.kind) {
    case ShapeKind::Circle:
      shape = std::make_shared<Circle>(vector_param(spec, "center", 2), positive_param(spec, "radius"));
      break;
    case ShapeKind::RotatedEllipse:
      shape = std::make_shared<RotatedEllipse>(vector_param(spec, "center", 2),
                                               positive_param(spec, "a"), positive_param(spec, "b"),
                                               scalar_param(spec, "beta", 0.0));
      break;
    case ShapeKind::Cassini:
      shape = std::make_shared<Cassini>(vector_param(spec, "center", 2), positive_param(spec, "f"),
                                        positive_param(spec, "k"));
      break;
    case ShapeKind::Sinusoid:
      shape = std::make_shared<Sinusoid>(scalar_param(spec, "amplitude", 1.0),
                                         scalar_param(spec, "frequency", 1.0),
                                         scalar_param(spec, "phase", 0.0),
                                         scalar_param(spec, "offset", 0.0));
      break;
    case ShapeKind::QuarticBlob:
      shape = std::make_shared<QuarticBlob>(vector_param(spec, "center", 2),
                                            positive_param(spec, "a", 2.0),
                                            scalar_param(spec, "b", 3.0),
                                            positive_param(spec, "d", 2.0));
      break;
    case ShapeKind::Plane: {
      dimension = dimension_of_vector(spec, "normal");
      if (dimension != 2 && dimension != 3) {
        throw InvalidArgument("plane: 'normal' must have 2 or 3 components");
      }
      const Vec n = vector_param(spec, "normal", static_cast<std::size_t>(dimension), true);
      if (n.norm() == 0.0) throw InvalidArgument("plane: 'normal' must be nonzero");
      shape = std::make_shared<Plane>(dimension, n, scalar_param(spec, "offset", 0.0));
      break;
    }
    case ShapeKind::Sphere:
      shape = std::make_shared<Sphere>(vector_param(spec, "center", 3), positive_param(spec, "radius"));
      break;
    case ShapeKind::RbfSurface: {
      const auto samples = unflatten_samples(spec);
      auto fit = fit_rbf_surface(samples, spec.basis);
      ShapeSpec full = fit.function.spec();
      full.velocity = spec.velocity;
      return ImplicitFunction(fit.function.shape_ptr(), std::move(full));
    }
    case ShapeKind::Custom:
      throw InvalidArgument("custom shapes are built with make_custom, not from a spec");
  }
  if (shape->dimension() == 2 && spec.velocity.z() != 0.0) {
    throw InvalidArgument(kind_label(spec) + ": planar shape cannot move along z");
  }
  (void)dimension;
  return ImplicitFunction(std::move(shape), spec);
}

ImplicitFunction make_custom(std::function<double(const Vec&)> value, int dimension,
                             std::optional<Vec> center, const Vec& velocity) {
  if (dimension != 2 && dimension != 3) throw InvalidArgument("custom: dimension must be 2 or 3");
  ShapeSpec spec;
  spec.kind = ShapeKind::Custom;
  spec.velocity = velocity;
  return ImplicitFunction(std::make_shared<CustomShape>(std::move(value), dimension, std::move(center)),
                          std::move(spec));
}

RbfFit fit_rbf_surface(std::span<const Vec> samples, RadialBasis basis) {
  const auto n = static_cast<Eigen::Index>(samples.size());
  if (n < 2) throw FitError("rbf-surface: at least two samples are required");
  Eigen::MatrixXd G(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      G(i, j) = radial_value(basis, (samples[static_cast<std::size_t>(i)] -
                                     samples[static_cast<std::size_t>(j)]).norm());
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(G);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-12)) {
    std::ostringstream os;
    os << "rbf-surface: Gram matrix is singular or ill-conditioned (rcond estimate " << rcond << ")";
    throw FitError(os.str());
  }
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd w = lu.solve(ones);
  w += lu.solve(ones - G * w);  // one step of iterative refinement

  RbfFit fit;
  fit.weights = w;
  fit.rcond = rcond;
  fit.function = ImplicitFunction(
      std::make_shared<RbfSurface>(std::vector<Vec>(samples.begin(), samples.end()), w, basis),
      rbf_spec(samples, basis));
  return fit;
}

// ---------------------------------------------------------------------------

std::optional<Vec> ray_level_crossing(const ImplicitFunction& f, double level, const Vec& center,
                                      const Vec& dir, double t, double r_max) {
  if (!(f.eval(center, t) < level)) return std::nullopt;
  double lo = 0.0, hi = 0.0, step = 1e-2;
  bool bracketed = false;
  for (double r = step; r <= r_max; r += step) {
    if (f.eval(center + r * dir, t) >= level) {
      hi = r;
      bracketed = true;
      break;
    }
    lo = r;
    step *= 1.05;
  }
  if (!bracketed) return std::nullopt;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f.eval(center + mid * dir, t) >= level) hi = mid;
    else lo = mid;
  }
  return Vec(center + 0.5 * (lo + hi) * dir);
}

LevelCurve::LevelCurve(ImplicitFunction f, double level, double t)
    : f_(std::move(f)), level_(level), t_(t) {
  auto c = f_.center(t);
  if (!c) throw InvalidArgument(std::string(to_string(f_.kind())) + ": shape has no star center");
  center_ = *c;
  if (!(f_.eval(center_, t_) < level_)) {
    throw InvalidArgument("level curve does not enclose the shape center");
  }
}

LevelCurve::LevelCurve(ImplicitFunction f, double level, const Vec& center, double t)
    : f_(std::move(f)), level_(level), center_(center), t_(t) {
  if (!(f_.eval(center_, t_) < level_)) {
    throw InvalidArgument("level curve does not enclose the given center");
  }
}

Vec LevelCurve::operator()(double s) const {
  const double theta = 2.0 * kPi * s;
  auto p = ray_level_crossing(f_, level_, center_, planar(std::cos(theta), std::sin(theta)), t_);
  if (!p) throw ConvergenceError("level curve: no crossing along a ray");
  return *p;
}

std::vector<Vec> LevelCurve::sample(int n) const {
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pts.push_back((*this)(static_cast<double>(i) / n));
  return pts;
}

std::vector<Vec> level_surface_points(const ImplicitFunction& f, double level, int n, double t) {
  auto c = f.center(t);
  if (!c) throw InvalidArgument("level surface: shape has no star center");
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Vec dir(rho * std::cos(golden * i), rho * std::sin(golden * i), z);
    if (auto p = ray_level_crossing(f, level, *c, dir, t)) pts.push_back(*p);
  }
  return pts;
}

double min_distance(std::span<const Vec> a, std::span<const Vec> b) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : a) {
    for (const auto& q : b) best = std::min(best, (p - q).squaredNorm());
  }
  return std::sqrt(best);
}

// ---------------------------------------------------------------------------

void Obstacle::validate() const {
  if (!surface) throw InvalidArgument("obstacle: missing surface");
  if (!(c < 0.0)) throw InvalidArgument("obstacle: repulsive level must be negative");
  if (!(l1 > 0.0)) throw InvalidArgument("obstacle: l1 must be positive");
  if (!(l2 > 0.0)) throw InvalidArgument("obstacle: l2 must be positive");
  if (!(k_r > 0.0)) throw InvalidArgument("obstacle: k_r must be positive");
  if (gamma != 1 && gamma != -1) throw InvalidArgument("obstacle: gamma must be +1 or -1");
  if (!(l > 0.0)) throw InvalidArgument("obstacle: l must be positive");
  if (surface.dimension() == 3 && bypass.norm() == 0.0) {
    throw InvalidArgument("obstacle: bypass direction must be nonzero");
  }
}

std::string_view to_string(Region region) {
  switch (region) {
    case Region::Repulsive: return "repulsive";
    case Region::Mixed: return "mixed";
    case Region::NonReactive: return "free";
  }
  return "unknown";
}

Region region_of(const Obstacle& obs, const Vec& p, double t) {
  const double phi = obs.surface.eval(p, t);
  if (phi <= obs.c) return Region::Repulsive;
  if (phi < 0.0) return Region::Mixed;
  return Region::NonReactive;
}

int PathSpec::dimension() const { return surfaces.empty() ? 0 : surfaces.front().dimension(); }

double PathSpec::error(const Vec& p) const {
  if (surfaces.size() == 1) return surfaces[0].eval(p);
  return std::max(std::abs(surfaces[0].eval(p)), std::abs(surfaces[1].eval(p)));
}

void PathSpec::validate() const {
  if (surfaces.size() != 1 && surfaces.size() != 2) {
    throw InvalidArgument("path: expected one surface (2D) or two surfaces (3D)");
  }
  for (const auto& s : surfaces) {
    if (!s) throw InvalidArgument("path: missing surface");
  }
  const int dim = surfaces.size() == 1 ? 2 : 3;
  for (const auto& s : surfaces) {
    if (s.dimension() != dim) {
      throw InvalidArgument(dim == 2 ? "path: a planar path needs a 2D surface"
                                     : "path: a 3D path needs two 3D surfaces");
    }
    if (s.is_moving()) throw InvalidArgument("path: the desired path must be static");
  }
  if (gains.size() != surfaces.size()) {
    throw InvalidArgument("path: expected one gain per surface");
  }
  for (double k : gains) {
    if (!(k > 0.0)) throw InvalidArgument("path: gains must be positive");
  }
  if (gamma != 1 && gamma != -1) throw InvalidArgument("path: gamma must be +1 or -1");
}

}  // namespace gvf
