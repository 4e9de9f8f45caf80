#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gvf/implicit.hpp"

namespace gvf {
namespace {

ShapeSpec circle_spec(double r, double cx = 0.0, double cy = 0.0) {
  return {ShapeKind::Circle, {{"center", {cx, cy}}, {"radius", {r}}}};
}

ShapeSpec ellipse_spec(double a, double b, double beta = 0.0, double cx = 0.0, double cy = 0.0) {
  return {ShapeKind::RotatedEllipse, {{"center", {cx, cy}}, {"a", {a}}, {"b", {b}}, {"beta", {beta}}}};
}

ShapeSpec cassini_spec() {
  return {ShapeKind::Cassini, {{"center", {0.0, 2.0}}, {"f", {0.9}}, {"k", {0.9}}}};
}

std::vector<ShapeSpec> canonical_specs() {
  std::vector<ShapeSpec> specs = {
      circle_spec(1.3, 0.2, -0.4),
      ellipse_spec(2.0, 1.0, 0.7, 0.5, 0.1),
      cassini_spec(),
      {ShapeKind::Sinusoid, {{"amplitude", {1.2}}, {"frequency", {0.8}}, {"phase", {0.3}}, {"offset", {0.1}}}},
      {ShapeKind::QuarticBlob, {{"center", {0.0, -1.0}}}},
      {ShapeKind::Plane, {{"normal", {0.3, -0.2, 1.0}}, {"offset", {0.4}}}},
      {ShapeKind::Sphere, {{"center", {-2.8, 0.0, 0.0}}, {"radius", {1.0}}}},
  };
  ShapeSpec rbf{ShapeKind::RbfSurface, {{"samples", {1, 0, 0, 0, 1, 0, -1, 0, 0, 0, -1, 0, 0, 0, 1}}}};
  specs.push_back(rbf);
  return specs;
}

TEST(Implicit, CircleValueAndGradient) {
  auto f = make_shape(circle_spec(1.0));
  EXPECT_DOUBLE_EQ(f.eval(planar(2, 0)), 3.0);
  EXPECT_TRUE(f.gradient(planar(2, 0)).isApprox(planar(4, 0)));
  Mat expected = Mat::Zero();
  expected(0, 0) = expected(1, 1) = 2.0;
  EXPECT_EQ(f.hessian(planar(0.3, -7.0)), expected);
}

TEST(Implicit, CassiniAtFocus) {
  auto f = make_shape(cassini_spec());
  EXPECT_NEAR(f.eval(planar(0.9, 2.0)), -0.9, 1e-15);
}

TEST(Implicit, RotatedEllipseSwapsAxes) {
  auto f = make_shape(ellipse_spec(2.0, 1.0, std::numbers::pi / 2));
  EXPECT_NEAR((f.gradient(planar(1, 0)) - planar(2, 0)).norm(), 0.0, 1e-15);
  // y^2/4 + x^2 - 1
  EXPECT_NEAR(f.eval(planar(0.3, 1.1)), 1.1 * 1.1 / 4 + 0.09 - 1.0, 1e-15);
}

TEST(Implicit, MovingEllipseCenterAndTimeDerivative) {
  ShapeSpec spec = ellipse_spec(2.0, 1.0, 0.0, -5.0, 0.0);
  spec.velocity = planar(0.5, 0.0);
  auto f = make_shape(spec);
  for (double t : {0.0, 0.7, 3.0, 12.5}) EXPECT_NEAR(f.eval(planar(-5.0 + 0.5 * t, 0), t), -1.0, 1e-14);
  EXPECT_NEAR(f.time_derivative(planar(0, 0), 0.0), -1.25, 1e-14);
  EXPECT_TRUE(f.is_moving());
  auto g = make_shape(ellipse_spec(2.0, 1.0));
  EXPECT_EQ(g.time_derivative(planar(0.4, 0.2), 3.0), 0.0);
}

TEST(Implicit, TranslationInvariance) {
  ShapeSpec spec = cassini_spec();
  spec.velocity = planar(0.3, -0.2);
  auto f = make_shape(spec);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 50; ++i) {
    const Vec p = planar(u(rng), u(rng));
    const double t = 0.5 * (u(rng) + 3.0);
    const double ref = f.eval(p, 0.0);
    EXPECT_NEAR(f.eval(p + f.offset(t), t), ref, 1e-13 * std::max(1.0, std::abs(ref)));
  }
}

TEST(Implicit, AnalyticGradientMatchesCentralDifferences) {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-3, 3);
  for (const auto& spec : canonical_specs()) {
    auto f = make_shape(spec);
    ASSERT_TRUE(f.analytic()) << to_string(spec.kind);
    const int dim = f.dimension();
    for (int i = 0; i < 100; ++i) {
      Vec p = Vec::Zero();
      for (int k = 0; k < dim; ++k) p[k] = u(rng);
      const Vec analytic = f.gradient(p);
      const Vec fd = fd_gradient([&](const Vec& q) { return f.eval(q); }, p, dim);
      const double scale = std::max(1.0, analytic.norm());
      EXPECT_LT((analytic - fd).norm() / scale, 1e-6) << to_string(spec.kind) << " at " << p.transpose();
    }
  }
}

TEST(Implicit, AnalyticHessianIsSymmetricAndMatchesDifferences) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (const auto& spec : canonical_specs()) {
    auto f = make_shape(spec);
    const int dim = f.dimension();
    for (int i = 0; i < 20; ++i) {
      Vec p = Vec::Zero();
      for (int k = 0; k < dim; ++k) p[k] = u(rng);
      const Mat H = f.hessian(p);
      EXPECT_EQ(H, H.transpose()) << to_string(spec.kind);
      const Mat fd = fd_hessian([&](const Vec& q) { return f.eval(q); }, p, dim);
      EXPECT_LT((H - fd).norm() / std::max(1.0, H.norm()), 1e-4) << to_string(spec.kind);
    }
  }
}

TEST(Implicit, CustomShapeUsesFiniteDifferences) {
  auto f = make_custom([](const Vec& p) { return std::sin(p.x()) * p.y() + p.y() * p.y(); }, 2);
  EXPECT_FALSE(f.analytic());
  const Vec p = planar(0.4, -1.2);
  const Vec exact = planar(std::cos(0.4) * -1.2, std::sin(0.4) + 2 * -1.2);
  EXPECT_LT((f.gradient(p) - exact).norm(), 1e-8);
  const Mat H = f.hessian(p);
  EXPECT_NEAR(H(0, 1), H(1, 0), 1e-8);
  EXPECT_NEAR(H(0, 1), std::cos(0.4), 1e-5);
  EXPECT_NEAR(H(1, 1), 2.0, 1e-5);
}

TEST(Implicit, InvalidParametersAreRejected) {
  EXPECT_THROW(make_shape(circle_spec(0.0)), InvalidArgument);
  EXPECT_THROW(make_shape(circle_spec(-1.0)), InvalidArgument);
  EXPECT_THROW(make_shape(ellipse_spec(1.0, -2.0)), InvalidArgument);
  EXPECT_THROW(make_shape(ShapeSpec{ShapeKind::Circle, {{"center", {0.0}}, {"radius", {1.0}}}}),
               InvalidArgument);
  EXPECT_THROW(make_shape(ShapeSpec{ShapeKind::Plane, {{"normal", {0.0, 0.0, 0.0}}}}), InvalidArgument);
  EXPECT_THROW(shape_kind_from_string("blob"), InvalidArgument);
}

TEST(Implicit, RegionSplitIsInclusiveAtBoundaries) {
  Obstacle obs;
  obs.surface = make_shape(circle_spec(2.0));
  obs.c = -1.5;
  // phi = x^2 - 4
  EXPECT_EQ(region_of(obs, planar(1.5, 0.5)), Region::Repulsive);  // phi = -1.5 exactly
  EXPECT_EQ(region_of(obs, planar(1.5, 1.0)), Region::Mixed);      // phi = -0.75
  EXPECT_EQ(region_of(obs, planar(2.0, 0)), Region::NonReactive);
  EXPECT_EQ(region_of(obs, planar(0, 0)), Region::Repulsive);
}

TEST(Implicit, LevelsAreOrderedAlongRays) {
  for (const auto& spec : {circle_spec(1.5, 1.0, 1.0), ellipse_spec(2.0, 0.5, 0.4, -1.0, 0.3),
                           ShapeSpec{ShapeKind::QuarticBlob, {{"center", {0.0, -1.0}}}}}) {
    auto f = make_shape(spec);
    const Vec c = *f.center();
    for (int k = 0; k < 36; ++k) {
      const double th = 2 * std::numbers::pi * k / 36;
      const Vec dir = planar(std::cos(th), std::sin(th));
      double prev = f.eval(c);
      for (int i = 1; i <= 400; ++i) {
        const double v = f.eval(c + 0.01 * i * dir);
        EXPECT_GE(v, prev) << to_string(spec.kind) << " ray " << k;
        prev = v;
      }
      const auto p0 = ray_level_crossing(f, 0.0, c, dir);
      const auto pc = ray_level_crossing(f, -0.5, c, dir);
      ASSERT_TRUE(p0 && pc);
      EXPECT_LT((*pc - c).norm(), (*p0 - c).norm());
      EXPECT_NEAR(f.eval(*p0), 0.0, 1e-12);
    }
  }
}

TEST(Implicit, LevelCurveSamplesLieOnTheLevel) {
  auto f = make_shape(cassini_spec());
  LevelCurve curve(f, -0.15);
  for (const auto& p : curve.sample(64)) EXPECT_NEAR(f.eval(p), -0.15, 1e-12);
  EXPECT_THROW(LevelCurve(f, -0.5), InvalidArgument);  // two loops, center not enclosed
}

// Oracle for two samples at (+-1, 0, 0): G = [[0, g], [g, 0]] with
// g = f(2) = 4 ln 3, so w1 = w2 = 1 / g.
TEST(Implicit, RbfTwoSampleOracle) {
  const std::vector<Vec> samples = {Vec(1, 0, 0), Vec(-1, 0, 0)};
  auto fit = fit_rbf_surface(samples);
  const double g = 4.0 * std::log(3.0);
  EXPECT_NEAR(fit.weights[0], 1.0 / g, 1e-14);
  EXPECT_NEAR(fit.weights[1], 1.0 / g, 1e-14);
}

TEST(Implicit, RbfFitInterpolatesSamples) {
  const std::vector<Vec> samples = {{1.5, 0, 0},     {1.5, 2.6, 0},  {-0.75, 1.3, 0},
                                    {-3, 0, 0},      {-0.75, -1.3, 0}, {1.5, -2.6, 0}};
  auto fit = fit_rbf_surface(samples);
  for (const auto& q : samples) EXPECT_LT(std::abs(fit.function.eval(q)), 1e-9);
  EXPECT_GT(fit.rcond, 0.0);
  // Round trip through the spec reproduces the same surface.
  auto again = make_shape(fit.function.spec());
  EXPECT_EQ(again.eval(Vec(0.3, 0.2, 0.1)), fit.function.eval(Vec(0.3, 0.2, 0.1)));
}

TEST(Implicit, RbfRejectsDegenerateSamples) {
  const std::vector<Vec> samples = {Vec(1, 0, 0), Vec(1, 0, 0)};
  EXPECT_THROW(fit_rbf_surface(samples), FitError);
  const std::vector<Vec> single = {Vec(1, 0, 0)};
  EXPECT_THROW(fit_rbf_surface(single), FitError);
}

TEST(Implicit, PathAndObstacleValidation) {
  Obstacle obs;
  obs.surface = make_shape(circle_spec(1.0));
  obs.c = 1.0;
  EXPECT_THROW(obs.validate(), InvalidArgument);
  obs.c = -0.5;
  EXPECT_NO_THROW(obs.validate());
  obs.gamma = 0;
  EXPECT_THROW(obs.validate(), InvalidArgument);

  PathSpec path{{make_shape(circle_spec(1.0))}, {1.0}};
  EXPECT_NO_THROW(path.validate());
  path.gains = {-1.0};
  EXPECT_THROW(path.validate(), InvalidArgument);
}

}  // namespace
}  // namespace gvf
