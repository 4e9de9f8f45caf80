#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gvf/blending.hpp"
#include "gvf/vector_fields.hpp"

namespace gvf {
namespace {

ImplicitFunction circle(double r, double cx = 0.0, double cy = 0.0) {
  return make_shape({ShapeKind::Circle, {{"center", {cx, cy}}, {"radius", {r}}}});
}

Obstacle make_obstacle(ImplicitFunction f, double c, double k_r = 1.0) {
  Obstacle obs;
  obs.surface = std::move(f);
  obs.c = c;
  obs.k_r = k_r;
  return obs;
}

TEST(Bump, Endpoints) {
  const BumpPair b{-1.5, 0.1, 0.1};
  auto at_c = bump_values(b, -1.5);
  EXPECT_EQ(at_c.zero_in, 0.0);
  EXPECT_EQ(at_c.zero_out, 1.0);
  auto at_0 = bump_values(b, 0.0);
  EXPECT_EQ(at_0.zero_in, 1.0);
  EXPECT_EQ(at_0.zero_out, 0.0);
  auto mid = bump_values(b, -0.75);
  EXPECT_EQ(mid.zero_in, 0.5);
  EXPECT_EQ(mid.zero_out, 0.5);
}

TEST(Bump, EqualLevel) {
  EXPECT_DOUBLE_EQ(equal_level({-1.5, 0.1, 0.1}), -0.75);
  EXPECT_NEAR(equal_level({-1.0, 0.2, 0.1}), -1.0 / 3.0, 1e-15);
  for (const BumpPair b : {BumpPair{-1.0, 0.2, 0.1}, BumpPair{-0.3, 0.05, 0.4}, BumpPair{-2.0, 1.0, 1.0}}) {
    const auto v = bump_values(b, equal_level(b));
    EXPECT_LT(std::abs(v.zero_in - v.zero_out), 1e-12);
  }
}

TEST(Bump, PartitionOfUnityAndMonotonicity) {
  const BumpPair b{-0.8, 0.15, 0.05};
  double prev = -1.0;
  for (int i = 0; i <= 10000; ++i) {
    const double phi = 2 * b.c + (-4 * b.c) * i / 10000.0;
    const auto v = bump_values(b, phi);
    EXPECT_NEAR(v.zero_in + v.zero_out, 1.0, 1e-12);
    EXPECT_GE(v.zero_in, 0.0);
    EXPECT_LE(v.zero_in, 1.0);
    if (phi > 0.95 * b.c && phi < 0.05 * b.c) {
      EXPECT_GT(v.zero_in, 0.0);
      EXPECT_LT(v.zero_in, 1.0);
    }
    EXPECT_GE(v.zero_in, prev - 1e-12);
    prev = v.zero_in;
  }
}

TEST(Bump, ContinuousAcrossBandEdges) {
  const BumpPair b{-1.5, 0.1, 0.1};
  for (double edge : {b.c, 0.0}) {
    const double h = 1e-4;
    const auto lo = bump_values(b, edge - h), hi = bump_values(b, edge + h), at = bump_values(b, edge);
    // One-sided difference quotients agree (both flat).
    EXPECT_NEAR((at.zero_in - lo.zero_in) / h, (hi.zero_in - at.zero_in) / h, 1e-4);
  }
}

TEST(Composite, RegionCases) {
  PathSpec path{{circle(2.0)}, {1.0}};
  auto obs = make_obstacle(circle(0.5, 2.0, 0.0), -0.2);
  FieldStack stack(path, {obs});
  // Outside the reactive area: unit path field.
  const Vec far = planar(-1.0, 1.5);
  EXPECT_LT((stack(far) - normalize(path_field(path, far))).norm(), 1e-15);
  EXPECT_NEAR(stack(far).norm(), 1.0, 1e-15);
  // Inside the repulsive area: unit reactive field.
  const Vec in = planar(2.1, 0.05);
  ASSERT_LE(obs.surface.eval(in), obs.c);
  EXPECT_LT((stack(in) - normalize(reactive_field(obs, in))).norm(), 1e-15);
}

TEST(Composite, NormBoundedInMixedArea) {
  PathSpec path{{circle(2.0)}, {1.0}};
  auto obs = make_obstacle(circle(0.5, 2.0, 0.0), -0.2);
  FieldStack stack(path, {obs});
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  int checked = 0;
  for (int i = 0; i < 5000; ++i) {
    const Vec p = planar(2.0 + u(rng), u(rng));
    if (region_of(obs, p) != Region::Mixed) continue;
    EXPECT_LE(stack(p).norm(), 1.0 + 1e-12);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(Composite, ContinuousAcrossBoundaries) {
  PathSpec path{{circle(2.0)}, {1.0}};
  auto obs = make_obstacle(circle(0.5, 2.0, 0.0), -0.2);
  FieldStack stack(path, {obs});
  // phi = (x - 2)^2 + y^2 - 0.25 along y = 0.1: crossings of 0 and c.
  for (double level : {0.0, -0.2}) {
    const double x = 2.0 + std::sqrt(level + 0.25 - 0.01);
    const Vec a = planar(x - 1e-8, 0.1), b = planar(x + 1e-8, 0.1);
    EXPECT_LT((stack(a) - stack(b)).norm(), 1e-6);
  }
}

TEST(Composite, LocalityIsExact) {
  PathSpec path{{circle(2.0)}, {1.0}};
  auto near = make_obstacle(circle(0.5, 2.0, 0.0), -0.2);
  auto other = make_obstacle(circle(0.4, -2.0, 0.0), -0.1);
  FieldStack one(path, {near}), two(path, {near, other});
  for (const Vec& p : {planar(2.2, 0.1), planar(0.5, 1.0), planar(1.6, -0.3)}) {
    EXPECT_EQ(one(p), two(p));
  }
}

TEST(Composite, SingularComponentIsNamed) {
  PathSpec path{{circle(2.0)}, {1.0}};
  auto obs = make_obstacle(circle(0.5, 2.0, 0.0), -0.2);
  FieldStack stack(path, {obs});
  try {
    stack(planar(2.0, 0.0));
    FAIL() << "expected SingularityError";
  } catch (const SingularityError& e) {
    EXPECT_NE(std::string(e.what()).find("obstacle 0"), std::string::npos);
  }
  FieldStack bare(path);
  EXPECT_THROW(bare(planar(0, 0)), SingularityError);
}

TEST(Composite, RawModeUsesUnnormalizedFields) {
  PathSpec path{{circle(2.0)}, {1.0}};
  auto obs = make_obstacle(circle(0.5, 2.0, 0.0), -0.2);
  FieldStack raw(path, {obs}, Composition::Raw);
  const Vec far = planar(-1.0, 1.5);
  EXPECT_EQ(raw(far), path_field(path, far));
}

TEST(Composite, ValidateRejectsOverlappingReactiveAreas) {
  PathSpec path{{circle(2.0)}, {1.0}};
  FieldStack bad(path, {make_obstacle(circle(0.5, 2.0, 0.0), -0.2), make_obstacle(circle(0.5, 2.6, 0.0), -0.2)});
  EXPECT_THROW(bad.validate(), InvalidArgument);
  FieldStack good(path, {make_obstacle(circle(0.5, 2.0, 0.0), -0.2), make_obstacle(circle(0.5, -2.0, 0.0), -0.2)});
  EXPECT_NO_THROW(good.validate());
}

}  // namespace
}  // namespace gvf
