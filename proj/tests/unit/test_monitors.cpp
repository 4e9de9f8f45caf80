#include <gtest/gtest.h>

#include <cmath>

#include "gvf/monitors.hpp"
#include "gvf/vector_fields.hpp"

namespace gvf {
namespace {

ImplicitFunction circle(double r, double cx = 0.0, double cy = 0.0, const Vec& velocity = Vec::Zero()) {
  return make_shape({ShapeKind::Circle, {{"center", {cx, cy}}, {"radius", {r}}}, RadialBasis::LogQuadratic, velocity});
}

Obstacle unit_obstacle() {
  Obstacle obs;
  obs.surface = circle(1.0);
  obs.c = -0.5;
  return obs;
}

State xy(double x, double y) {
  State s(2);
  s << x, y;
  return s;
}

// Planar single-integrator trajectory through the given points, dt = 0.1.
Trajectory polyline(std::initializer_list<Vec2> pts, const std::vector<Obstacle>& obstacles = {}) {
  Trajectory traj;
  double t = 0.0;
  for (const auto& q : pts) {
    Sample s;
    s.t = t;
    s.state = xy(q.x(), q.y());
    for (const auto& obs : obstacles) s.regions.push_back(region_of(obs, planar(q.x(), q.y())));
    s.field_norm = 1.0;
    traj.samples.push_back(s);
    t += 0.1;
  }
  return traj;
}

TEST(Safety, PassesOutsideRepulsiveArea) {
  const std::vector<Obstacle> obs{unit_obstacle()};
  const auto r = check_safety(polyline({{2, 0}, {1, 0}, {0.8, 0}, {0, 2}}, obs), obs);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_NEAR(r.margin, 0.64 - 1.0 + 0.5, 1e-12);
}

TEST(Safety, SampleInsideFails) {
  const std::vector<Obstacle> obs{unit_obstacle()};
  const auto r = check_safety(polyline({{2, 0}, {1.5, 0}, {0, 0}, {2, 0}}, obs), obs);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  ASSERT_TRUE(r.t_violation);
  EXPECT_NEAR(*r.t_violation, 0.2, 1e-12);
  EXPECT_NEAR(r.margin, -0.5, 1e-12);
}

TEST(Safety, StartInsideIsExemptUntilExit) {
  const std::vector<Obstacle> obs{unit_obstacle()};
  auto r = check_safety(polyline({{0, 0}, {0.5, 0}, {0.9, 0}, {2, 0}}, obs), obs);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_EQ(r.params["exempt_obstacles"].size(), 1u);
  r = check_safety(polyline({{0, 0}, {0.9, 0}, {0.1, 0}}, obs), obs);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  r = check_safety(polyline({{0, 0}, {0.1, 0}, {0.2, 0}}, obs), obs);
  EXPECT_EQ(r.verdict, Verdict::Indeterminate);
}

TEST(ErrorBound, EstimateCoversReactiveAreas) {
  // Path phi = y. Reactive disks reach |y| = 4 and |y| = 3.
  PathSpec path{{make_shape({ShapeKind::Plane, {{"normal", {0.0, 1.0}}}})}, {1.0}, 1};
  Obstacle a = unit_obstacle();
  a.surface = circle(1.0, 0.0, 3.0);
  Obstacle b = unit_obstacle();
  b.surface = circle(1.0, 5.0, -2.0);
  const FieldStack stack(path, {a, b});
  EXPECT_NEAR(estimate_error_bound(stack, planar(0.0, 0.5)), 1.05 * 4.0, 1e-4);
  EXPECT_NEAR(estimate_error_bound(stack, planar(0.0, -10.0)), 1.05 * 10.0, 1e-12);
  const FieldStack only_b(path, {b});
  EXPECT_NEAR(estimate_error_bound(only_b, planar(0.0, 0.5)), 1.05 * 3.0, 1e-4);
}

TEST(ErrorBound, Check) {
  auto traj = polyline({{0, 0}, {0, 0}, {0, 0}});
  traj.samples[0].phi = 1.0;
  traj.samples[1].phi = -2.5;
  traj.samples[2].phi = 0.1;
  auto r = check_error_bound(traj, 3.0);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_DOUBLE_EQ(r.margin, 0.5);
  r = check_error_bound(traj, 2.0);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  EXPECT_DOUBLE_EQ(*r.t_violation, 0.1);
}

TEST(Monotone, ConvergingRunPassesAndIncreaseFails) {
  PathSpec path{{circle(2.0)}, {1.0}, 1};
  const FieldStack stack(path);
  const auto traj = integrate(RobotModel{}, stack, xy(3.0, 0.0), SimOptions{1e-2, 10.0});
  auto r = check_monotone_outside(traj, stack);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_GT(r.params["checked_pairs"].get<int>(), 100);

  auto bad = polyline({{3, 0}, {2.5, 0}, {2.8, 0}});
  for (auto& s : bad.samples) s.regions.clear();
  r = check_monotone_outside(bad, stack);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  EXPECT_NEAR(*r.t_violation, 0.2, 1e-12);

  bad.model.kind = ModelKind::Dubins;
  EXPECT_EQ(check_monotone_outside(bad, stack).verdict, Verdict::Indeterminate);
}

TEST(Monotone, SamplesInsideReactiveAreasAreIgnored) {
  PathSpec path{{circle(2.0)}, {1.0}, 1};
  const std::vector<Obstacle> obs{unit_obstacle()};
  const FieldStack stack(path);
  // The increase happens between samples inside the obstacle.
  const auto traj = polyline({{0.5, 0}, {0.2, 0}, {0.0, 0}}, obs);
  EXPECT_EQ(check_monotone_outside(traj, stack).verdict, Verdict::Pass);
}

TEST(Penetrability, Verdicts) {
  const std::vector<Obstacle> obs{unit_obstacle()};
  auto r = check_penetrability(polyline({{2, 0}, {0.9, 0}, {0.9, 0.1}, {2, 0}}, obs));
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_NEAR(r.margin, 0.2, 1e-12);
  EXPECT_EQ(r.params["runs"], 1);

  auto open = polyline({{2, 0}, {0.9, 0}, {0.9, 0.1}}, obs);
  EXPECT_EQ(check_penetrability(open).verdict, Verdict::Indeterminate);
  open.samples.back().field_norm = 1e-6;
  EXPECT_EQ(check_penetrability(open).verdict, Verdict::Fail);
  open.samples.back().field_norm = 1.0;
  open.termination = Termination::Singularity;
  EXPECT_EQ(check_penetrability(open).verdict, Verdict::Fail);
}

TEST(Dwell, Verdicts) {
  const DwellBound bound{0.5, 2.0};
  auto traj = polyline({{0, 0}, {0, 0}});
  traj.samples.back().t = 10.0;
  auto r = check_dwell(traj, bound, 0.01);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_EQ(r.params["switches"], 0);

  traj.switches = {{1.0, 2, 0, Vec::Zero()}, {1.5, 1, 0, Vec::Zero()}, {3.0, 2, 0, Vec::Zero()}};
  r = check_dwell(traj, bound, 0.01);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_NEAR(r.margin, 0.5 - 0.24, 1e-12);

  traj.switches.push_back({3.1, 1, 0, Vec::Zero()});
  r = check_dwell(traj, bound, 0.01);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  EXPECT_DOUBLE_EQ(*r.t_violation, 3.1);
}

TEST(Lyapunov, StaticNormalizedFlow) {
  const auto obs = unit_obstacle();
  auto field = [&](const Vec& p, double) { return normalize(reactive_field(obs, p)); };
  const auto traj = integrate(RobotModel{}, field, xy(2.0, 0.5), SimOptions{1e-4, 2.0});
  const auto r = check_lyapunov(traj, obs, LyapunovLaw::Static);
  EXPECT_EQ(r.verdict, Verdict::Pass) << r.params.dump();

  // Twice as fast as the normalized flow.
  auto fast = [&](const Vec& p, double) { return 2.0 * normalize(reactive_field(obs, p)); };
  const auto wrong = integrate(RobotModel{}, fast, xy(2.0, 0.5), SimOptions{1e-4, 1.0});
  EXPECT_EQ(check_lyapunov(wrong, obs, LyapunovLaw::Static).verdict, Verdict::Fail);
}

TEST(Lyapunov, MovingObstacleDecay) {
  Obstacle obs = unit_obstacle();
  obs.surface = circle(1.0, -1.0, 0.0, planar(0.5, 0.2));
  obs.l = 1.5;
  auto field = [&](const Vec& p, double t) { return reactive_field_moving(obs, p, t); };
  const auto traj = integrate(RobotModel{}, field, xy(2.0, 1.0), SimOptions{1e-4, 3.0});
  const auto r = check_lyapunov(traj, obs, LyapunovLaw::Moving);
  EXPECT_EQ(r.verdict, Verdict::Pass) << r.params.dump();

  // Ignoring the obstacle motion breaks the decay envelope.
  auto stale = [&](const Vec& p, double t) { return reactive_field_2d(obs, p, t); };
  const auto bad = integrate(RobotModel{}, stale, xy(2.0, 1.0), SimOptions{1e-3, 3.0});
  EXPECT_EQ(check_lyapunov(bad, obs, LyapunovLaw::Moving).verdict, Verdict::Fail);
}

TEST(Lyapunov, NoisyUltimateBound) {
  Obstacle obs = unit_obstacle();
  obs.surface = circle(1.0, 0.0, 0.0, planar(0.3, 0.0));
  obs.l = 2.0;
  auto field = [&](const Vec& p, double t) { return reactive_field_moving(obs, p, t, 0.1 * std::sin(7.0 * t)); };
  const auto traj = integrate(RobotModel{}, field, xy(2.0, 1.0), SimOptions{1e-4, 5.0});
  const auto r = check_lyapunov(traj, obs, LyapunovLaw::Noisy, {0.1, 0.5});
  EXPECT_EQ(r.verdict, Verdict::Pass) << r.params.dump();
  EXPECT_NEAR(r.params["bound"].get<double>(), 0.01 / 4.0 * 1.1, 1e-15);
  EXPECT_THROW(check_lyapunov(traj, obs, LyapunovLaw::Noisy, {0.1, 1.5}), PreconditionError);
  EXPECT_THROW(check_lyapunov(traj, obs, LyapunovLaw::Static), PreconditionError);
}

}  // namespace
}  // namespace gvf
