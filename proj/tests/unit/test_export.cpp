#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "gvf/export.hpp"

namespace gvf {
namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(Export, TrajectoryCsvRoundTrip) {
  Trajectory traj;
  for (int k = 0; k < 3; ++k) {
    Sample s;
    s.t = 0.5 * k;
    s.state = State(2);
    s.state << 1.0 + k, -0.25 * k;
    s.regions = {k == 1 ? Region::Mixed : Region::NonReactive};
    s.phi = 0.125 * k;
    s.field_norm = 1.0;
    traj.samples.push_back(s);
  }
  std::ostringstream out;
  write_trajectory_csv(out, traj);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "t,x,y,sigma,region,phi,field_norm");
  EXPECT_EQ(lines[2], "0.5,2,-0.25,1,mixed:0,0.125,1");
  std::istringstream in(out.str());
  const auto pts = read_trajectory_positions(in);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[2], planar(3.0, -0.5));
}

TEST(Export, DubinsCsvHasHeading) {
  Trajectory traj;
  traj.model = RobotModel{ModelKind::Dubins, 2};
  Sample s;
  s.state = State(3);
  s.state << 0.0, 1.0, 0.5;
  traj.samples.push_back(s);
  std::ostringstream out;
  write_trajectory_csv(out, traj);
  EXPECT_EQ(lines_of(out.str())[0], "t,x,y,theta,sigma,region,phi,field_norm");
}

TEST(Export, GridCsv) {
  std::ostringstream out;
  write_grid_csv(out, [](const Vec&, double) { return planar(1.0, -2.0); }, Window{0, 1, 0, 2}, 3);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 10u);
  EXPECT_EQ(lines[0], "x,y,u,v");
  EXPECT_EQ(lines[1], "0,0,1,-2");
  EXPECT_EQ(lines[2], "0.5,0,1,-2");
  EXPECT_EQ(lines[4], "0,1,1,-2");
  EXPECT_EQ(lines[9], "1,2,1,-2");
  EXPECT_THROW(write_grid_csv(out, [](const Vec&, double) { return planar(1, 0); }, Window{}, 1), InvalidArgument);
}

TEST(Export, GridCsvMarksSingularNodes) {
  std::ostringstream out;
  auto field = [](const Vec& p, double) -> Vec {
    if (p.norm() < 1e-12) throw SingularityError("center");
    return p;
  };
  write_grid_csv(out, field, Window{-1, 1, -1, 1}, 3);
  EXPECT_EQ(lines_of(out.str())[5], "0,0,nan,nan");
}

TEST(Export, MarchingSquaresTracesCircle) {
  const auto segs = marching_squares([](double x, double y) { return x * x + y * y - 1.0; }, Window{-2, 2, -2, 2},
                                     161, 0.0);
  ASSERT_FALSE(segs.empty());
  double length = 0.0;
  for (const auto& s : segs) {
    EXPECT_NEAR(s.a.norm(), 1.0, 2e-3);
    EXPECT_NEAR(s.b.norm(), 1.0, 2e-3);
    length += (s.b - s.a).norm();
  }
  EXPECT_NEAR(length, 2.0 * std::numbers::pi, 0.01 * 2.0 * std::numbers::pi);
  EXPECT_TRUE(marching_squares([](double, double) { return 1.0; }, Window{}, 20, 0.0).empty());
}

Scenario tiny_scenario() {
  return parse_scenario(nlohmann::json::parse(R"({
    "path": {"shape": {"kind": "circle", "params": {"radius": 2}}},
    "obstacles": [{"shape": {"kind": "circle", "params": {"center": [2, 0], "radius": 0.5}}, "c": -0.1, "k_r": 1}],
    "sim": {"x0": [[3, 0]], "T": 1}
  })"));
}

TEST(Export, SvgIsDeterministic) {
  const auto s = tiny_scenario();
  RenderOptions opts;
  opts.contour_resolution = 64;
  opts.trajectories = {{planar(3, 0), planar(2.5, 0.5), planar(2, 1)}};
  opts.equilibria = {planar(0.1, 0.2)};
  const auto a = render_svg(s, opts);
  const auto b = render_svg(s, opts);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rfind("<svg", 0), 0u);
  EXPECT_NE(a.find("stroke-dasharray"), std::string::npos);
  EXPECT_NE(a.find("<polyline"), std::string::npos);
  EXPECT_NE(a.find("<circle"), std::string::npos);
}

TEST(Export, SvgNeedsProjectionIn3D) {
  const auto s = parse_scenario(nlohmann::json::parse(R"({
    "path": {"shapes": [{"kind": "plane", "params": {"normal": [0, 0, 1]}},
                        {"kind": "plane", "params": {"normal": [0, 1, 0]}}]},
    "sim": {"x0": [[1, 1, 1]], "T": 1}
  })"));
  EXPECT_THROW(render_svg(s, RenderOptions{}), InvalidArgument);
  RenderOptions opts;
  opts.projection = Projection::XZ;
  opts.contour_resolution = 32;
  EXPECT_NO_THROW(render_svg(s, opts));
  EXPECT_EQ(projection_from_string("yz"), Projection::YZ);
  EXPECT_THROW(projection_from_string("zz"), InvalidArgument);
}

}  // namespace
}  // namespace gvf
