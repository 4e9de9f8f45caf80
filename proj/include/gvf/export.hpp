#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gvf/scenario.hpp"

namespace gvf {

/// Header t,x,y[,z][,theta],sigma,region,phi,field_norm; numbers as %.9g.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Rows x,y,u,v over a res x res node grid, row-major in y then x. Nodes where
/// the field is singular or non-finite are written as nan,nan.
void write_grid_csv(std::ostream& out, const FieldProvider& field, const Window& window, int res,
                    double t = 0.0);

struct Segment {
  Vec2 a, b;
};

/// Marching-squares segments of {f = level} over a res x res node grid.
/// Ambiguous cells are resolved by the value at the cell center.
std::vector<Segment> marching_squares(const std::function<double(double, double)>& f, const Window& window,
                                      int res, double level);

enum class Projection { XY, XZ, YZ };

Projection projection_from_string(std::string_view name);

struct RenderOptions {
  std::optional<Projection> projection;  // required for 3D scenarios
  int contour_resolution = 256;
  std::vector<std::vector<Vec>> trajectories;
  std::vector<Vec> equilibria;
  double time = 0.0;  // instant at which moving obstacles are drawn
};

/// Deterministic SVG: desired path, reactive (solid) and repulsive (dashed)
/// contours, trajectories and equilibrium markers. In 3D, contours are the
/// sections of the surfaces by the projection plane through the origin.
/// Throws InvalidArgument for a 3D scenario without a projection.
std::string render_svg(const Scenario& scenario, const RenderOptions& options);

/// Reads positions back from a trajectory CSV written by write_trajectory_csv.
std::vector<Vec> read_trajectory_positions(std::istream& in);

}  // namespace gvf
