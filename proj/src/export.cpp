#include "gvf/export.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace gvf {
namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const auto& m = traj.model;
  out << "t,x,y";
  if (m.dimension == 3) out << ",z";
  if (m.kind == ModelKind::Dubins) out << ",theta";
  out << ",sigma,region,phi,field_norm\n";
  for (const auto& s : traj.samples) {
    out << num(s.t);
    for (Eigen::Index k = 0; k < s.state.size(); ++k) out << ',' << num(s.state[k]);
    out << ',' << s.sigma << ',' << region_label(s.regions) << ',' << num(s.phi) << ',' << num(s.field_norm) << '\n';
  }
}

void write_grid_csv(std::ostream& out, const FieldProvider& field, const Window& window, int res, double t) {
  if (res < 2) throw InvalidArgument("grid resolution must be at least 2");
  out << "x,y,u,v\n";
  for (int j = 0; j < res; ++j) {
    const double y = window.y0 + window.height() * j / (res - 1);
    for (int i = 0; i < res; ++i) {
      const double x = window.x0 + window.width() * i / (res - 1);
      double u = NAN, v = NAN;
      try {
        const Vec f = field(planar(x, y), t);
        if (f.allFinite()) {
          u = f.x();
          v = f.y();
        }
      } catch (const SingularityError&) {
      }
      out << num(x) << ',' << num(y) << ',' << num(u) << ',' << num(v) << '\n';
    }
  }
}

std::vector<Segment> marching_squares(const std::function<double(double, double)>& f, const Window& window,
                                      int res, double level) {
  if (res < 2) throw InvalidArgument("contour resolution must be at least 2");
  const double hx = window.width() / (res - 1), hy = window.height() / (res - 1);
  std::vector<double> v(static_cast<std::size_t>(res * res));
  for (int j = 0; j < res; ++j) {
    for (int i = 0; i < res; ++i) v[static_cast<std::size_t>(j * res + i)] = f(window.x0 + i * hx, window.y0 + j * hy) - level;
  }
  std::vector<Segment> out;
  for (int j = 0; j + 1 < res; ++j) {
    for (int i = 0; i + 1 < res; ++i) {
      // Corners counterclockwise from bottom-left.
      const Vec2 p[4] = {{window.x0 + i * hx, window.y0 + j * hy},
                         {window.x0 + (i + 1) * hx, window.y0 + j * hy},
                         {window.x0 + (i + 1) * hx, window.y0 + (j + 1) * hy},
                         {window.x0 + i * hx, window.y0 + (j + 1) * hy}};
      const double c[4] = {v[static_cast<std::size_t>(j * res + i)], v[static_cast<std::size_t>(j * res + i + 1)],
                           v[static_cast<std::size_t>((j + 1) * res + i + 1)],
                           v[static_cast<std::size_t>((j + 1) * res + i)]};
      if (!(std::isfinite(c[0]) && std::isfinite(c[1]) && std::isfinite(c[2]) && std::isfinite(c[3]))) continue;
      // Crossing on edge k joins corner k and corner k + 1.
      Vec2 cross[4];
      bool has[4];
      int count = 0;
      for (int k = 0; k < 4; ++k) {
        const double a = c[k], b = c[(k + 1) % 4];
        has[k] = (a >= 0.0) != (b >= 0.0);
        if (has[k]) {
          cross[k] = p[k] + (a / (a - b)) * (p[(k + 1) % 4] - p[k]);
          ++count;
        }
      }
      if (count == 2) {
        int e[2], n = 0;
        for (int k = 0; k < 4; ++k) {
          if (has[k]) e[n++] = k;
        }
        out.push_back({cross[e[0]], cross[e[1]]});
      } else if (count == 4) {
        const double center = f(p[0].x() + 0.5 * hx, p[0].y() + 0.5 * hy) - level;
        if ((center >= 0.0) == (c[0] >= 0.0)) {
          // Corners 1 and 3 are cut off.
          out.push_back({cross[0], cross[1]});
          out.push_back({cross[2], cross[3]});
        } else {
          out.push_back({cross[3], cross[0]});
          out.push_back({cross[1], cross[2]});
        }
      }
    }
  }
  return out;
}

Projection projection_from_string(std::string_view name) {
  if (name == "xy") return Projection::XY;
  if (name == "xz") return Projection::XZ;
  if (name == "yz") return Projection::YZ;
  throw InvalidArgument("unknown projection '" + std::string(name) + "' (expected xy, xz or yz)");
}

std::string render_svg(const Scenario& sc, const RenderOptions& opt) {
  Projection proj = Projection::XY;
  if (sc.dimension == 3) {
    if (!opt.projection) throw InvalidArgument("3D scenarios need a projection (xy, xz or yz)");
    proj = *opt.projection;
  }
  auto lift = [proj](double a, double b) {
    switch (proj) {
      case Projection::XZ: return Vec(a, 0.0, b);
      case Projection::YZ: return Vec(0.0, a, b);
      default: return Vec(a, b, 0.0);
    }
  };
  auto drop = [proj](const Vec& p) {
    switch (proj) {
      case Projection::XZ: return Vec2(p.x(), p.z());
      case Projection::YZ: return Vec2(p.y(), p.z());
      default: return Vec2(p.x(), p.y());
    }
  };

  Window w = sc.window;
  if (sc.dimension == 3 && proj != Projection::XY) {
    // The stored window covers x and y; reuse its extent for the vertical axis.
    const double half = 0.5 * std::max(w.width(), w.height());
    const double a0 = proj == Projection::XZ ? w.x0 : w.y0, a1 = proj == Projection::XZ ? w.x1 : w.y1;
    w = {a0, a1, -half, half};
  }
  const double width = 800.0, pad = 20.0;
  const double height = std::round(width * w.height() / w.width());
  auto sx = [&](double x) { return pad + (x - w.x0) / w.width() * width; };
  auto sy = [&](double y) { return pad + height - (y - w.y0) / w.height() * height; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(width + 2 * pad) << "\" height=\""
      << px(height + 2 * pad) << "\" viewBox=\"0 0 " << px(width + 2 * pad) << ' ' << px(height + 2 * pad)
      << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << px(width + 2 * pad) << "\" height=\"" << px(height + 2 * pad)
      << "\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << px(pad) << "\" y=\"" << px(pad) << "\" width=\"" << px(width) << "\" height=\""
      << px(height) << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n";
  if (w.x0 < 0.0 && w.x1 > 0.0) {
    svg << "<line class=\"axis\" x1=\"" << px(sx(0)) << "\" y1=\"" << px(sy(w.y0)) << "\" x2=\"" << px(sx(0))
        << "\" y2=\"" << px(sy(w.y1)) << "\" stroke=\"#ccc\" stroke-width=\"1\"/>\n";
  }
  if (w.y0 < 0.0 && w.y1 > 0.0) {
    svg << "<line class=\"axis\" x1=\"" << px(sx(w.x0)) << "\" y1=\"" << px(sy(0)) << "\" x2=\"" << px(sx(w.x1))
        << "\" y2=\"" << px(sy(0)) << "\" stroke=\"#ccc\" stroke-width=\"1\"/>\n";
  }

  auto contour = [&](const std::string& cls, const std::function<double(double, double)>& f, double level,
                     const std::string& style) {
    const auto segs = marching_squares(f, w, opt.contour_resolution, level);
    if (segs.empty()) return;
    svg << "<path class=\"" << cls << "\" d=\"";
    for (const auto& s : segs) {
      svg << 'M' << px(sx(s.a.x())) << ' ' << px(sy(s.a.y())) << 'L' << px(sx(s.b.x())) << ' ' << px(sy(s.b.y()));
    }
    svg << "\" fill=\"none\" " << style << "/>\n";
  };

  for (const auto& surface : sc.path.surfaces) {
    contour("path", [&](double a, double b) { return surface.eval(lift(a, b)); }, 0.0,
            "stroke=\"#d62728\" stroke-width=\"2\"");
  }
  for (const auto& obs : sc.obstacles) {
    auto f = [&](double a, double b) { return obs.surface.eval(lift(a, b), opt.time); };
    contour("reactive", f, 0.0, "stroke=\"#2ca02c\" stroke-width=\"1.5\"");
    contour("repulsive", f, obs.c, "stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"");
  }

  static const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
  for (std::size_t k = 0; k < opt.trajectories.size(); ++k) {
    const auto& pts = opt.trajectories[k];
    if (pts.empty()) continue;
    const std::size_t stride = std::max<std::size_t>(1, pts.size() / 2000);
    svg << "<polyline class=\"trajectory\" points=\"";
    for (std::size_t i = 0; i < pts.size(); i += stride) {
      const Vec2 q = drop(pts[i]);
      svg << (i ? " " : "") << px(sx(q.x())) << ',' << px(sy(q.y()));
    }
    const Vec2 last = drop(pts.back());
    if ((pts.size() - 1) % stride != 0) svg << ' ' << px(sx(last.x())) << ',' << px(sy(last.y()));
    svg << "\" fill=\"none\" stroke=\"" << kPalette[k % std::size(kPalette)] << "\" stroke-width=\"1.5\"/>\n";
    const Vec2 first = drop(pts.front());
    svg << "<circle class=\"start\" cx=\"" << px(sx(first.x())) << "\" cy=\"" << px(sy(first.y()))
        << "\" r=\"3\" fill=\"" << kPalette[k % std::size(kPalette)] << "\"/>\n";
  }
  for (const auto& e : opt.equilibria) {
    const Vec2 q = drop(e);
    svg << "<circle class=\"equilibrium\" cx=\"" << px(sx(q.x())) << "\" cy=\"" << px(sy(q.y()))
        << "\" r=\"4\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<Vec> read_trajectory_positions(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("trajectory CSV is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  int ix = -1, iy = -1, iz = -1;
  for (int k = 0; k < static_cast<int>(header.size()); ++k) {
    if (header[static_cast<std::size_t>(k)] == "x") ix = k;
    if (header[static_cast<std::size_t>(k)] == "y") iy = k;
    if (header[static_cast<std::size_t>(k)] == "z") iz = k;
  }
  if (ix < 0 || iy < 0) throw InvalidArgument("trajectory CSV lacks x and y columns");
  std::vector<Vec> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    auto get = [&](int k) { return k >= 0 && k < static_cast<int>(cells.size()) ? std::stod(cells[static_cast<std::size_t>(k)]) : 0.0; };
    out.emplace_back(get(ix), get(iy), get(iz));
  }
  return out;
}

}  // namespace gvf
