#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gvf/conditions.hpp"
#include "gvf/export.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::object& o) {
  return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

gvf::Vec to_vec(const std::vector<double>& v) {
  if (v.size() < 2 || v.size() > 3) throw gvf::InvalidArgument("points need 2 or 3 coordinates");
  return gvf::Vec(v[0], v[1], v.size() == 3 ? v[2] : 0.0);
}

std::vector<double> from_vec(const gvf::Vec& v, int dim) { return std::vector<double>(v.data(), v.data() + dim); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Guiding vector fields with reactive obstacle avoidance";

  // Translators are tried newest first, so the base class goes first.
  py::register_exception<gvf::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<gvf::InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<gvf::SingularityError>(m, "SingularityError", PyExc_ArithmeticError);

  m.def("bump_values", [](double c, double l1, double l2, double phi) {
    const auto v = gvf::bump_values({c, l1, l2}, phi);
    return std::make_pair(v.zero_in, v.zero_out);
  }, py::arg("c"), py::arg("l1"), py::arg("l2"), py::arg("phi"), "(zero_in, zero_out) at level phi");
  m.def("equal_level", [](double c, double l1, double l2) { return gvf::equal_level({c, l1, l2}); },
        py::arg("c"), py::arg("l1"), py::arg("l2"));

  m.def("fit_rbf", [](const std::vector<std::vector<double>>& samples, const std::string& basis) {
    std::vector<gvf::Vec> pts;
    for (const auto& s : samples) pts.push_back(to_vec(s));
    const auto fit = gvf::fit_rbf_surface(pts, gvf::radial_basis_from_string(basis));
    return std::make_pair(std::vector<double>(fit.weights.data(), fit.weights.data() + fit.weights.size()), fit.rcond);
  }, py::arg("samples"), py::arg("basis") = "log-quadratic", "RBF weights and reciprocal condition estimate");

  py::class_<gvf::Scenario>(m, "Scenario")
      .def_static("from_dict", [](const py::object& d) { return gvf::parse_scenario(from_py(d)); })
      .def_static("load", [](const std::string& path) { return gvf::load_scenario(path); })
      .def_readonly("name", &gvf::Scenario::name)
      .def_readonly("dimension", &gvf::Scenario::dimension)
      .def_property_readonly("window", [](const gvf::Scenario& s) {
        return std::vector<double>{s.window.x0, s.window.x1, s.window.y0, s.window.y1};
      })
      .def("to_dict", [](const gvf::Scenario& s) { return to_py(gvf::to_json(s)); })
      .def("field", [](const gvf::Scenario& s, const std::vector<double>& p, double t) {
        return from_vec(s.stack()(to_vec(p), t), s.dimension);
      }, py::arg("point"), py::arg("t") = 0.0, "Composite field at a point")
      .def("path_error", [](const gvf::Scenario& s, const std::vector<double>& p) { return s.path.error(to_vec(p)); })
      .def("run", [](const gvf::Scenario& s) {
        gvf::RunResult r;
        {
          py::gil_scoped_release release;
          r = gvf::run_scenario(s);
        }
        return to_py(gvf::run_report(s, r));
      }, "Integrate every initial condition; returns the report as a dict")
      .def("trajectories", [](const gvf::Scenario& s) {
        gvf::RunResult r;
        {
          py::gil_scoped_release release;
          r = gvf::run_scenario(s);
        }
        std::vector<std::vector<std::vector<double>>> out;
        for (const auto& run : r.runs) {
          std::vector<std::vector<double>> rows;
          for (const auto& sample : run.trajectory.samples) {
            std::vector<double> row{sample.t};
            row.insert(row.end(), sample.state.data(), sample.state.data() + sample.state.size());
            rows.push_back(std::move(row));
          }
          out.push_back(std::move(rows));
        }
        return out;
      }, "Rows of (t, state...) per initial condition")
      .def("equilibria", [](const gvf::Scenario& s, std::optional<std::vector<double>> window, int grid_n) {
        gvf::Window w = s.window;
        if (window) {
          if (window->size() != 4) throw gvf::InvalidArgument("window needs x0, x1, y0, y1");
          w = {(*window)[0], (*window)[1], (*window)[2], (*window)[3]};
        }
        const auto found = gvf::find_equilibria(gvf::composite_field(s.stack()), w, grid_n);
        json list = json::array();
        for (const auto& e : found.equilibria) list.push_back(gvf::to_json(e));
        return to_py(list);
      }, py::arg("window") = py::none(), py::arg("grid_n") = 192)
      .def("index_census", [](const gvf::Scenario& s, std::size_t obstacle, const std::string& boundary) {
        if (obstacle >= s.obstacles.size()) throw gvf::InvalidArgument("no such obstacle");
        if (boundary != "reactive" && boundary != "repulsive") {
          throw gvf::InvalidArgument("boundary must be reactive or repulsive");
        }
        const double level = boundary == "reactive" ? 0.0 : s.obstacles[obstacle].c;
        return to_py(gvf::to_json(gvf::index_census(s.stack(), obstacle, level)));
      }, py::arg("obstacle") = 0, py::arg("boundary") = "reactive")
      .def("escape_census", [](const gvf::Scenario& s, int seeds) { return to_py(gvf::to_json(gvf::escape_census(s, seeds))); },
           py::arg("seeds") = 8)
      .def("conditions", [](const gvf::Scenario& s) {
        auto j = gvf::to_json(gvf::condition_report(s));
        j["geometry_warnings"] = gvf::geometry_warnings(s);
        return to_py(j);
      })
      .def("svg", [](const gvf::Scenario& s, const std::string& projection) {
        gvf::RenderOptions opt;
        if (!projection.empty()) opt.projection = gvf::projection_from_string(projection);
        return gvf::render_svg(s, opt);
      }, py::arg("projection") = "");
}
