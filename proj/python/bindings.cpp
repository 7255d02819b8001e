// Python bindings: the full pipeline plus a few kernels useful from notebooks.

#include "flowmesher/delaunay.hpp"
#include "flowmesher/error.hpp"
#include "flowmesher/flow.hpp"
#include "flowmesher/pipeline.hpp"
#include "flowmesher/postopt.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
namespace fm = flowmesher;

namespace {

using Points = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<fm::Vec3> to_points(const Points& a) {
  if (a.ndim() != 2 || (a.shape(1) != 2 && a.shape(1) != 3)) throw py::value_error("expected an (n, 2) or (n, 3) array");
  auto r = a.unchecked<2>();
  std::vector<fm::Vec3> out;
  out.reserve(static_cast<std::size_t>(a.shape(0)));
  for (py::ssize_t i = 0; i < a.shape(0); ++i) out.emplace_back(r(i, 0), r(i, 1), a.shape(1) == 3 ? r(i, 2) : 0.0);
  return out;
}

py::array_t<double> from_points(const std::vector<fm::Vec3>& pts) {
  py::array_t<double> out({static_cast<py::ssize_t>(pts.size()), py::ssize_t{3}});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (int k = 0; k < 3; ++k) w(i, k) = pts[i][k];
  return out;
}

py::array_t<int> elements(const fm::SimplexMesh& m) {
  const auto s = static_cast<py::ssize_t>(m.stride());
  py::array_t<int> out({static_cast<py::ssize_t>(m.num_elements()), s});
  std::copy(m.connectivity.begin(), m.connectivity.end(), out.mutable_data());
  return out;
}

py::dict run(const std::filesystem::path& input, std::optional<double> h,
             const std::vector<std::vector<double>>& fixed, const std::vector<std::vector<double>>& anchors,
             std::optional<std::vector<double>> radial, std::uint64_t seed, bool postopt,
             std::optional<std::filesystem::path> output) {
  fm::RunConfig cfg;
  cfg.input = input;
  cfg.h = h;
  for (const auto& f : fixed) {
    if (f.size() != 3 && f.size() != 4) throw py::value_error("fixed nodes are (x, y, z) or (x, y, z, h)");
    fm::FixedNode node{fm::Vec3(f[0], f[1], f[2]), std::nullopt};
    if (f.size() == 4) node.size = f[3];
    cfg.fixed.push_back(node);
  }
  for (const auto& a : anchors) {
    if (a.size() != 4) throw py::value_error("anchors are (x, y, z, h)");
    cfg.anchors.push_back({fm::Vec3(a[0], a[1], a[2]), a[3]});
  }
  if (radial) {
    if (radial->size() != 3) throw py::value_error("radial is (r, inner_radius, falloff)");
    cfg.radial = fm::RadialLinear{.r = (*radial)[0], .inner_radius = (*radial)[1], .falloff = (*radial)[2]};
  }
  cfg.flow.seed = seed;
  cfg.postopt = postopt;

  fm::RunResult r;
  {
    py::gil_scoped_release release;
    r = fm::run_pipeline(cfg);
    if (output) {
      cfg.output_dir = *output;
      fm::write_outputs(cfg, r);
    }
  }
  std::vector<fm::Vec3> nodes;
  nodes.reserve(r.mesh.nodes.size());
  for (const auto& p : r.mesh.nodes) nodes.push_back(r.domain.frame.to_input(p));

  py::dict d;
  d["nodes"] = from_points(nodes);
  d["elements"] = elements(r.mesh);
  d["boundary"] = py::array_t<std::uint8_t>(static_cast<py::ssize_t>(r.mesh.boundary.size()), r.mesh.boundary.data());
  d["e_avg"] = r.report.e_avg;
  d["angles"] = py::array_t<double>(static_cast<py::ssize_t>(r.report.angles.size()), r.report.angles.data());
  d["histogram"] = std::vector<std::size_t>(r.report.histogram.begin(), r.report.histogram.end());
  d["min_quality"] = r.report.min_quality;
  d["converged"] = r.converged;
  d["wall_time"] = r.wall_time;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Particle-flow triangle and tetrahedron mesh generation.";

  static py::exception<fm::Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const fm::IoError& e) {
      PyErr_SetString(PyExc_FileNotFoundError, e.what());
    } catch (const fm::Error& e) {
      error(e.what());
    }
  });

  m.def("mesh", &run, py::arg("input"), py::kw_only(), py::arg("h") = py::none(),
        py::arg("fixed") = std::vector<std::vector<double>>{}, py::arg("anchors") = std::vector<std::vector<double>>{},
        py::arg("radial") = py::none(), py::arg("seed") = 1, py::arg("postopt") = true,
        py::arg("output") = py::none(),
        "Mesh an OBJ domain. Returns nodes (input frame), elements, boundary flags and quality figures.");

  m.def(
      "delaunay",
      [](const Points& pts) {
        const auto p = to_points(pts);
        const auto dim = pts.shape(1) == 2 ? fm::Dimension::Planar2D : fm::Dimension::Solid3D;
        return elements(fm::delaunay(p, dim));
      },
      py::arg("points"), "Delaunay triangulation of (n, 2) or tetrahedralization of (n, 3) points.");

  m.def(
      "tet_quality",
      [](const Points& pts) {
        const auto p = to_points(pts);
        if (p.size() != 4) throw py::value_error("expected four points");
        return fm::tet_quality({p[0], p[1], p[2], p[3]});
      },
      py::arg("points"));

  m.def("kernel", &fm::kernel, py::arg("q"), py::arg("alpha"));
  m.def("update_target_count", &fm::update_target_count, py::arg("n_total"), py::arg("e_avg"), py::arg("k_p") = 0.5,
        py::arg("cap") = 0.25, py::arg("deadband") = 0.02);
}
