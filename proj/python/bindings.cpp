#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "stablefrac/cli.hpp"
#include "stablefrac/densities.hpp"
#include "stablefrac/errors.hpp"
#include "stablefrac/families.hpp"
#include "stablefrac/geometry.hpp"
#include "stablefrac/optimizer.hpp"
#include "stablefrac/spectral.hpp"
#include "stablefrac/verifier.hpp"

namespace py = pybind11;
using namespace sf;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Field to_field(const Grid& g, const Array& a) {
  if (static_cast<std::size_t>(a.size()) != g.size() || a.ndim() != g.dim)
    fail(ErrorKind::SizeMismatch, "array shape does not match the grid");
  return Field(g, std::vector<double>(a.data(), a.data() + a.size()));
}

std::vector<py::ssize_t> shape_of(const Grid& g) { return std::vector<py::ssize_t>(g.dim, g.N); }

Array to_array(const Field& f) {
  Array out(shape_of(f.grid));
  std::copy(f.v.begin(), f.v.end(), out.mutable_data());
  return out;
}

Array to_array(const VectorField& v) {
  auto shape = shape_of(v.grid);
  shape.insert(shape.begin(), v.grid.dim);
  Array out(shape);
  double* p = out.mutable_data();
  for (const auto& c : v.c) p = std::copy(c.begin(), c.end(), p);
  return out;
}

}  // namespace

PYBIND11_MODULE(_stablefrac, mod) {
  mod.doc() = "Anisotropic stable operators on periodic grids";

  static py::exception<Error> err(mod, "StablefracError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      err(e.what());
    }
  });

  py::class_<Grid>(mod, "Grid")
      .def(py::init<int, int, double>(), py::arg("dim"), py::arg("N"), py::arg("L"))
      .def_readonly("dim", &Grid::dim)
      .def_readonly("N", &Grid::N)
      .def_readonly("L", &Grid::L)
      .def_property_readonly("h", &Grid::h)
      .def("coords", [](const Grid& g) {
        py::array_t<double> x(g.N);
        for (int k = 0; k < g.N; ++k) x.mutable_at(k) = g.x(k);
        return x;
      });

  py::class_<StableModel>(mod, "Model")
      .def_property_readonly("alpha", &StableModel::alpha)
      .def_property_readonly("dim", &StableModel::dim)
      .def_property_readonly("nondeg_margin", &StableModel::nondeg_margin)
      .def_property_readonly("sigma_mass", &StableModel::sigma_mass)
      .def("sigma_alpha", [](const StableModel& m, const std::vector<double>& xi) {
        if (static_cast<int>(xi.size()) != m.dim()) fail(ErrorKind::SizeMismatch, "xi has the wrong dimension");
        return m.sigma_alpha(xi.data());
      })
      .def("with_alpha", &StableModel::with_alpha)
      .def("to_json", [](const StableModel& m) { return m.to_json().dump(); });

  mod.def("product_model", &product_model, py::arg("alpha"), py::arg("weights"));
  mod.def("rotational_model", &rotational_model, py::arg("alpha"), py::arg("dim"));
  mod.def("model_from_json", [](const std::string& s) { return model_from_json(nlohmann::json::parse(s)); });

  mod.def("semigroup", [](const StableModel& m, const Grid& g, const Array& f, double t) {
    return to_array(semigroup(m, to_field(g, f), t));
  });
  mod.def("generator", [](const StableModel& m, const Grid& g, const Array& f) {
    return to_array(generator(m, to_field(g, f)));
  });
  mod.def("frac_gradient", [](const StableModel& m, const Grid& g, const Array& f) {
    return to_array(frac_gradient(m, to_field(g, f)));
  });
  mod.def("gaussian_bump", [](const Grid& g, double s) { return to_array(gaussian_bump(g, s)); });

  mod.def("density_1d", &density_1d, py::arg("alpha"), py::arg("x"));
  mod.def("abs_moment", &abs_moment, py::arg("alpha"), py::arg("p"));
  mod.def("moments", [](const StableModel& m, const std::vector<double>& ps) { return moments(m, ps).dump(); });

  mod.def("rectangle_perimeter", [](const StableModel& m, const Grid& g, const std::vector<double>& half,
                                    const std::vector<double>& ts) {
    return to_json(perimeter_cl(m, g, Hyperrectangle{half, {}}, ts)).dump();
  });

  mod.def("registry_names", &registry_names);
  mod.def(
      "evaluate_inequality",
      [](const std::string& name, const StableModel& m, const Grid& g, std::uint64_t seed) {
        CheckInputs in;
        in.seed = seed;
        return evaluate_inequality(name, m, g, in).to_json().dump();
      },
      py::arg("name"), py::arg("model"), py::arg("grid"), py::arg("seed") = 0);

  mod.def("rayleigh_quotient", [](const StableModel& m, const Grid& g, const Array& f, double p) {
    return rayleigh_quotient(m, to_field(g, f), p);
  });
  mod.def(
      "minimize_sobolev",
      [](const StableModel& m, const Grid& g, double p, int max_iter) {
        OptimizeOptions o;
        o.max_iter = max_iter;
        const auto r = minimize_sobolev(m, g, p, o);
        return py::make_tuple(r.to_json().dump(), to_array(r.best.f));
      },
      py::arg("model"), py::arg("grid"), py::arg("p") = 2.0, py::arg("max_iter") = 10000);

  mod.def("cli_run", [](std::vector<std::string> args) {
    args.insert(args.begin(), "stablefrac");
    return cli::run(args);
  });
}
