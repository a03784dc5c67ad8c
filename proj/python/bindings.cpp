#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "stochrd/attractor.hpp"
#include "stochrd/cocycle.hpp"
#include "stochrd/errors.hpp"
#include "stochrd/experiment.hpp"
#include "stochrd/semicontinuity.hpp"
#include "stochrd/solver.hpp"

namespace py = pybind11;
using namespace stochrd;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Field to_field(const Grid& grid, const Array& a) {
    if (a.ndim() != 1 || static_cast<std::size_t>(a.shape(0)) != grid.size()) {
        throw InvalidArgument("array length must equal the number of grid points");
    }
    return Field(grid, std::vector<double>(a.data(), a.data() + a.shape(0)));
}

Array to_array(const Field& f) {
    Array out(static_cast<py::ssize_t>(f.size()));
    std::copy(f.values().begin(), f.values().end(), out.mutable_data());
    return out;
}

std::vector<Field> to_fields(const Grid& grid, const std::vector<Array>& arrays) {
    std::vector<Field> out;
    out.reserve(arrays.size());
    for (const auto& a : arrays) out.push_back(to_field(grid, a));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Stochastic reaction-diffusion numerics";
    m.attr("__version__") = kVersion;

    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<WindowExceeded>(m, "WindowExceeded", PyExc_IndexError);
    py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);
    py::register_exception<CalibrationFailure>(m, "CalibrationFailure", PyExc_RuntimeError);

    py::class_<Grid>(m, "Grid")
        .def(py::init([](double half_width, std::size_t points) { return Grid::make(1, half_width, points); }),
             py::arg("half_width") = 8.0, py::arg("points") = 257)
        .def_readonly("half_width", &Grid::half_width)
        .def_readonly("points", &Grid::points)
        .def_property_readonly("spacing", &Grid::spacing)
        .def_property_readonly("x", [](const Grid& g) {
            Array out(static_cast<py::ssize_t>(g.size()));
            for (std::size_t i = 0; i < g.size(); ++i) out.mutable_data()[i] = g.x(i);
            return out;
        });

    py::class_<WienerPath>(m, "WienerPath")
        .def_static("sample", &WienerPath::sample, py::arg("seed"), py::arg("s_max"), py::arg("step") = 1e-3)
        .def("__call__", &WienerPath::value_at)
        .def("shifted", &WienerPath::shifted)
        .def_property_readonly("step", &WienerPath::step)
        .def_property_readonly("t_min", &WienerPath::t_min)
        .def_property_readonly("t_max", &WienerPath::t_max)
        .def_property_readonly("seed", &WienerPath::seed);

    py::class_<ModelSpec>(m, "ModelSpec")
        .def_static("canonical_cubic", &ModelSpec::canonical_cubic)
        .def_static("canonical_periodic", &ModelSpec::canonical_periodic)
        .def("with_alpha", &ModelSpec::with_alpha)
        .def("validate", &ModelSpec::validate)
        .def_readwrite("lam", &ModelSpec::lambda)
        .def_readwrite("alpha", &ModelSpec::alpha)
        .def_readwrite("delta", &ModelSpec::delta);

    m.def("z_value", &z_value, py::arg("path"), py::arg("alpha"), py::arg("t"));

    m.def(
        "solve",
        [](const Grid& grid, const Array& u0, double tau, double t_end, const WienerPath& path,
           const ModelSpec& spec, double dt, const std::string& method) {
            SolveOptions options;
            options.ledger = false;
            const Field u = to_field(grid, u0);
            if (method == "transform") return to_array(solve_u_transform(u, tau, t_end, path, spec, dt, options).final_u);
            if (method == "direct") return to_array(solve_u_direct(u, tau, t_end, path, spec, dt, options).final_u);
            throw InvalidArgument("method must be 'transform' or 'direct'");
        },
        py::arg("grid"), py::arg("u0"), py::arg("tau"), py::arg("t_end"), py::arg("path"), py::arg("spec"),
        py::arg("dt") = 1e-3, py::arg("method") = "transform");

    m.def(
        "phi",
        [](const Grid& grid, double elapsed, double tau, const WienerPath& path, double alpha,
           const Array& u0, const ModelSpec& spec, double dt) {
            return to_array(phi({elapsed, tau, path, alpha, to_field(grid, u0)}, spec, dt));
        },
        py::arg("grid"), py::arg("elapsed"), py::arg("tau"), py::arg("path"), py::arg("alpha"), py::arg("u0"),
        py::arg("spec"), py::arg("dt") = kDefaultDt);

    m.def(
        "l2_norm", [](const Grid& grid, const Array& u) { return std::sqrt(l2_squared(to_field(grid, u))); },
        py::arg("grid"), py::arg("u"));

    m.def(
        "hausdorff_semidist",
        [](const Grid& grid, const std::vector<Array>& a, const std::vector<Array>& b) {
            return hausdorff_semidist(to_fields(grid, a), to_fields(grid, b));
        },
        py::arg("grid"), py::arg("a"), py::arg("b"));

    m.def(
        "absorbing_radius",
        [](double tau, const WienerPath& path, double alpha, const ModelSpec& spec, const Grid& grid,
           double c_abs, double window, double step) {
            return absorbing_radius(tau, path, alpha, spec, grid, {c_abs, window, step});
        },
        py::arg("tau"), py::arg("path"), py::arg("alpha"), py::arg("spec"), py::arg("grid"),
        py::arg("c_abs") = 2.0, py::arg("window") = 30.0, py::arg("step") = 1e-3);

    m.def(
        "validate_dissipativity_json",
        [](const ModelSpec& spec, std::size_t samples) {
            return to_json(validate_dissipativity(spec, SampleBox{}, samples)).dump();
        },
        py::arg("spec"), py::arg("samples") = 41);

    m.def(
        "execute",
        [](const std::string& command, const std::filesystem::path& config, const std::filesystem::path& out) {
            std::ostringstream log;
            const int status = execute(command, load_config(config), out, log);
            return py::make_tuple(status, log.str());
        },
        py::arg("command"), py::arg("config"), py::arg("out"));
}
