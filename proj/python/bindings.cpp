#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "khd/census.hpp"
#include "khd/detection.hpp"
#include "khd/diagram_io.hpp"
#include "khd/error.hpp"
#include "khd/hfl_search.hpp"
#include "khd/jones.hpp"
#include "khd/khovanov.hpp"

namespace py = pybind11;

namespace {

khd::BigradedGroup compute(const khd::LinkDiagram& d, const std::string& ring, std::optional<int> basepoint,
                           std::size_t workers) {
  const khd::Domain domain = khd::Domain::parse(ring);
  py::gil_scoped_release release;
  if (basepoint) return khd::reduced_khovanov(d, *basepoint, domain, {workers});
  return khd::khovanov_homology(d, domain, {workers});
}

std::string hfl_cases(const std::optional<std::string>& name, int samples, bool lax, int extend) {
  khd::hfl::SearchOptions opts;
  opts.contract = lax ? khd::hfl::Contract::Lax : khd::hfl::Contract::Strict;
  opts.window_extension = 2 * extend;
  if (name) {
    khd::hfl::CaseSpec c = khd::hfl::CaseSpec::parse(*name);
    c.samples = samples;
    return khd::hfl::reports_to_json({khd::hfl::run_case(c, opts)});
  }
  return khd::hfl::reports_to_json(khd::hfl::run_all(samples, opts));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Khovanov homology, T(2,6) detection and the link Floer case search";

  py::register_exception<khd::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<khd::DiagramError>(m, "DiagramError", PyExc_ValueError);
  py::register_exception<khd::AlgebraError>(m, "AlgebraError", PyExc_ArithmeticError);
  py::register_exception<khd::ResourceError>(m, "ResourceError", PyExc_RuntimeError);
  py::register_exception<khd::RuleError>(m, "RuleError", PyExc_RuntimeError);

  py::class_<khd::LinkDiagram>(m, "LinkDiagram")
      .def_property_readonly("crossings", &khd::LinkDiagram::crossing_count)
      .def_property_readonly("components", &khd::LinkDiagram::component_count)
      .def_property_readonly("writhe", &khd::LinkDiagram::writhe)
      .def_property_readonly("arcs", &khd::LinkDiagram::all_arcs)
      .def("pd", &khd::LinkDiagram::pd_tuples)
      .def("mirror", &khd::LinkDiagram::mirror)
      .def("sublink", &khd::LinkDiagram::sublink, py::arg("component"))
      .def("linking_number", [](const khd::LinkDiagram& d, int a, int b) { return khd::linking_number(d, a, b); })
      .def("serialize", [](const khd::LinkDiagram& d) { return khd::serialize_pd(d); })
      .def("__repr__", [](const khd::LinkDiagram& d) {
        return "<LinkDiagram crossings=" + std::to_string(d.crossing_count()) +
               " components=" + std::to_string(d.component_count()) + ">";
      });

  m.def("load_diagram", [](const std::string& text) { return khd::load_diagram(text); }, py::arg("text"),
        "Parse PD or braid JSON.");
  m.def("load_diagram_file", &khd::load_diagram_file, py::arg("path"));
  m.def("braid_closure",
        [](int strands, std::vector<int> word, bool axis) {
          return khd::from_braid_closure(khd::BraidWord{strands, std::move(word)}, axis);
        },
        py::arg("strands"), py::arg("word"), py::arg("axis") = false);

  m.def("khovanov_json", [](const khd::LinkDiagram& d, const std::string& ring, std::optional<int> basepoint,
                            std::size_t workers) { return compute(d, ring, basepoint, workers).to_json(); },
        py::arg("diagram"), py::arg("ring") = "Z", py::arg("basepoint") = py::none(), py::arg("workers") = 1);
  m.def("lee_ranks", [](const khd::LinkDiagram& d) { return khd::lee_homology(d).ranks; }, py::arg("diagram"));
  m.def("jones", [](const khd::LinkDiagram& d) { return khd::kauffman_jones(d).terms(); }, py::arg("diagram"),
        "Unnormalised Jones polynomial as {exponent: coefficient}.");
  m.def("detect_json",
        [](const khd::LinkDiagram& d, std::size_t workers) {
          py::gil_scoped_release release;
          return khd::detect_t26(d, {workers, nullptr}).to_json();
        },
        py::arg("diagram"), py::arg("workers") = 1);
  m.def("census_json",
        [](const std::string& path, std::size_t workers) {
          py::gil_scoped_release release;
          return khd::census_to_json(khd::run_census_file(path, {workers, nullptr}));
        },
        py::arg("path"), py::arg("workers") = 1);
  m.def("hfl_cases_json", &hfl_cases, py::arg("case") = py::none(), py::arg("samples") = 2, py::arg("lax") = false,
        py::arg("extend") = 0);

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)
#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
