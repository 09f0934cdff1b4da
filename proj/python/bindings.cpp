#include <optional>
#include <string>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dmm/algorithms.hpp"
#include "dmm/config.hpp"
#include "dmm/delays.hpp"
#include "dmm/domain.hpp"
#include "dmm/error.hpp"
#include "dmm/harness.hpp"
#include "dmm/output.hpp"
#include "dmm/problems.hpp"

namespace py = pybind11;

namespace {

// Records cross the boundary as the same JSON the CLI writes.
py::object as_python(const nlohmann::ordered_json& j) {
  // Looked up per call: a static py::object would outlive the interpreter.
  return py::module_::import("json").attr("loads")(j.dump());
}

dmm::RunConfig config_from(const std::string& text, const py::dict& overrides) {
  dmm::RunConfig c = dmm::parse_config(text);
  for (const auto& [k, v] : overrides) {
    dmm::apply_setting(c, py::str(k).cast<std::string>(), py::str(v).cast<std::string>());
  }
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Delayed gradient descent-ascent and extra-gradient for saddle-point problems";

  py::register_exception<dmm::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<dmm::PreconditionError>(m, "PreconditionError", PyExc_ValueError);

  py::class_<dmm::DomainSet>(m, "DomainSet")
      .def_static("box", py::overload_cast<int, double>(&dmm::DomainSet::Box), py::arg("dim"),
                  py::arg("half_width"))
      .def_static("box_at", py::overload_cast<dmm::Vector, dmm::Vector>(&dmm::DomainSet::Box),
                  py::arg("center"), py::arg("half_widths"))
      .def_static("ball", py::overload_cast<int, double>(&dmm::DomainSet::Ball), py::arg("dim"),
                  py::arg("radius"))
      .def_static("ball_at", py::overload_cast<dmm::Vector, double>(&dmm::DomainSet::Ball),
                  py::arg("center"), py::arg("radius"))
      .def_static("all", &dmm::DomainSet::All, py::arg("dim"))
      .def_property_readonly("dim", &dmm::DomainSet::dim)
      .def_property_readonly("bounded", &dmm::DomainSet::bounded)
      .def("diameter", &dmm::DomainSet::diameter)
      .def("project", &dmm::DomainSet::project, py::arg("p"))
      .def("contains", &dmm::DomainSet::contains, py::arg("p"), py::arg("tol") = 1e-12)
      .def("__repr__", &dmm::DomainSet::describe);

  py::class_<dmm::ProblemConstants>(m, "ProblemConstants")
      .def_readonly("G", &dmm::ProblemConstants::G)
      .def_readonly("L", &dmm::ProblemConstants::L)
      .def_readonly("mu", &dmm::ProblemConstants::mu)
      .def_readonly("D", &dmm::ProblemConstants::D);

  py::class_<dmm::SaddleProblem>(m, "SaddleProblem")
      .def_static("bilinear", &dmm::SaddleProblem::Bilinear, py::arg("dim"), py::arg("domain"))
      .def_static("quadratic_cc", &dmm::SaddleProblem::QuadraticCC, py::arg("coupling"),
                  py::arg("domain_x"), py::arg("domain_y"))
      .def_static(
          "quadratic_scsc",
          [](double mu, const dmm::Matrix& a, std::optional<dmm::DomainSet> dx,
             std::optional<dmm::DomainSet> dy) {
            if (dx && dy) return dmm::SaddleProblem::QuadraticSCSC(mu, a, *dx, *dy);
            if (dx || dy) throw dmm::PreconditionError("give both domains or neither");
            return dmm::SaddleProblem::QuadraticSCSC(mu, a);
          },
          py::arg("mu"), py::arg("coupling"), py::arg("domain_x") = py::none(),
          py::arg("domain_y") = py::none())
      .def_property_readonly("dim", &dmm::SaddleProblem::dim)
      .def_property_readonly("constants", &dmm::SaddleProblem::constants)
      .def("value", &dmm::SaddleProblem::value, py::arg("x"), py::arg("y"))
      .def("grad_x", &dmm::SaddleProblem::grad_x, py::arg("x"), py::arg("y"))
      .def("grad_y", &dmm::SaddleProblem::grad_y, py::arg("x"), py::arg("y"))
      .def("phi", &dmm::SaddleProblem::phi, py::arg("z"))
      .def("saddle", &dmm::SaddleProblem::saddle)
      .def("__repr__", &dmm::SaddleProblem::describe);

  m.def(
      "duality_gap",
      [](const dmm::SaddleProblem& p, const dmm::Vector& x, const dmm::Vector& y,
         std::optional<dmm::DomainSet> restriction) { return dmm::duality_gap(p, x, y, restriction); },
      py::arg("problem"), py::arg("x"), py::arg("y"), py::arg("restriction") = py::none());

  m.def("stepsize_theorem1", &dmm::stepsize_theorem1, py::arg("G"), py::arg("L"),
        py::arg("tau_max"), py::arg("T"));
  m.def("stepsize_theorem2", &dmm::stepsize_theorem2, py::arg("G"), py::arg("L"),
        py::arg("tau_max"), py::arg("T"));
  m.def("stepsize_theorem3", &dmm::stepsize_theorem3, py::arg("mu"), py::arg("L"),
        py::arg("tau_max"));

  m.def(
      "delays",
      [](const std::string& spec, long n) {
        dmm::DelaySchedule s = dmm::DelaySchedule::Parse(spec);
        std::vector<int> out;
        for (long k = 1; k <= n; ++k) out.push_back(s.next_delay(k));
        return out;
      },
      py::arg("spec"), py::arg("n"), "First n raw delays of a schedule spec");

  m.def(
      "run",
      [](const std::string& text, const py::dict& overrides) {
        return as_python(dmm::to_json(dmm::run(config_from(text, overrides))));
      },
      py::arg("config") = "", py::arg("overrides") = py::dict(),
      "Run a key=value config; returns the record as a dict");

  m.def(
      "check_bounds",
      [](const std::string& name, std::optional<long> T, std::optional<int> tau, std::uint64_t seed) {
        return as_python(dmm::to_json(dmm::run(dmm::canned_config(name, T, tau, seed))));
      },
      py::arg("name"), py::arg("T") = py::none(), py::arg("tau_max") = py::none(),
      py::arg("seed") = 0);

  m.def(
      "reproduce_fig1",
      [](long T) {
        const dmm::Fig1Result r = dmm::reproduce_fig1(T);
        py::dict out;
        out["delayed"] = as_python(dmm::to_json(r.delayed));
        out["undelayed"] = as_python(dmm::to_json(r.undelayed));
        out["svg"] = dmm::to_svg(r.series, "Extra-gradient with and without delay");
        return out;
      },
      py::arg("T") = 2000);
}
