#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nlevel/expm.hpp"
#include "nlevel/model.hpp"
#include "nlevel/oracle.hpp"
#include "nlevel/propagator.hpp"
#include "nlevel/roots.hpp"
#include "nlevel/scenario.hpp"

namespace py = pybind11;
using namespace nlevel;

namespace {

std::optional<Method> method_arg(const std::optional<std::string>& name) {
  if (!name || *name == "auto") return std::nullopt;
  return parse_method(*name);
}

py::dict report_dict(const ConditionReport& r) {
  py::dict residuals;
  for (const auto& item : r.residuals) residuals[py::str(item.label)] = item.value;
  py::dict d;
  d["satisfied"] = r.satisfied;
  d["worst"] = r.worst;
  d["tolerance"] = r.tolerance;
  d["residuals"] = residuals;
  return d;
}

StateVector state_arg(const ComplexVector& amplitudes) { return StateVector::normalized(amplitudes); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Closed-form propagators for laser-driven n-level atoms";

  auto& base = py::register_exception<Error>(m, "NlevelError", PyExc_RuntimeError);
  py::register_exception<ConditionViolation>(m, "ConditionViolation", base.ptr());

  py::class_<Coupling>(m, "Coupling")
      .def(py::init([](int i, int j, double g, double omega, double phi) {
             return Coupling{i, j, g, omega, phi};
           }),
           py::arg("i"), py::arg("j"), py::arg("g"), py::arg("omega"), py::arg("phi") = 0.0)
      .def_readonly("i", &Coupling::i)
      .def_readonly("j", &Coupling::j)
      .def_readonly("g", &Coupling::g)
      .def_readonly("omega", &Coupling::omega)
      .def_readonly("phi", &Coupling::phi);

  py::class_<LevelSystem>(m, "LevelSystem")
      .def(py::init<std::vector<double>, std::vector<Coupling>>(), py::arg("energies"),
           py::arg("couplings"))
      .def_property_readonly("n", &LevelSystem::size)
      .def_property_readonly("energies", &LevelSystem::energies)
      .def_property_readonly("couplings", &LevelSystem::couplings);

  m.def("build_coupling_matrix",
        [](const LevelSystem& s) { return RealMatrix(build_coupling_matrix(s).matrix()); });
  m.def("check_resonance",
        [](const LevelSystem& s, std::optional<double> tol) {
          return report_dict(check_resonance(s, tol.value_or(default_condition_tolerance(s))));
        },
        py::arg("system"), py::arg("tol") = py::none());
  m.def("check_consistency",
        [](const LevelSystem& s, std::optional<double> tol) {
          return report_dict(check_consistency(s, tol.value_or(default_condition_tolerance(s))));
        },
        py::arg("system"), py::arg("tol") = py::none());
  m.def("frame_matrix", &frame_matrix, py::arg("system"), py::arg("t"));
  m.def("hamiltonian_rwa", &hamiltonian_rwa, py::arg("system"), py::arg("t"));
  m.def("hamiltonian_full", &hamiltonian_full, py::arg("system"), py::arg("t"));
  m.def("full_solution",
        [](const LevelSystem& s, const ComplexVector& psi0, double t,
           std::optional<std::string> method) {
          return ComplexVector(full_solution(s, state_arg(psi0), t, method_arg(method)).amplitudes());
        },
        py::arg("system"), py::arg("psi0"), py::arg("t"), py::arg("method") = py::none());

  m.def("char_poly_3", [](const RealMatrix& q) {
    const CubicCoeffs c = char_poly_3(CouplingMatrix(q));
    return std::pair{c.c1, c.c0};
  });
  m.def("char_poly_4", [](const RealMatrix& q) {
    const QuarticCoeffs c = char_poly_4(CouplingMatrix(q));
    return std::tuple{c.p, c.q, c.r};
  });
  m.def("solve_cubic_depressed",
        [](double c1, double c0) { return solve_cubic_depressed({c1, c0}).eigenvalues; },
        py::arg("c1"), py::arg("c0"));
  m.def("solve_quartic",
        [](double p, double q, double r) { return solve_quartic({p, q, r}).eigenvalues; },
        py::arg("p"), py::arg("q"), py::arg("r"));
  m.def("closed_form_spectrum",
        [](const RealMatrix& q) { return closed_form_spectrum(CouplingMatrix(q)).eigenvalues; });

  m.def("jacobi_eigendecompose", [](const RealMatrix& q) {
    const EigenDecomposition d = jacobi_eigendecompose(CouplingMatrix(q));
    return std::pair{d.spectrum.eigenvalues, d.vectors};
  });
  m.def("eigenvectors_three_level", [](const RealMatrix& q) {
    const CouplingMatrix cq(q);
    return RealMatrix(eigenvectors_three_level(cq, closed_form_spectrum(cq)).vectors);
  });
  m.def("propagator",
        [](const RealMatrix& q, double t, std::optional<std::string> method) {
          const Propagator p = propagator(CouplingMatrix(q), t, method_arg(method));
          return std::pair{p.matrix, std::string(to_string(p.method))};
        },
        py::arg("q"), py::arg("t"), py::arg("method") = py::none());
  m.def("propagator_equal_coupling",
        [](int n, double g, double t) { return propagator_equal_coupling(n, g, t).matrix; },
        py::arg("n"), py::arg("g"), py::arg("t"));
  m.def("reference_expm", &reference_expm, py::arg("a"));

  m.def("integrate_schrodinger",
        [](const std::function<ComplexMatrix(double)>& h, const ComplexVector& psi0, double t_end,
           int samples, double rel_tol, double abs_tol) {
          IntegrationConfig cfg;
          cfg.rel_tol = rel_tol;
          cfg.abs_tol = abs_tol;
          TimeSeries ts = integrate_schrodinger(h, state_arg(psi0), t_end, samples, cfg);
          ComplexMatrix states(static_cast<Eigen::Index>(ts.states.size()), psi0.size());
          for (std::size_t k = 0; k < ts.states.size(); ++k)
            states.row(static_cast<Eigen::Index>(k)) = ts.states[k].transpose();
          return std::pair{ts.times, states};
        },
        py::arg("hamiltonian"), py::arg("psi0"), py::arg("t_end"), py::arg("samples"),
        py::arg("rel_tol") = 1e-9, py::arg("abs_tol") = 1e-12);
  m.def("rwa_error",
        [](const LevelSystem& s, const ComplexVector& psi0, double t_end, int samples) {
          return rwa_error(s, state_arg(psi0), t_end, samples);
        },
        py::arg("system"), py::arg("psi0"), py::arg("t_end"), py::arg("samples"));

  m.def("serialize_scenario",
        [](const std::string& text) { return serialize_scenario(parse_scenario(text)); },
        "Parse a scenario JSON document and serialize it in canonical form");
}
