#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include <optional>
#include <string>

#include "frobenius/conditional.hpp"
#include "frobenius/core.hpp"
#include "frobenius/errors.hpp"
#include "frobenius/exact.hpp"
#include "frobenius/models.hpp"
#include "frobenius/oracle.hpp"
#include "frobenius/rational.hpp"

namespace py = pybind11;
using namespace frobenius;

namespace {

OracleConfig make_config(const RadialProblem& p, std::optional<double> rho_max, std::optional<int> num_points,
                         int num_states) {
  OracleConfig cfg = default_oracle_config(p, num_states);
  if (rho_max) cfg.rho_max = *rho_max;
  if (num_points) cfg.num_points = *num_points;
  return cfg;
}

py::dict grid_function(const GridFunction& f) {
  py::dict d;
  d["nodes"] = f.nodes();
  d["values"] = f.values();
  d["weights"] = f.weights();
  return d;
}

}  // namespace

PYBIND11_MODULE(_frobenius, m) {
  m.doc() = "Frobenius-series solutions and a numerical oracle for the radial oscillator with Coulomb and linear terms";

  auto base = py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);
  (void)base;

  py::class_<RadialProblem>(m, "RadialProblem")
      .def(py::init([](double gamma, double a, double b) { return RadialProblem{gamma, a, b}; }), py::arg("gamma"),
           py::arg("a") = 0.0, py::arg("b") = 0.0)
      .def_readwrite("gamma", &RadialProblem::gamma)
      .def_readwrite("a", &RadialProblem::a)
      .def_readwrite("b", &RadialProblem::b)
      .def("exponent", &RadialProblem::exponent)
      .def("exactly_solvable", &RadialProblem::exactly_solvable)
      .def("potential", &RadialProblem::potential, py::arg("rho"))
      .def("__repr__", [](const RadialProblem& p) {
        return "RadialProblem(gamma=" + py::repr(py::float_(p.gamma)).cast<std::string>() +
               ", a=" + py::repr(py::float_(p.a)).cast<std::string>() +
               ", b=" + py::repr(py::float_(p.b)).cast<std::string>() + ")";
      });

  py::class_<PolynomialSolution>(m, "PolynomialSolution")
      .def_readonly("s", &PolynomialSolution::s)
      .def_readonly("b_half", &PolynomialSolution::b_half)
      .def_readonly("coeffs", &PolynomialSolution::coeffs)
      .def_readonly("W", &PolynomialSolution::W)
      .def_readonly("step", &PolynomialSolution::step)
      .def("degree", &PolynomialSolution::degree)
      .def("value", &PolynomialSolution::value, py::arg("rho"))
      .def("__call__", &PolynomialSolution::value, py::arg("rho"))
      .def("jet", [](const PolynomialSolution& s, double rho) {
        const auto j = s.jet(rho);
        return py::make_tuple(j.f, j.df, j.d2f);
      }, py::arg("rho"));

  m.def("exponent", py::overload_cast<double>(&exponent), py::arg("gamma"));
  m.def("log_grid", &log_grid, py::arg("lo") = 1e-3, py::arg("hi") = 8.0, py::arg("count") = 200);
  m.def(
      "ode_residual",
      [](const PolynomialSolution& s, const RadialProblem& p, std::optional<std::vector<double>> grid) {
        return grid ? ode_residual(s, p, *grid) : ode_residual(s, p);
      },
      py::arg("solution"), py::arg("problem"), py::arg("grid") = py::none());
  m.def(
      "count_nodes", [](const std::vector<double>& v) { return count_nodes(std::span<const double>(v)); },
      py::arg("values"));

  m.def("exact_eigenvalue", py::overload_cast<int, double>(&exact_eigenvalue), py::arg("nu"), py::arg("gamma"));
  m.def(
      "exact_eigenvalue_rational",
      [](int nu, const std::string& gamma) { return to_string(exact_eigenvalue(nu, parse_rational(gamma))); },
      py::arg("nu"), py::arg("gamma"), "Exact W as a 'p/q' string for a rational gamma given as text.");
  m.def(
      "exact_state",
      [](int nu, double gamma) {
        const auto st = exact_state(nu, gamma);
        return st.solution;
      },
      py::arg("nu"), py::arg("gamma"));
  m.def(
      "exact_coefficients",
      [](int nu, const std::string& gamma) {
        std::vector<std::string> out;
        for (const auto& c : exact_coefficients(nu, parse_rational(gamma))) out.push_back(to_string(c));
        return out;
      },
      py::arg("nu"), py::arg("gamma"));

  m.def("termination_energy", py::overload_cast<int, double, double>(&termination_energy), py::arg("n"),
        py::arg("gamma"), py::arg("b"));
  m.def("second_condition_value", &second_condition_value, py::arg("n"), py::arg("gamma"), py::arg("a"),
        py::arg("b"));
  m.def(
      "coefficient_polynomial",
      [](int n, const std::string& gamma, const std::string& b) {
        std::vector<std::string> out;
        for (const auto& c : coefficient_polynomial(n, parse_rational(gamma), parse_rational(b)).poly) {
          out.push_back(to_string(c));
        }
        return out;
      },
      py::arg("n"), py::arg("gamma"), py::arg("b"),
      "Ascending rational coefficients of c_{n+1}(a); gamma and b are given as text ('1/2', '0.25').");
  m.def("admissible_a", &admissible_a, py::arg("n"), py::arg("gamma"), py::arg("b"));

  py::class_<ConditionalFamily>(m, "ConditionalFamily")
      .def_readonly("n", &ConditionalFamily::n)
      .def_readonly("gamma", &ConditionalFamily::gamma)
      .def_readonly("b", &ConditionalFamily::b)
      .def_readonly("W", &ConditionalFamily::W)
      .def_readonly("roots", &ConditionalFamily::roots)
      .def_readonly("solutions", &ConditionalFamily::solutions)
      .def_readonly("warnings", &ConditionalFamily::warnings)
      .def("problem", &ConditionalFamily::problem, py::arg("i"));
  m.def("conditional_family", &conditional_family, py::arg("n"), py::arg("gamma"), py::arg("b"));
  m.def(
      "closed_form_check_n01",
      [](double gamma, double b, double tolerance) {
        const auto r = closed_form_check_n01(gamma, b, tolerance);
        py::dict d;
        d["passed"] = r.passed;
        d["max_deviation"] = r.max_deviation;
        d["mismatches"] = r.mismatches;
        return d;
      },
      py::arg("gamma"), py::arg("b"), py::arg("tolerance") = 1e-12);

  py::class_<SpectrumEstimate>(m, "SpectrumEstimate")
      .def_readonly("problem", &SpectrumEstimate::problem)
      .def_readonly("eigenvalues", &SpectrumEstimate::eigenvalues)
      .def_readonly("fine_eigenvalues", &SpectrumEstimate::fine_eigenvalues)
      .def_readonly("coarse_eigenvalues", &SpectrumEstimate::coarse_eigenvalues)
      .def_readonly("accuracy", &SpectrumEstimate::accuracy)
      .def_readonly("node_counts", &SpectrumEstimate::node_counts)
      .def_readonly("warnings", &SpectrumEstimate::warnings)
      .def_property_readonly("rho_max", [](const SpectrumEstimate& e) { return e.config.rho_max; })
      .def_property_readonly("num_points", [](const SpectrumEstimate& e) { return e.config.num_points; })
      .def("state", [](const SpectrumEstimate& e, std::size_t k) { return grid_function(e.states.at(k)); },
           py::arg("k"), "Normalized samples of F for state k as a dict of nodes, values and weights.")
      .def("expectation", [](const SpectrumEstimate& e, std::size_t k, const std::string& weight) {
        if (weight != "inv_rho" && weight != "rho") throw ArgumentError("weight must be 'inv_rho' or 'rho'");
        return expectation(e.states.at(k), weight == "rho" ? Weight::rho : Weight::inv_rho);
      }, py::arg("k"), py::arg("weight"));
  m.def(
      "solve_spectrum",
      [](const RadialProblem& p, int num_states, std::optional<double> rho_max, std::optional<int> num_points) {
        return solve_spectrum(p, make_config(p, rho_max, num_points, num_states));
      },
      py::arg("problem"), py::arg("num_states") = 4, py::arg("rho_max") = py::none(),
      py::arg("num_points") = py::none());

  py::class_<HftReport>(m, "HftReport")
      .def_readonly("problem", &HftReport::problem)
      .def_readonly("nu", &HftReport::nu)
      .def_readonly("delta", &HftReport::delta)
      .def_readonly("dW_da_fd", &HftReport::dW_da_fd)
      .def_readonly("expect_inv_rho", &HftReport::expect_inv_rho)
      .def_readonly("dW_db_fd", &HftReport::dW_db_fd)
      .def_readonly("expect_rho", &HftReport::expect_rho)
      .def_readonly("max_rel_error", &HftReport::max_rel_error)
      .def_readonly("valid", &HftReport::valid)
      .def_readonly("note", &HftReport::note);
  m.def(
      "hft_check",
      [](const RadialProblem& p, int nu, double delta) { return hft_check(p, nu, delta); }, py::arg("problem"),
      py::arg("nu") = 0, py::arg("delta") = 1e-3);

  py::class_<FormulaCheck>(m, "FormulaCheck")
      .def_readonly("formula_W", &FormulaCheck::formula_W)
      .def_readonly("nearest_index", &FormulaCheck::nearest_index)
      .def_readonly("nearest_eigenvalue", &FormulaCheck::nearest_eigenvalue)
      .def_readonly("nearest_nodes", &FormulaCheck::nearest_nodes)
      .def_readonly("gap", &FormulaCheck::gap)
      .def_readonly("accuracy", &FormulaCheck::accuracy)
      .def_readonly("threshold", &FormulaCheck::threshold)
      .def_readonly("in_spectrum", &FormulaCheck::in_spectrum);
  m.def(
      "spectrum_vs_formula", [](const RadialProblem& p, double w) { return spectrum_vs_formula(p, w); },
      py::arg("problem"), py::arg("formula_W"));

  // Models travel as JSON text so that the Python side sees plain dicts.
  m.def(
      "_refute_json",
      [](const std::string& text) {
        Model model;
        try {
          from_json(nlohmann::json::parse(text), model);
        } catch (const nlohmann::json::exception& e) {
          throw ArgumentError(std::string("model description: ") + e.what());
        }
        nlohmann::json out = refute(model);
        return out.dump();
      },
      py::arg("model_json"));
  m.def(
      "_canonical_json",
      [](const std::string& text) {
        Model model;
        try {
          from_json(nlohmann::json::parse(text), model);
        } catch (const nlohmann::json::exception& e) {
          throw ArgumentError(std::string("model description: ") + e.what());
        }
        const auto c = to_canonical(model);
        nlohmann::json out = {{"gamma", c.problem.gamma}, {"a", c.problem.a}, {"b", c.problem.b},
                              {"scale", c.scale},         {"mustafa_energy", mustafa_energy(model)}};
        return out.dump();
      },
      py::arg("model_json"));
}
