#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "obro/bess.hpp"
#include "obro/config.hpp"
#include "obro/engine.hpp"
#include "obro/error.hpp"
#include "obro/master.hpp"
#include "obro/subproblem.hpp"

namespace py = pybind11;
using namespace obro;

namespace {

std::vector<std::vector<double>> functions_of(const Scenario& scen) {
  std::vector<std::vector<double>> out;
  for (const auto& f : scen.functions) out.emplace_back(f.values().begin(), f.values().end());
  return out;
}

py::dict scenario_dict(const Scenario& scen) {
  py::dict d;
  d["functions"] = functions_of(scen);
  d["deviations"] = scen.deviations;
  return d;
}

ObroProblem from_config(const Config& cfg, const std::string& scheme) { return problem_from_config(cfg, scheme); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Function-generation solver for discretized robust problems with uncertain functions";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidInput>(m, "InvalidInput", error);
  auto failure = py::register_exception<SolverFailure>(m, "SolverFailure", error);
  py::register_exception<ProblemInfeasible>(m, "ProblemInfeasible", failure);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", error);

  m.def("degradation_reference", &bess::degradation_reference, py::arg("power"), py::arg("dt"), py::arg("e_max"));
  m.def("degradation_curve", &bess::degradation_curve, py::arg("power"), py::arg("dt"), py::arg("e_max"),
        py::arg("a"), py::arg("b"));
  m.def(
      "make_partition",
      [](double lo, double hi, double step) {
        const auto part = make_partition(lo, hi, EvenScheme{step});
        return std::vector<double>(part.points().begin(), part.points().end());
      },
      py::arg("lo"), py::arg("hi"), py::arg("step"));

  py::class_<ObroProblem>(m, "Problem")
      .def_property_readonly("num_vars", &ObroProblem::num_vars)
      .def_property_readonly("num_evals", &ObroProblem::num_evals)
      .def_readonly("names", &ObroProblem::names)
      .def_readonly("lower", &ObroProblem::lower)
      .def_readonly("upper", &ObroProblem::upper)
      .def_readonly("cost", &ObroProblem::cost)
      .def_readonly("epsilon", &ObroProblem::epsilon)
      .def_property_readonly("term_names",
                             [](const ObroProblem& p) {
                               std::vector<std::string> out;
                               for (const auto& t : p.terms) out.push_back(t.name);
                               return out;
                             })
      .def("partition",
           [](const ObroProblem& p, std::size_t i) {
             const auto pts = p.terms.at(i).partition().points();
             return std::vector<double>(pts.begin(), pts.end());
           })
      .def("validate",
           [](const ObroProblem& p) {
             std::vector<std::pair<std::string, std::string>> out;
             for (const auto& v : validate(p).violations) out.emplace_back(v.path, v.message);
             return out;
           })
      .def("evaluate_reference", [](const ObroProblem& p, const std::vector<double>& x) {
        return evaluate_v(p, reference_scenario(p), x);
      });

  m.def(
      "parse_config", [](const std::string& text, const std::string& scheme) { return from_config(parse_config(text), scheme); },
      py::arg("text"), py::arg("scheme") = "", "Problem described by a JSON config string.");
  m.def(
      "load_config",
      [](const std::filesystem::path& path, const std::string& scheme) { return from_config(load_config(path), scheme); },
      py::arg("path"), py::arg("scheme") = "", "Problem described by a JSON config file.");

  py::class_<EngineResult>(m, "EngineResult")
      .def_property_readonly("status", [](const EngineResult& r) { return std::string(to_string(r.status)); })
      .def_readonly("message", &EngineResult::message)
      .def_readonly("x", &EngineResult::x)
      .def_readonly("ub", &EngineResult::ub)
      .def_readonly("lb", &EngineResult::lb)
      .def_readonly("gap", &EngineResult::gap)
      .def_readonly("fixed_point", &EngineResult::fixed_point)
      .def_property_readonly("num_scenarios", [](const EngineResult& r) { return r.scenarios.size(); })
      .def_property_readonly("worst", [](const EngineResult& r) { return scenario_dict(r.scenarios.at(r.worst)); })
      .def_property_readonly("history", [](const EngineResult& r) {
        py::list out;
        for (const auto& h : r.history) {
          py::dict d;
          d["k"] = h.k;
          d["ub"] = h.ub;
          d["lb"] = h.lb;
          d["gap"] = h.gap;
          d["sub_value"] = h.sub_value;
          out.append(d);
        }
        return out;
      });

  m.def(
      "solve",
      [](const ObroProblem& prob, double tol, std::size_t max_iter) {
        EngineOptions opts;
        opts.tol = tol;
        opts.max_iter = max_iter;
        py::gil_scoped_release release;
        return run(prob, opts);
      },
      py::arg("problem"), py::arg("tol") = 1e-2, py::arg("max_iter") = 500);

  m.def(
      "solve_subproblem",
      [](const ObroProblem& prob, const std::vector<double>& x) {
        const auto res = solve_subproblem(prob, x);
        auto d = scenario_dict(res.scenario);
        d["value"] = res.value;
        return d;
      },
      py::arg("problem"), py::arg("x"));

  m.def(
      "solve_master",
      [](const ObroProblem& prob) {
        const auto res = solve_master(prob, {reference_scenario(prob)});
        return py::make_tuple(res.x, res.eta);
      },
      py::arg("problem"), "Master problem over the reference scenario alone.");

  m.def(
      "verify_saddle",
      [](const ObroProblem& prob, const EngineResult& res, double tol) {
        const auto rep = verify_saddle(prob, res, tol);
        py::dict d;
        d["inner_ok"] = rep.inner_ok;
        d["outer_ok"] = rep.outer_ok;
        d["fixed_point_ok"] = rep.fixed_point_ok;
        d["inner_excess"] = rep.inner_excess;
        d["outer_diff"] = rep.outer_diff;
        d["fixed_point_distance"] = rep.fixed_point_distance;
        return d;
      },
      py::arg("problem"), py::arg("result"), py::arg("tol") = 1e-4);
}
