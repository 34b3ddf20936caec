#include "qtop/cli.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qtop;

namespace {

// (exit code, report as a JSON string); the Python side decodes it
std::pair<int, std::string> run(RunConfig cfg) {
  CommandResult r;
  {
    py::gil_scoped_release nogil;
    r = run_command(cfg);
  }
  return {r.exitCode, r.report.dump()};
}

RunConfig make_config(const std::string& command, const std::string& graph, const std::vector<long>& ks,
                      const std::optional<std::string>& emax, const std::vector<double>& schedule, int order,
                      unsigned precision, uint64_t seed, const std::string& orientation, long bruteCap) {
  RunConfig cfg;
  cfg.command = command;
  cfg.graph = graph;
  cfg.ks = ks;
  if (emax) cfg.emax = parse_rat(*emax);
  cfg.schedule = schedule;
  cfg.order = order;
  cfg.precision = precision;
  cfg.seed = seed;
  cfg.orientation = orientation;
  cfg.bruteCap = bruteCap;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_qtop, m) {
  m.doc() = "quantum invariants of plumbed 3-manifolds with H-shaped graphs";

  m.def(
      "run",
      [](const std::string& command, const std::string& graph, const std::vector<long>& ks,
         const std::optional<std::string>& emax, const std::vector<double>& schedule, int order, unsigned precision,
         uint64_t seed, const std::string& orientation, long bruteCap) {
        return run(make_config(command, graph, ks, emax, schedule, order, precision, seed, orientation, bruteCap));
      },
      py::arg("command"), py::arg("graph") = "poincare", py::arg("ks") = std::vector<long>{},
      py::arg("emax") = std::nullopt, py::arg("schedule") = std::vector<double>{}, py::arg("order") = 3,
      py::arg("precision") = 128, py::arg("seed") = 42, py::arg("orientation") = "auto", py::arg("brute_cap") = 7);

  m.def("cone_basis", [](const Mat2& S) {
    ConeBasis b = cone_basis(S);
    validate_cone_basis(S, b);
    return b.to_json().dump();
  });

  m.def("dataset_names", &dataset_names);

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_ArithmeticError);
}
