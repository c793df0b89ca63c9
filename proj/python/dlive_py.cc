#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dlive/sim.h"

namespace py = pybind11;
using namespace dlive;

namespace {

py::dict check(const std::string& text, uint64_t seed) {
  KernelConfig cfg;
  cfg.seed = seed;
  const CheckReport r = check_problem(parse_problem(text), cfg);
  py::dict d;
  d["verdict"] = verdict_text(r.verdict);
  d["exit_code"] = exit_code(r.verdict);
  d["trace"] = r.trace;
  return d;
}

py::dict falsify_problem(const std::string& text, size_t samples, uint64_t seed, double horizon) {
  SimOptions opt;
  opt.horizon = horizon;
  const FalsifyReport r = falsify_liveness(parse_problem(text), samples, seed, opt);
  py::list rows;
  for (const auto& s : r.samples) {
    py::dict row;
    row["init"] = std::map<std::string, double>(s.init.begin(), s.init.end());
    row["class"] = sample_class_text(s.cls);
    row["event"] = event_text(s.last.kind);
    row["time"] = s.last.time;
    rows.append(row);
  }
  py::dict d;
  d["samples"] = rows;
  d["exit_code"] = r.exit_code();
  d["summary"] = r.summary();
  return d;
}

py::dict simulate_problem(const std::string& text, const std::map<std::string, double>& init,
                          double horizon) {
  const ProblemFile pf = parse_problem(text);
  SimOptions opt;
  opt.horizon = horizon;
  const Trajectory tr = simulate(pf.ode, NumPoint(init.begin(), init.end()), pf.goal, opt);
  py::dict d;
  d["vars"] = tr.vars;
  d["times"] = tr.times;
  d["states"] = tr.states;
  d["event"] = event_text(tr.events.back().kind);
  d["event_time"] = tr.events.back().time;
  return d;
}

std::string lie_text(const std::string& text, const std::string& p, unsigned k) {
  const ProblemFile pf = parse_problem(text);
  return print_polynomial(lie(parse_polynomial(p), pf.ode, k));
}

py::list catalog_results(uint64_t seed) {
  py::list out;
  for (const auto& r : run_catalog(seed)) {
    py::dict d;
    d["id"] = r.id;
    d["pass"] = r.pass();
    d["gate_ok"] = r.gate_ok;
    d["falsifier_ok"] = r.falsifier_ok;
    d["measured"] = r.measured;
    d["detail"] = r.detail;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<KernelError>(m, "KernelError", PyExc_RuntimeError);

  m.def("check", &check, py::arg("text"), py::arg("seed") = 0,
        "Check the proof block of a problem; returns verdict, exit_code and trace.");
  m.def("falsify", &falsify_problem, py::arg("text"), py::arg("samples") = 64, py::arg("seed") = 0,
        py::arg("horizon") = 10.0);
  m.def("simulate", &simulate_problem, py::arg("text"), py::arg("init"),
        py::arg("horizon") = 10.0);
  m.def("lie", &lie_text, py::arg("text"), py::arg("p"), py::arg("k") = 1);
  m.def("catalog", &catalog_results, py::arg("seed") = 0);
  m.def("normalize", [](const std::string& text) { return print_problem(parse_problem(text)); },
        "Parse and pretty-print a problem file.");
}
