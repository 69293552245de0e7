#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "kindmc/benchmarks.h"
#include "kindmc/cli.h"
#include "kindmc/encoder.h"
#include "kindmc/engine.h"
#include "kindmc/oracle.h"
#include "kindmc/parser.h"
#include "kindmc/report.h"

namespace py = pybind11;
using namespace kindmc;

namespace {

EngineConfig make_config(const std::string &engine, unsigned max_k,
                         const std::optional<std::string> &solver,
                         const std::string &recheck, unsigned timeout_ms, bool validate)
{
  EngineConfig cfg;
  if (engine != "plain" && engine != "extended") {
    throw ConfigError("engine must be 'plain' or 'extended'");
  }
  if (recheck != "same" && recheck != "next") {
    throw ConfigError("target_recheck must be 'same' or 'next'");
  }
  cfg.mode = engine == "plain" ? EngineMode::Plain : EngineMode::Extended;
  cfg.max_k = max_k;
  cfg.solver = resolve_solver_config(solver.value_or("enum"), nullptr);
  cfg.solver.timeout_ms = timeout_ms;
  cfg.target_recheck =
      recheck == "next" ? TargetRecheck::NextIteration : TargetRecheck::SameIteration;
  cfg.validate_witness = validate;
  cfg.validate();
  return cfg;
}

py::dict state_dict(const State &s)
{
  py::dict d;
  for (const auto &[name, v] : s.bindings) {
    d[py::str(name)] = v;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "k-induction model checker core";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<CapError>(m, "CapError", PyExc_ValueError);
  py::register_exception<EngineError>(m, "EngineError", PyExc_RuntimeError);

  py::class_<TransitionSystem>(m, "System")
      .def_property_readonly("state_bits", &TransitionSystem::state_bits)
      .def_property_readonly("input_bits", &TransitionSystem::input_bits)
      .def_property_readonly("variables",
                             [](const TransitionSystem &s) {
                               std::vector<std::string> names;
                               for (const auto &v : s.vars) {
                                 names.push_back(v.name);
                               }
                               return names;
                             })
      .def_property_readonly("properties",
                             [](const TransitionSystem &s) {
                               std::vector<std::string> names;
                               for (const auto &p : s.props) {
                                 names.push_back(p.name);
                               }
                               return names;
                             })
      .def("to_text", &print_system)
      .def("__repr__", [](const TransitionSystem &s) {
        return "<System " + std::to_string(s.vars.size()) + " vars, "
               + std::to_string(s.props.size()) + " props>";
      });

  m.def("parse_system", &parse_system, py::arg("text"), py::arg("source") = "<input>");
  m.def("load", [](const std::string &path) { return parse_file(path); }, py::arg("path"));
  m.def(
      "generate",
      [](const std::string &family, uint64_t depth, bool buggy) {
        auto f = family_from_string(family);
        if (!f) {
          throw ConfigError("unknown benchmark family '" + family + "'");
        }
        return generate_benchmark({*f, depth, buggy});
      },
      py::arg("family"), py::arg("depth"), py::arg("buggy") = true);

  m.def(
      "verify_json",
      [](const TransitionSystem &sys, const std::string &engine, unsigned max_k,
         const std::optional<std::string> &solver, const std::string &recheck,
         unsigned timeout_ms, bool validate, const std::string &name) {
        EngineConfig cfg = make_config(engine, max_k, solver, recheck, timeout_ms, validate);
        VerificationReport r;
        {
          py::gil_scoped_release release;
          r = run(sys, cfg);
        }
        return report_to_json(name, r, "");
      },
      py::arg("system"), py::arg("engine") = "extended", py::arg("max_k") = 100,
      py::arg("solver") = py::none(), py::arg("target_recheck") = "same",
      py::arg("timeout_ms") = 0, py::arg("validate") = true, py::arg("name") = "system");

  m.def(
      "compare_json",
      [](const TransitionSystem &sys, unsigned max_k, const std::optional<std::string> &solver,
         const std::string &name) {
        EngineConfig cfg = make_config("extended", max_k, solver, "same", 0, true);
        Comparison c;
        {
          py::gil_scoped_release release;
          c = compare(sys, cfg);
        }
        return std::make_pair(record_to_json(make_record(name, c.plain)),
                              record_to_json(make_record(name, c.extended)));
      },
      py::arg("system"), py::arg("max_k") = 100, py::arg("solver") = py::none(),
      py::arg("name") = "system");

  m.def(
      "bfs_check",
      [](const TransitionSystem &sys, unsigned cap) {
        OracleResult r = bfs_check(sys, {cap, 16});
        py::dict d;
        d["unsafe"] = r.unsafe;
        d["explored"] = r.explored;
        d["depth"] = r.depth;
        if (r.shortest) {
          py::list states;
          for (const auto &s : r.shortest->states) {
            states.append(state_dict(s));
          }
          d["trace"] = states;
          d["violated_prop"] = r.shortest->violated_prop;
        } else {
          d["trace"] = py::none();
          d["violated_prop"] = py::none();
        }
        return d;
      },
      py::arg("system"), py::arg("cap") = 20);

  m.def(
      "base_case_smtlib",
      [](const TransitionSystem &sys, unsigned k) {
        return serialize_smtlib(encode_base_case(sys, k));
      },
      py::arg("system"), py::arg("k"));

  m.def(
      "cli",
      [](const std::vector<std::string> &args) {
        std::ostringstream out, err;
        int rc;
        {
          py::gil_scoped_release release;
          rc = cli_main(args, out, err);
        }
        return py::make_tuple(rc, out.str(), err.str());
      },
      py::arg("args"));
}
