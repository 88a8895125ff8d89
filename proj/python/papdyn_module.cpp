#include <map>
#include <optional>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "papdyn/commands.hpp"
#include "papdyn/config.hpp"
#include "papdyn/dde.hpp"
#include "papdyn/error.hpp"
#include "papdyn/fixedpoint.hpp"
#include "papdyn/netmodel.hpp"
#include "papdyn/stability.hpp"

namespace py = pybind11;
using namespace papdyn;

namespace {

Command parse_command(const std::string& name) {
  const auto c = command_from_name(name);
  if (!c) throw py::value_error("unknown command: " + name);
  return *c;
}

py::dict trajectory_dict(const Trajectory& traj) {
  py::list t, x;
  for (std::size_t k = 0; k < traj.nodes(); ++k) {
    t.append(traj.time(k));
    const auto v = traj.value(k);
    x.append(py::cast(std::vector<double>(v.begin(), v.end())));
  }
  py::dict d;
  d["t"] = t;
  d["x"] = x;
  return d;
}

}  // namespace

PYBIND11_MODULE(_papdyn, m) {
  m.doc() = "Pseudo almost periodic delayed neural networks";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<UnboundedError>(m, "UnboundedError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<ContractError>(m, "ContractError", base.ptr());

  m.attr("EXIT_PASS") = static_cast<int>(kExitPass);
  m.attr("EXIT_VERDICT") = static_cast<int>(kExitVerdict);
  m.attr("EXIT_CONFIG") = static_cast<int>(kExitConfig);
  m.attr("EXIT_NUMERICAL") = static_cast<int>(kExitNumerical);

  py::class_<RunConfig>(m, "RunConfig")
      .def_readonly("name", &RunConfig::name)
      .def_property_readonly("n", [](const RunConfig& c) { return c.model.n; })
      .def_property_readonly("theta", [](const RunConfig& c) { return c.model.theta(); })
      .def_property("step", [](const RunConfig& c) { return c.settings.step; },
                    [](RunConfig& c, double h) { c.settings.step = h; })
      .def_property("tol", [](const RunConfig& c) { return c.settings.tol; },
                    [](RunConfig& c, double t) { c.settings.tol = t; })
      .def_property("t_end", [](const RunConfig& c) { return c.settings.t_end; },
                    [](RunConfig& c, double t) { c.settings.t_end = t; })
      .def("to_json", &emit_config)
      .def("__eq__", [](const RunConfig& a, const RunConfig& b) { return a == b; });

  m.def("parse_config", [](const std::string& text) { return parse_config(text); }, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));

  m.def(
      "run_command",
      [](const RunConfig& cfg, const std::string& command) {
        CommandResult r;
        {
          py::gil_scoped_release release;
          r = run_command(cfg, parse_command(command));
        }
        py::dict d;
        d["exit_code"] = r.exit_code;
        d["text"] = r.text;
        d["json"] = r.json;
        d["artifacts"] = py::cast(std::map<std::string, std::string>(r.artifacts.begin(), r.artifacts.end()));
        return d;
      },
      py::arg("config"), py::arg("command"));

  m.def(
      "constants",
      [](const RunConfig& cfg) {
        const HypothesisReport rep = check_hypotheses(cfg.model, cfg.mu, cfg.nu, cfg.hypothesis_options());
        py::dict d;
        d["c_star"] = rep.c_star;
        d["L"] = rep.L;
        if (rep.m7) {
          d["p1"] = rep.m7->p1;
          d["q1"] = rep.m7->q1;
        }
        d["ball_radius"] = rep.ball_radius ? py::cast(*rep.ball_radius) : py::none();
        d["overall_pass"] = rep.overall_pass;
        return d;
      },
      py::arg("config"));

  m.def(
      "simulate",
      [](const RunConfig& cfg, std::optional<double> t_end, std::optional<double> step) {
        return trajectory_dict(integrate(cfg.model, t_end.value_or(cfg.settings.t_end), step.value_or(cfg.settings.step)));
      },
      py::arg("config"), py::arg("t_end") = py::none(), py::arg("step") = py::none());

  m.def(
      "picard_solve",
      [](const RunConfig& cfg) {
        PicardResult r;
        {
          py::gil_scoped_release release;
          r = picard_solve(cfg.model);
        }
        py::dict d;
        d["converged"] = r.converged;
        d["iterations"] = r.iterations;
        d["sup_diffs"] = r.sup_diffs;
        d["empirical_ratio"] = r.empirical_ratio;
        d["residual"] = r.residual;
        d["radius"] = r.radius;
        d["distance"] = r.distance;
        d["t_lo"] = r.t_lo;
        d["t_hi"] = r.t_hi;
        d["compare_lo"] = r.compare_lo;
        d["q"] = r.q;
        return d;
      },
      py::arg("config"));

  m.def(
      "decay_rate",
      [](const RunConfig& cfg, double safety) {
        const DecayCertificate c = decay_rate(cfg.model, safety);
        py::dict d;
        d["eps_star"] = c.eps_star;
        d["eta"] = c.eta;
        d["lambda"] = c.lambda;
        d["M"] = c.M;
        d["margin_check"] = c.margin_check;
        d["c_star"] = c.c_star;
        return d;
      },
      py::arg("config"), py::arg("safety") = 0.99);

  m.def(
      "margin_check", [](const RunConfig& cfg, double lambda) { return margin_check(cfg.model, lambda); },
      py::arg("config"), py::arg("lambda_"));
}
