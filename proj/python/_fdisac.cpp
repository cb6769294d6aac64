#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fdisac/harness.hpp"

namespace py = pybind11;
using namespace fdisac;

namespace {

// Configs and specs cross the boundary as JSON text; the Python side wraps
// them in dicts.
ScenarioConfig config_from(const std::string& text) {
  ScenarioConfig cfg = nlohmann::json::parse(text).get<ScenarioConfig>();
  cfg.validate();
  return cfg;
}

ExperimentSpec spec_from(const std::string& text) {
  ExperimentSpec s = nlohmann::json::parse(text).get<ExperimentSpec>();
  s.validate();
  return s;
}

py::dict point_dict(const DesignPoint& x) {
  py::dict d;
  d["v_cov"] = x.v_cov;
  d["w_cov"] = x.w_cov;
  d["p_ul"] = x.p_ul;
  d["u_rx"] = x.u_rx;
  return d;
}

py::dict evaluate(const ChannelSet& ch, const SensingMasks& masks, const DesignPoint& x) {
  py::dict d = point_dict(x);
  d["sr_dl"] = sum_secrecy_dl(ch, x);
  d["sr_ul"] = sum_secrecy_ul(ch, x);
  d["ismr"] = achieved_ismr(x.transmit_covariance(), masks);
  return d;
}

}  // namespace

PYBIND11_MODULE(_fdisac, m) {
  m.doc() = "Full-duplex ISAC secrecy-rate optimization core";

  m.def("default_config", [] { return nlohmann::json(ScenarioConfig{}).dump(); });

  m.def("steering_vector", &steering_vector, py::arg("n"), py::arg("theta"), py::arg("spacing") = 0.5);

  m.def(
      "solve",
      [](const std::string& cfg_json, int max_iterations, double tolerance, bool warm_start) {
        const ScenarioConfig cfg = config_from(cfg_json);
        IjtbOptions opt;
        opt.max_iterations = max_iterations;
        opt.tolerance = tolerance;
        opt.warm_start = warm_start;
        SolveReport rep;
        ChannelSet ch;
        SensingMasks masks;
        {
          py::gil_scoped_release release;
          ch = make_channel_set(cfg);
          masks = build_sensing_masks(cfg, ch);
          rep = run_ijtb(ch, cfg, masks, opt);
        }
        py::dict d = evaluate(ch, masks, rep.final_point);
        std::vector<double> trace{rep.initial_sr};
        for (const auto& r : rep.iterations) trace.push_back(r.sr_total);
        d["sr_trace"] = trace;
        d["converged"] = rep.converged;
        d["degraded"] = rep.degraded;
        d["status"] = conic::to_string(rep.worst_status());
        d["notes"] = rep.notes;
        return d;
      },
      py::arg("config"), py::arg("max_iterations") = 30, py::arg("tolerance") = 1e-3,
      py::arg("warm_start") = true);

  m.def(
      "benchmark",
      [](const std::string& cfg_json, const std::string& method) {
        const ScenarioConfig cfg = config_from(cfg_json);
        const ChannelSet ch = make_channel_set(cfg);
        const SensingMasks masks = build_sensing_masks(cfg, ch);
        switch (method_from_string(method)) {
          case Method::IsoAn: return evaluate(ch, masks, bench_iso_an(ch, cfg, masks));
          case Method::IsoNoAn: return evaluate(ch, masks, bench_iso_no_an(ch, cfg, masks));
          case Method::Feasible: {
            Rng rng = make_stream(cfg.seed, 0xFEA5, 0);
            const FeasibleDraw f = bench_feasible(ch, cfg, masks, rng);
            py::dict d = evaluate(ch, masks, f.point);
            d["ismr_ok"] = f.ismr_ok;
            d["draws"] = f.draws;
            return d;
          }
          default: throw InvalidArgument("use solve() for ijtb");
        }
      },
      py::arg("config"), py::arg("method"));

  m.def(
      "run_experiment",
      [](const std::string& spec_json, int jobs) {
        const ExperimentSpec spec = spec_from(spec_json);
        ResultTable t;
        {
          py::gil_scoped_release release;
          t = run_experiment(spec, jobs);
        }
        std::ostringstream os;
        write_csv(t, os);
        return py::make_tuple(os.str(), t.all_ok());
      },
      py::arg("spec"), py::arg("jobs") = 1);

  m.def("spec_hash", [](const std::string& spec_json) { return spec_hash(spec_from(spec_json)); });

  m.def("audit", [](const std::string& csv_path) {
    const AuditReport r = audit_results(csv_path);
    return py::make_tuple(r.errors, r.warnings);
  });

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
}
