// Python module exposing the scenario model, the performance metrics, and the
// design entry points.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crc/codesign.hpp"
#include "crc/comm_metrics.hpp"
#include "crc/experiments.hpp"
#include "crc/radar_metrics.hpp"
#include "crc/scenario.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_pycrc, m) {
  m.doc() = "joint radar/communication coexistence design";

  py::class_<crc::SystemDims>(m, "SystemDims")
      .def(py::init<>())
      .def_readwrite("mt", &crc::SystemDims::mt)
      .def_readwrite("mr", &crc::SystemDims::mr)
      .def_readwrite("nt", &crc::SystemDims::nt)
      .def_readwrite("nr", &crc::SystemDims::nr)
      .def_readwrite("d", &crc::SystemDims::d)
      .def_readwrite("k_pulse", &crc::SystemDims::k_pulse)
      .def_readwrite("k_pri", &crc::SystemDims::k_pri);

  py::class_<crc::ScenarioInstance>(m, "ScenarioInstance")
      .def_property_readonly("dims", [](const crc::ScenarioInstance& s) { return s.dims; })
      .def_readonly("p_r", &crc::ScenarioInstance::p_r)
      .def_readonly("p_b", &crc::ScenarioInstance::p_b)
      .def_readonly("sigma_r_sq", &crc::ScenarioInstance::sigma_r_sq)
      .def_readonly("sigma_c_sq", &crc::ScenarioInstance::sigma_c_sq);

  m.def("default_scenario_json",
        []() { return crc::scenario_config_to_json_text(crc::ScenarioConfig{}); },
        "built-in scenario recipe as JSON text");
  m.def(
      "sample_scenario",
      [](const std::string& json_text, std::uint64_t seed) {
        return crc::sample_scenario(crc::scenario_config_from_json_text(json_text), seed);
      },
      py::arg("config_json"), py::arg("seed"), "draw one scenario from a JSON recipe");

  m.def("avg_rate", &crc::avg_rate, py::arg("scenario"), py::arg("precoder"), py::arg("waveform"),
        "average downlink rate in nats under radar interference");
  m.def(
      "mi_via_lemma1",
      [](const crc::ScenarioInstance& inst, const crc::MatC& v, const crc::VecC& s) {
        return crc::mi_via_lemma1(inst, crc::vec(v), s);
      },
      py::arg("scenario"), py::arg("precoder"), py::arg("waveform"),
      "the same average rate along the block-determinant route");
  m.def("radar_sinr", &crc::radar_sinr, py::arg("scenario"), py::arg("filter"),
        py::arg("waveform"), py::arg("precoder"), "radar output SINR for a given filter");
  m.def(
      "update_receive_filter",
      [](const crc::ScenarioInstance& inst, const crc::MatC& v, const crc::VecC& s) {
        const crc::ReceiveFilter f = crc::update_receive_filter(inst, v, s);
        return py::make_tuple(f.w, f.sinr);
      },
      py::arg("scenario"), py::arg("precoder"), py::arg("waveform"),
      "SINR-optimal receive filter and its SINR");
  m.def(
      "reference_waveform",
      [](const crc::ScenarioInstance& inst) {
        return crc::reference_waveform_lfm(inst.dims, inst.p_r);
      },
      py::arg("scenario"), "chirp reference waveform at the scenario's energy budget");
  m.def("initial_precoder",
        [](const crc::ScenarioInstance& inst) {
          return crc::initial_precoder(inst.dims, inst.p_b);
        },
        py::arg("scenario"), "uniform full-power starting precoder");
  m.def("papr", &crc::papr_of, py::arg("waveform"), "peak-to-average power ratio");

  py::class_<crc::CodesignResult>(m, "CodesignResult")
      .def_readonly("precoder", &crc::CodesignResult::v)
      .def_readonly("waveform", &crc::CodesignResult::s)
      .def_property_readonly("filter",
                             [](const crc::CodesignResult& r) { return r.filter.w; })
      .def_readonly("sinr", &crc::CodesignResult::sinr)
      .def_readonly("rate_nats", &crc::CodesignResult::rate_nats)
      .def_readonly("leakage", &crc::CodesignResult::leakage)
      .def_readonly("outer_iterations", &crc::CodesignResult::outer_iterations)
      .def_readonly("converged", &crc::CodesignResult::converged)
      .def_readonly("precoder_feasible", &crc::CodesignResult::precoder_feasible)
      .def_readonly("waveform_feasible", &crc::CodesignResult::waveform_feasible)
      .def_property_readonly("history", [](const crc::CodesignResult& r) {
        py::list rows;
        for (const auto& h : r.history)
          rows.append(py::make_tuple(h.outer_iter, h.sinr_db, h.rate_nats));
        return rows;
      });

  m.def(
      "run_codesign",
      [](const crc::ScenarioInstance& inst, const std::string& mode, const std::string& baseline,
         double mi_min, double similarity, double papr_bound, double outer_tol,
         int outer_max_iter) {
        crc::CodesignParams params;
        params.mode = mode == "papr" ? crc::WaveformMode::papr : crc::WaveformMode::similarity;
        params.baseline = crc::parse_baseline(baseline);
        params.mi_min = mi_min;
        params.similarity = similarity;
        params.papr_bound = papr_bound;
        params.outer_tol = outer_tol;
        params.outer_max_iter = outer_max_iter;
        return crc::run_codesign(inst, params);
      },
      py::arg("scenario"), py::arg("mode") = "similarity", py::arg("baseline") = "none",
      py::arg("mi_min") = 7.0, py::arg("similarity") = 0.7, py::arg("papr_bound") = 3.0,
      py::arg("outer_tol") = 1e-3, py::arg("outer_max_iter") = 30,
      "alternating joint design of precoder, waveform, and receive filter");
}
