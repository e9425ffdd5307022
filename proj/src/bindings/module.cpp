// Copyright 2026 AQEC Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "aqec/harness.hpp"

namespace py = pybind11;
using namespace aqec;

namespace {

RateFunction make_rate(const std::string& type, double gamma0,
                       double amplitude, double omega, double phase) {
    if (type == "constant") return RateFunction::constant(gamma0);
    if (type == "sinusoid")
        return RateFunction::sinusoid(gamma0, amplitude, omega, phase);
    throw std::invalid_argument("rate type must be constant or sinusoid");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "repetition-code syndrome statistics, adaptive matching "
              "weights and blossom decoding";

    py::class_<DetectorId>(m, "DetectorId")
        .def(py::init<int32_t, int32_t>(), py::arg("ancilla"),
             py::arg("round"))
        .def_readwrite("ancilla", &DetectorId::ancilla)
        .def_readwrite("round", &DetectorId::round)
        .def("__repr__", [](const DetectorId& id) {
            return "DetectorId(ancilla=" + std::to_string(id.ancilla) +
                   ", round=" + std::to_string(id.round) + ")";
        });

    py::class_<DetectorErrorModel>(m, "DetectorErrorModel")
        .def_property_readonly("d", &DetectorErrorModel::distance)
        .def_property_readonly("rounds", &DetectorErrorModel::rounds)
        .def_property_readonly("lag", &DetectorErrorModel::lag)
        .def_property_readonly("num_detectors",
                               &DetectorErrorModel::num_detectors)
        .def_property_readonly("num_edges",
                               [](const DetectorErrorModel& model) {
                                   return model.edges().size();
                               })
        .def("to_text", &dem_to_text)
        .def_static("from_text", &dem_from_text);

    py::class_<RateFunction>(m, "RateFunction")
        .def(py::init(&make_rate), py::arg("type"), py::arg("gamma0"),
             py::arg("amplitude") = 0.0, py::arg("omega") = 0.0,
             py::arg("phase") = 0.0)
        .def("at", &RateFunction::at);

    py::class_<NoiseSchedule>(m, "NoiseSchedule")
        .def_static("uniform", &NoiseSchedule::uniform, py::arg("d"),
                    py::arg("rate"))
        .def_readwrite("data", &NoiseSchedule::data)
        .def_readwrite("ancilla", &NoiseSchedule::ancilla);

    py::class_<SyndromeRecord>(m, "SyndromeRecord")
        .def_readonly("d", &SyndromeRecord::d)
        .def_readonly("rounds", &SyndromeRecord::rounds)
        .def_readonly("lag", &SyndromeRecord::lag)
        .def_readonly("bits", &SyndromeRecord::bits)
        .def_readonly("true_logical", &SyndromeRecord::true_logical)
        .def_readonly("trial_seed", &SyndromeRecord::trial_seed)
        .def("bit", &SyndromeRecord::bit, py::arg("ancilla"), py::arg("round"))
        .def("to_text", &syndrome_to_text)
        .def_static("from_text", &syndrome_from_text);

    m.def("true_probabilities", &true_probabilities, py::arg("schedule"),
          py::arg("rounds"), py::arg("lag"), py::arg("t_offset") = 0);
    m.def("sample_trial", &sample_trial, py::arg("schedule"),
          py::arg("rounds"), py::arg("lag"), py::arg("seed"),
          py::arg("t_offset") = 0);

    py::class_<EdgeEstimate>(m, "EdgeEstimate")
        .def_readonly("p_hat", &EdgeEstimate::p_hat)
        .def_readonly("std_err", &EdgeEstimate::std_err)
        .def_readonly("clamped", &EdgeEstimate::clamped)
        .def_readonly("n_samples", &EdgeEstimate::n_samples);

    py::class_<EstimateSet>(m, "EstimateSet")
        .def_readonly("d", &EstimateSet::d)
        .def_readonly("lag", &EstimateSet::lag)
        .def("find",
             [](const EstimateSet& set, const std::string& kind, int ancilla) {
                 return set.find(edge_kind_from_string(kind), ancilla);
             },
             py::arg("kind"), py::arg("ancilla"))
        .def("to_json", &estimates_to_json)
        .def_static("from_json", &estimates_from_json);

    py::class_<MomentAccumulator>(m, "MomentAccumulator")
        .def(py::init<int, int, int64_t>(), py::arg("d"), py::arg("lag"),
             py::arg("window") = 0)
        .def_property_readonly("rounds_seen", &MomentAccumulator::rounds_seen)
        .def_property_readonly("vertex_n", &MomentAccumulator::vertex_n)
        .def_property_readonly("pair_n", &MomentAccumulator::pair_n)
        .def("add_record", &MomentAccumulator::add_record)
        .def("merge", &MomentAccumulator::merge);

    m.def("pair_probability", &pair_probability, py::arg("mean_i"),
          py::arg("mean_j"), py::arg("mean_ij"), py::arg("n") = 0);
    m.def("boundary_probability", &boundary_probability, py::arg("mean_i"),
          py::arg("neighbor_ps"), py::arg("n") = 0);
    m.def("estimate_all", &estimate_all, py::arg("acc"), py::arg("topology"),
          py::arg("z") = 2.0);
    m.def("uncertainty", &uncertainty);
    m.def("n_min", &n_min);
    m.def("n_opt", &n_opt);
    m.def("omega_c", &omega_c);

    py::class_<WeightTable>(m, "WeightTable")
        .def("pair_weight", &WeightTable::pair_weight, py::arg("u"),
             py::arg("v"))
        .def("pair_parity", &WeightTable::pair_parity, py::arg("u"),
             py::arg("v"))
        .def("boundary_weight", &WeightTable::boundary_weight, py::arg("u"))
        .def("boundary_parity", &WeightTable::boundary_parity, py::arg("u"))
        .def("to_csv", &weight_table_to_csv);

    m.def("weights_exact",
          [](const DetectorErrorModel& model) {
              return weights_exact(model);
          },
          py::arg("model"));
    m.def("weights_shortest_path",
          [](const DetectorErrorModel& model) {
              std::vector<DetectorId> sources;
              for (int32_t i = 0; i < model.num_detectors(); ++i)
                  sources.push_back(model.detector_at(i));
              return weights_shortest_path(model, sources);
          },
          py::arg("model"));

    py::class_<Matching>(m, "Matching")
        .def_readonly("pairs", &Matching::pairs)
        .def_readonly("to_boundary", &Matching::to_boundary)
        .def_readonly("total_weight", &Matching::total_weight);

    py::class_<CorrectionResult>(m, "CorrectionResult")
        .def_readonly("predicted_logical", &CorrectionResult::predicted_logical)
        .def_readonly("matching", &CorrectionResult::matching);

    m.def("decode",
          [](const SyndromeRecord& record, const DetectorErrorModel& model,
             const std::string& backend) {
              CachedWeightOracle oracle(model,
                                        weight_backend_from_string(backend));
              std::vector<DetectorId> events;
              for (int t = 0; t < record.rounds; ++t)
                  for (int a = 0; a < record.d - 1; ++a)
                      if (record.bit(a, t)) events.push_back(DetectorId{a, t});
              return decode_events(events, oracle);
          },
          py::arg("record"), py::arg("model"), py::arg("backend") = "dijkstra");

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init([](const std::string& text) {
                 return config_from_json(text);
             }),
             py::arg("json_text"))
        .def_readwrite("d", &ExperimentConfig::d)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("trials", &ExperimentConfig::trials)
        .def_readwrite("repetitions", &ExperimentConfig::repetitions);

    py::class_<FidelityCurve>(m, "FidelityCurve")
        .def_readonly("checkpoints", &FidelityCurve::checkpoints)
        .def_readonly("fidelity", &FidelityCurve::fidelity)
        .def_readonly("eps", &FidelityCurve::eps)
        .def_readonly("residual", &FidelityCurve::residual)
        .def_readonly("valid", &FidelityCurve::valid);

    m.def("logical_error_rate",
          [](const DetectorErrorModel& decode_model,
             const NoiseSchedule& truth, int rounds_test, int lag,
             int64_t t_offset, int64_t trials, uint64_t seed,
             const std::string& backend) {
              return logical_error_rate(decode_model, truth, rounds_test, lag,
                                        t_offset, trials, seed,
                                        weight_backend_from_string(backend));
          },
          py::arg("decode_model"), py::arg("truth"), py::arg("rounds_test"),
          py::arg("lag"), py::arg("t_offset"), py::arg("trials"),
          py::arg("seed"), py::arg("backend") = "dijkstra");
    m.def("fit_fidelity", &fit_fidelity);
    m.def("relative_error", &relative_error);

    py::class_<ConvergenceResult>(m, "ConvergenceResult")
        .def_readonly("eps0", &ConvergenceResult::eps0)
        .def_readonly("alpha", &ConvergenceResult::alpha)
        .def_readonly("csv", &ConvergenceResult::csv);
    m.def("exp_convergence", &exp_convergence);

    py::class_<FluctuationResult>(m, "FluctuationResult")
        .def_readonly("eval_times", &FluctuationResult::eval_times)
        .def_readonly("windows", &FluctuationResult::windows)
        .def_readonly("eps", &FluctuationResult::eps)
        .def_readonly("eps_oracle", &FluctuationResult::eps_oracle)
        .def_readonly("time_avg", &FluctuationResult::time_avg)
        .def_readonly("time_avg_oracle", &FluctuationResult::time_avg_oracle)
        .def_readonly("csv", &FluctuationResult::csv);
    m.def("exp_fluctuation", &exp_fluctuation);
}
