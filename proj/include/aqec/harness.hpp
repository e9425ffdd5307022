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

#ifndef AQEC_HARNESS_HPP
#define AQEC_HARNESS_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "aqec/correlation.hpp"
#include "aqec/detector_graph.hpp"
#include "aqec/matching.hpp"
#include "aqec/noise_sim.hpp"
#include "aqec/weights.hpp"

namespace aqec {

struct ScheduleConfig {
    std::string type = "constant";  // "constant" | "sinusoid"
    double gamma0 = 0.005;
    double amplitude = 0.0;
    double omega = 0.0;
    double phase = 0.0;
    std::string targets = "all";  // "all" | "data" | "ancilla"
};

struct ExperimentConfig {
    int d = 3;
    int lag = 1;
    int rounds_test = 100;
    ScheduleConfig schedule;
    int64_t window = 0;
    int64_t n_train = 10000;
    int repetitions = 400;
    int64_t trials = 2000;
    double z = 2.0;
    std::string backend = "dijkstra";
    uint64_t seed = 1;
    // Experiment-specific optional keys.
    std::vector<int64_t> n_list = {100, 316, 1000, 3162, 10000, 31623};
    std::vector<int64_t> windows = {500, 2000, 16000};
    int64_t oracle_trials = 200000;
    int64_t eval_start = -1;  // default: largest window
    int64_t eval_stride = 1000;
    int eval_count = 20;
    int stages = 200;
    double p_floor = 1e-6;
};

/// Parse and validate a config. Unknown keys and malformed values raise
/// std::invalid_argument whose message includes the offending key.
ExperimentConfig config_from_json(const std::string& text);
/// One-line-per-key description of the accepted schema.
std::string config_schema();

NoiseSchedule schedule_from_config(const ExperimentConfig& config);
WeightBackend backend_from_config(const ExperimentConfig& config);

/// Evenly spaced decoding checkpoints: rounds_test must be a positive
/// multiple of 10; returns {r/10, 2r/10, ..., r}.
std::vector<int> default_checkpoints(int rounds_test);

/// Constant-rate tables read from an estimate set: data qubit 1 from the
/// left boundary class, interior data qubits from space classes, data qubit
/// d from the right boundary class, ancillas from time classes. Rates are
/// floored at p_floor and capped just below 1/2 so weights stay finite.
QubitRates rates_from_estimates(const EstimateSet& estimates, int rounds,
                                double p_floor);
DetectorErrorModel calibrated_dem(const EstimateSet& estimates, int rounds,
                                  double p_floor);

struct FidelityCurve {
    std::vector<int> checkpoints;
    std::vector<double> fidelity;
    double eps = 0.0;
    double residual = 0.0;  // rms log-space misfit over the used checkpoints
    bool valid = false;     // false when every checkpoint had F <= 1/2
};

/// Fit F(t) = 1/2 + 1/2 (1-2 eps)^t through the origin in log space,
/// using only checkpoints with F > 1/2.
FidelityCurve fit_fidelity(const std::vector<int>& checkpoints,
                           const std::vector<double>& fidelity);

/// Per-checkpoint decoders over progressively truncated copies of one
/// decode model.
class CheckpointDecoder {
public:
    CheckpointDecoder(const DetectorErrorModel& decode_model,
                      WeightBackend backend,
                      const std::vector<int>& checkpoints);
    int num_checkpoints() const { return static_cast<int>(oracles_.size()); }
    bool decode_at(int k, const std::vector<DetectorId>& events);

private:
    std::vector<std::unique_ptr<DetectorErrorModel>> models_;
    std::vector<std::unique_ptr<CachedWeightOracle>> oracles_;
};

/// Monte Carlo fidelity of `decode_model` decoding trials drawn from the
/// schedule's true error process on rounds [t_offset, t_offset+rounds_test).
/// Checkpoint t is scored as a closed t-round experiment.
FidelityCurve logical_error_rate(const DetectorErrorModel& decode_model,
                                 const NoiseSchedule& truth, int rounds_test,
                                 int lag, int64_t t_offset, int64_t trials,
                                 uint64_t seed, WeightBackend backend);

double relative_error(double eps_adaptive, double eps_oracle);

struct ConvergenceRow {
    int64_t n_train = 0;
    double delta_mean = 0.0;
    double delta_stderr = 0.0;
};

struct ConvergenceResult {
    double eps0 = 0.0;
    std::vector<ConvergenceRow> rows;
    double alpha = 0.0;
    std::string csv;  // N,delta_mean,delta_stderr,alpha_fit
};

/// Training-size convergence sweep: repetitions independent train+test
/// cycles per N in n_list, errors relative to one high-precision
/// model-aware baseline.
ConvergenceResult exp_convergence(const ExperimentConfig& config);

struct FluctuationResult {
    std::vector<int64_t> eval_times;
    std::vector<int64_t> windows;
    std::vector<std::vector<double>> eps;  // [window][eval]
    std::vector<double> eps_oracle;        // [eval]
    std::vector<double> time_avg;          // per window
    double time_avg_oracle = 0.0;
    std::string csv;  // t,eps_w<w1>,...,eps_oracle
};

/// Slowly fluctuating noise tracked with sliding windows of several lengths,
/// success counts pooled across stages; the oracle column decodes with the
/// instantaneous true rates.
FluctuationResult exp_fluctuation(const ExperimentConfig& config);

}  // namespace aqec

#endif
