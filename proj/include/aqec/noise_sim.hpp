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

#ifndef AQEC_NOISE_SIM_HPP
#define AQEC_NOISE_SIM_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "aqec/detector_graph.hpp"

namespace aqec {

/// Flip rate as a function of the round index.
struct RateFunction {
    enum class Kind { constant, sinusoid };
    Kind kind = Kind::constant;
    double gamma0 = 0.0;
    double amplitude = 0.0;
    double omega = 0.0;
    double phase = 0.0;

    static RateFunction constant(double gamma0);
    static RateFunction sinusoid(double gamma0, double amplitude, double omega,
                                 double phase);
    double at(double t) const;
};

struct Qubit {
    enum class Role { data, ancilla };
    Role role = Role::data;
    int index = 1;  // 1-based: data 1..d, ancilla 1..d-1
};

/// Per-qubit flip-rate functions for one repetition code.
struct NoiseSchedule {
    int d = 3;
    std::vector<RateFunction> data;     // size d
    std::vector<RateFunction> ancilla;  // size d-1

    static NoiseSchedule uniform(int d, RateFunction f);
};

double gamma_at(const NoiseSchedule& schedule, Qubit q, int64_t t);

/// Materialize rates for rounds [t_offset, t_offset + rounds). Throws if any
/// rate leaves [0, 1].
QubitRates rates_for(const NoiseSchedule& schedule, int rounds,
                     int64_t t_offset);

/// Detector graph whose edge probabilities are the schedule's exact rates.
DetectorErrorModel true_probabilities(const NoiseSchedule& schedule, int rounds,
                                      int lag, int64_t t_offset = 0);

/// One simulated run: syndrome bits (row-major, round * (d-1) + ancilla) and
/// whether the accumulated data-qubit errors crossed the logical.
struct SyndromeRecord {
    int d = 3;
    int rounds = 0;
    int lag = 1;
    std::vector<uint8_t> bits;
    bool true_logical = false;
    uint64_t trial_seed = 0;

    uint8_t bit(int ancilla, int round) const {
        return bits[static_cast<size_t>(round) * (d - 1) + ancilla];
    }
};

/// Record plus the indices of the error mechanisms that actually fired in
/// the generating model (ground truth kept for checkpoint analysis).
struct SampledTrial {
    SyndromeRecord record;
    std::vector<int32_t> on_edges;
};

/// Draw one Bernoulli sample per edge; counter = edge index.
std::vector<int32_t> sample_edges(const DetectorErrorModel& model,
                                  uint64_t seed);

SampledTrial sample_trial_detailed(const DetectorErrorModel& model,
                                   uint64_t seed);

SyndromeRecord sample_trial(const NoiseSchedule& schedule, int rounds, int lag,
                            uint64_t seed, int64_t t_offset = 0);

/// Restriction of a sampled trial to the closed experiment on rounds
/// [0, rounds_limit): keeps exactly the mechanisms whose endpoints all lie
/// before the cut.
struct TruncatedTrial {
    std::vector<DetectorId> events;
    bool true_logical = false;
};

TruncatedTrial restrict_trial(const DetectorErrorModel& model,
                              const std::vector<int32_t>& on_edges,
                              int rounds_limit);

// Text round-trip. Format: header
// `# syndrome d=<d> rounds=<r> lag=<L> seed=<s> logical=<0|1>`, then one row
// per round: `t s_1 ... s_{d-1}`.
std::string syndrome_to_text(const SyndromeRecord& record);
void syndrome_to_stream(const SyndromeRecord& record, std::ostream& out);
SyndromeRecord syndrome_from_text(const std::string& text);
SyndromeRecord syndrome_from_stream(std::istream& in);

}  // namespace aqec

#endif
