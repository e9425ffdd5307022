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

#include "aqec/noise_sim.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "aqec/rng.hpp"

namespace aqec {

RateFunction RateFunction::constant(double gamma0) {
    return RateFunction{Kind::constant, gamma0, 0.0, 0.0, 0.0};
}

RateFunction RateFunction::sinusoid(double gamma0, double amplitude,
                                    double omega, double phase) {
    return RateFunction{Kind::sinusoid, gamma0, amplitude, omega, phase};
}

double RateFunction::at(double t) const {
    switch (kind) {
        case Kind::constant: return gamma0;
        case Kind::sinusoid:
            return gamma0 + amplitude * std::sin(omega * t + phase);
    }
    throw std::logic_error("bad RateFunction kind");
}

NoiseSchedule NoiseSchedule::uniform(int d, RateFunction f) {
    if (d < 3 || d % 2 == 0)
        throw std::invalid_argument("distance must be odd and >= 3");
    NoiseSchedule s;
    s.d = d;
    s.data.assign(d, f);
    s.ancilla.assign(d - 1, f);
    return s;
}

namespace {

void check_schedule(const NoiseSchedule& s) {
    if (s.data.size() != static_cast<size_t>(s.d) ||
        s.ancilla.size() != static_cast<size_t>(s.d - 1))
        throw std::invalid_argument("schedule qubit count mismatch");
}

}  // namespace

double gamma_at(const NoiseSchedule& schedule, Qubit q, int64_t t) {
    check_schedule(schedule);
    if (q.role == Qubit::Role::data) {
        if (q.index < 1 || q.index > schedule.d)
            throw std::out_of_range("data qubit index");
        return schedule.data[q.index - 1].at(static_cast<double>(t));
    }
    if (q.index < 1 || q.index > schedule.d - 1)
        throw std::out_of_range("ancilla qubit index");
    return schedule.ancilla[q.index - 1].at(static_cast<double>(t));
}

QubitRates rates_for(const NoiseSchedule& schedule, int rounds,
                     int64_t t_offset) {
    check_schedule(schedule);
    if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    QubitRates rates;
    auto fill = [&](const std::vector<RateFunction>& fns) {
        std::vector<std::vector<double>> table(fns.size());
        for (size_t q = 0; q < fns.size(); ++q) {
            table[q].resize(rounds);
            for (int t = 0; t < rounds; ++t) {
                double g = fns[q].at(static_cast<double>(t_offset + t));
                if (!(g >= 0.0 && g <= 1.0))
                    throw std::domain_error(
                        "rate out of range at t=" + std::to_string(t_offset + t));
                table[q][t] = g;
            }
        }
        return table;
    };
    rates.data = fill(schedule.data);
    rates.ancilla = fill(schedule.ancilla);
    return rates;
}

DetectorErrorModel true_probabilities(const NoiseSchedule& schedule, int rounds,
                                      int lag, int64_t t_offset) {
    return build_repetition_dem(schedule.d, rounds, lag,
                                rates_for(schedule, rounds, t_offset));
}

std::vector<int32_t> sample_edges(const DetectorErrorModel& model,
                                  uint64_t seed) {
    std::vector<int32_t> on;
    const auto& edges = model.edges();
    for (size_t e = 0; e < edges.size(); ++e)
        if (rng::bernoulli(seed, e, edges[e].probability))
            on.push_back(static_cast<int32_t>(e));
    return on;
}

SampledTrial sample_trial_detailed(const DetectorErrorModel& model,
                                   uint64_t seed) {
    SampledTrial trial;
    trial.on_edges = sample_edges(model, seed);

    std::vector<uint8_t> det(model.num_detectors(), 0);
    bool parity = false;
    for (int32_t e : trial.on_edges) {
        int32_t u = model.edge_u_index(e);
        int32_t v = model.edge_v_index(e);
        if (u >= 0) det[u] ^= 1;
        if (v >= 0) det[v] ^= 1;
        if (model.edges()[e].logical_crossing) parity = !parity;
    }
    trial.record = SyndromeRecord{model.distance(), model.rounds(), model.lag(),
                                  std::move(det), parity, seed};
    return trial;
}

SyndromeRecord sample_trial(const NoiseSchedule& schedule, int rounds, int lag,
                            uint64_t seed, int64_t t_offset) {
    DetectorErrorModel model =
        true_probabilities(schedule, rounds, lag, t_offset);
    return sample_trial_detailed(model, seed).record;
}

TruncatedTrial restrict_trial(const DetectorErrorModel& model,
                              const std::vector<int32_t>& on_edges,
                              int rounds_limit) {
    if (rounds_limit < 1 || rounds_limit > model.rounds())
        throw std::out_of_range("rounds_limit outside [1, rounds]");
    TruncatedTrial out;
    std::vector<uint8_t> det(
        static_cast<size_t>(model.distance() - 1) * rounds_limit, 0);
    int width = model.distance() - 1;
    for (int32_t e : on_edges) {
        int32_t u = model.edge_u_index(e);
        int32_t v = model.edge_v_index(e);
        int32_t hi = std::max(u, v);
        if (hi / width >= rounds_limit) continue;
        if (u >= 0) det[u] ^= 1;
        if (v >= 0) det[v] ^= 1;
        if (model.edges()[e].logical_crossing)
            out.true_logical = !out.true_logical;
    }
    for (size_t i = 0; i < det.size(); ++i)
        if (det[i])
            out.events.push_back(DetectorId{static_cast<int32_t>(i % width),
                                            static_cast<int32_t>(i / width)});
    return out;
}

void syndrome_to_stream(const SyndromeRecord& record, std::ostream& out) {
    out << "# syndrome d=" << record.d << " rounds=" << record.rounds
        << " lag=" << record.lag << " seed=" << record.trial_seed
        << " logical=" << (record.true_logical ? 1 : 0) << '\n';
    for (int t = 0; t < record.rounds; ++t) {
        out << t;
        for (int a = 0; a < record.d - 1; ++a)
            out << ' ' << int(record.bit(a, t));
        out << '\n';
    }
}

std::string syndrome_to_text(const SyndromeRecord& record) {
    std::ostringstream out;
    syndrome_to_stream(record, out);
    return out.str();
}

SyndromeRecord syndrome_from_stream(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("empty syndrome input");
    SyndromeRecord rec;
    unsigned long long seed = 0;
    int logical = 0;
    if (std::sscanf(line.c_str(),
                    "# syndrome d=%d rounds=%d lag=%d seed=%llu logical=%d",
                    &rec.d, &rec.rounds, &rec.lag, &seed, &logical) != 5)
        throw std::invalid_argument("bad syndrome header: " + line);
    rec.trial_seed = seed;
    rec.true_logical = logical != 0;
    rec.bits.assign(static_cast<size_t>(rec.rounds) * (rec.d - 1), 0);
    int expected_t = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        int t;
        if (!(ls >> t) || t != expected_t)
            throw std::invalid_argument("bad syndrome row: " + line);
        for (int a = 0; a < rec.d - 1; ++a) {
            int b;
            if (!(ls >> b) || (b != 0 && b != 1))
                throw std::invalid_argument("bad syndrome row: " + line);
            rec.bits[static_cast<size_t>(t) * (rec.d - 1) + a] =
                static_cast<uint8_t>(b);
        }
        ++expected_t;
    }
    if (expected_t != rec.rounds)
        throw std::invalid_argument("syndrome row count mismatch");
    return rec;
}

SyndromeRecord syndrome_from_text(const std::string& text) {
    std::istringstream in(text);
    return syndrome_from_stream(in);
}

}  // namespace aqec
