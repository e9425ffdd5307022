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

#ifndef AQEC_DETECTOR_GRAPH_HPP
#define AQEC_DETECTOR_GRAPH_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace aqec {

/// Space-time coordinate of a detector: syndrome bit of `ancilla` (0-based,
/// ancillas sit between data qubits a+1 and a+2) at measurement round `round`.
struct DetectorId {
    int32_t ancilla = 0;
    int32_t round = 0;
    auto operator<=>(const DetectorId&) const = default;
};

enum class EdgeKind : uint8_t { space, time, boundary };

std::string_view to_string(EdgeKind kind);
EdgeKind edge_kind_from_string(std::string_view s);

/// One endpoint of an error mechanism: either a detector or the (virtual)
/// boundary vertex.
struct EdgeEndpoint {
    bool is_boundary = false;
    DetectorId detector{};

    static EdgeEndpoint boundary() { return EdgeEndpoint{true, {}}; }
    static EdgeEndpoint at(DetectorId d) { return EdgeEndpoint{false, d}; }
    bool operator==(const EdgeEndpoint&) const = default;
};

/// Independent error mechanism flipping the detectors at its endpoints.
struct EdgeSpec {
    EdgeEndpoint u;
    EdgeEndpoint v;
    double probability = 0.0;
    EdgeKind kind = EdgeKind::space;
    bool logical_crossing = false;
};

/// Static detector graph: a set of detectors laid out on an (ancilla, round)
/// grid plus the edges (error mechanisms) connecting them. Probabilities are
/// accepted anywhere in [0, 1]; downstream estimation and weight code
/// enforces the p < 1/2 regime it needs.
class DetectorErrorModel {
public:
    DetectorErrorModel(int d, int rounds, int lag, std::vector<EdgeSpec> edges);

    int distance() const { return d_; }
    int rounds() const { return rounds_; }
    int lag() const { return lag_; }
    int num_detectors() const { return (d_ - 1) * rounds_; }
    const std::vector<EdgeSpec>& edges() const { return edges_; }

    /// Row-major linear index: round * (d-1) + ancilla.
    int32_t detector_index(DetectorId id) const;
    DetectorId detector_at(int32_t index) const;
    bool contains(DetectorId id) const;

    /// Edge indices incident to the detector, in insertion order.
    const std::vector<int32_t>& incident_edges(DetectorId id) const;

    /// Linear endpoint indices per edge; -1 encodes the boundary.
    int32_t edge_u_index(int32_t edge) const { return u_index_[edge]; }
    int32_t edge_v_index(int32_t edge) const { return v_index_[edge]; }

private:
    int d_;
    int rounds_;
    int lag_;
    std::vector<EdgeSpec> edges_;
    std::vector<int32_t> u_index_;
    std::vector<int32_t> v_index_;
    std::vector<std::vector<int32_t>> incidence_;
};

/// Per-qubit, per-round flip rates. Data qubits are 1..d (index k-1), ancilla
/// qubits 1..d-1 (index k-1).
struct QubitRates {
    std::vector<std::vector<double>> data;
    std::vector<std::vector<double>> ancilla;
};

/// Build the repetition-code detector graph for `rounds` measurement rounds
/// with syndrome lag `lag` in {1, 2}. Per round t the edges are, in order:
/// left boundary (data qubit 1, logical_crossing = 1), space edges for data
/// qubits 2..d-1, right boundary (data qubit d), then time edges
/// (a, t)-(a, t+lag) carrying the ancilla rates, emitted only while
/// t + lag < rounds.
DetectorErrorModel build_repetition_dem(int d, int rounds, int lag,
                                        const QubitRates& gammas);

/// XOR the per-edge samples (0/1, one per edge) into detector values.
std::vector<uint8_t> evaluate_detectors(const DetectorErrorModel& model,
                                        const std::vector<uint8_t>& samples);

/// Parity of logical_crossing edges that fired.
bool logical_parity(const DetectorErrorModel& model,
                    const std::vector<uint8_t>& samples);

// Text round-trip. Format: a `# dem d=<d> rounds=<r> lag=<L>` header, then
// one line per edge: `kind ancilla_u round_u ancilla_v round_v p crossing`,
// with `B B` standing in for a boundary endpoint.
std::string dem_to_text(const DetectorErrorModel& model);
void dem_to_stream(const DetectorErrorModel& model, std::ostream& out);
DetectorErrorModel dem_from_text(const std::string& text);
DetectorErrorModel dem_from_stream(std::istream& in);

}  // namespace aqec

#endif
