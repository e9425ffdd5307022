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

#ifndef AQEC_MATCHING_HPP
#define AQEC_MATCHING_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "aqec/noise_sim.hpp"
#include "aqec/weights.hpp"

namespace aqec {

/// Nodes to pair up, their mutual weights (n*n, symmetric; +inf forbids a
/// pairing) and each node's weight to the boundary (+inf forbids).
struct MatchingProblem {
    std::vector<DetectorId> nodes;
    std::vector<double> pair_weight;
    std::vector<double> boundary_weight;
};

struct Matching {
    std::vector<std::pair<int32_t, int32_t>> pairs;  // node indices, i < j
    std::vector<int32_t> to_boundary;                // node indices
    double total_weight = 0.0;
};

/// Minimum-weight perfect matching where any node may instead pair with the
/// boundary. Solved on the twin-augmented complete graph with an O(n^3)
/// weighted blossom; throws std::runtime_error when no finite-weight
/// solution exists.
Matching min_weight_perfect_matching(const MatchingProblem& problem);

struct CorrectionResult {
    bool predicted_logical = false;
    Matching matching;
    std::vector<DetectorId> events;
};

MatchingProblem problem_from_table(const std::vector<DetectorId>& events,
                                   const WeightTable& table);

/// Match the record's detection events and predict the logical outcome as
/// the parity of the matched paths' logical crossings. Every event must be a
/// member of `table`.
CorrectionResult decode(const SyndromeRecord& record, const WeightTable& table);
CorrectionResult decode_events(const std::vector<DetectorId>& events,
                               const WeightTable& table);
/// Same, pulling weights lazily from the oracle (decoding hot path).
CorrectionResult decode_events(const std::vector<DetectorId>& events,
                               CachedWeightOracle& oracle);

/// True when the prediction matches the record's true logical outcome.
bool score(const SyndromeRecord& record, const CorrectionResult& result);

namespace internal {

/// Maximum-weight matching on the dense graph `val` (n*n, val > 0 means an
/// edge). Returns the mate of each vertex (-1 if exposed). O(n^3).
std::vector<int32_t> max_weight_matching_dense(int n,
                                               const std::vector<double>& val);

}  // namespace internal

}  // namespace aqec

#endif
