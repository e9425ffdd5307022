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

#ifndef AQEC_WEIGHTS_HPP
#define AQEC_WEIGHTS_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "aqec/detector_graph.hpp"

namespace aqec {

enum class WeightBackend : uint8_t { exact, shortest_path };

std::string_view to_string(WeightBackend backend);
// Accepts "exact" and "dijkstra".
WeightBackend weight_backend_from_string(std::string_view s);

/// Round interval [begin, end); end = -1 means "through the last round".
struct RoundInterval {
    int begin = 0;
    int end = -1;
};

/// Matching weights w = -ln(path sum) between a set of member detectors,
/// plus each member's weight to the boundary. Parities record whether the
/// dominant (shortest) path crosses the logical; paths themselves (lists of
/// edge indices into the source model) are stored for tables up to 512
/// members.
struct WeightTable {
    WeightBackend backend = WeightBackend::shortest_path;
    std::vector<DetectorId> members;
    std::vector<double> pair_w;        // size n*n, symmetric, diagonal 0
    std::vector<uint8_t> pair_par;     // size n*n
    std::vector<double> boundary_w;    // size n
    std::vector<uint8_t> boundary_par; // size n
    bool has_paths = false;
    std::vector<std::vector<int32_t>> pair_paths;      // size n*n when stored
    std::vector<std::vector<int32_t>> boundary_paths;  // size n when stored

    int size() const { return static_cast<int>(members.size()); }
    int index_of(DetectorId id) const;  // -1 when absent
    double pair_weight(int i, int j) const;
    bool pair_parity(int i, int j) const;
    double boundary_weight(int i) const { return boundary_w.at(i); }
    bool boundary_parity(int i) const { return boundary_par.at(i) != 0; }
    const std::vector<int32_t>& pair_path(int i, int j) const;
    const std::vector<int32_t>& boundary_path(int i) const;
};

/// Copy of the model restricted to rounds [0, rounds_limit): exactly the
/// graph of the shorter closed experiment.
DetectorErrorModel truncate_rounds(const DetectorErrorModel& model,
                                   int rounds_limit);

/// Exact path-sum weights over every detector in the block: inverts (1 - A)
/// where A holds the interior edge probabilities, restricted to the block's
/// sub-graph. All edge probabilities must be < 1/2; a diverging path sum
/// (non-positive inverse entries) raises std::domain_error.
WeightTable weights_exact(const DetectorErrorModel& model,
                          RoundInterval block = {}, int size_cap = 4096);

/// Production backend: Dijkstra from each source with per-edge cost -ln p,
/// ties broken toward lower (round, ancilla).
WeightTable weights_shortest_path(const DetectorErrorModel& model,
                                  const std::vector<DetectorId>& sources);

/// Independent oracle: sum over walks of increasing length until the series
/// tail is below 1e-12. u == v computes the boundary sum for u. Only graphs
/// with at most `max_detectors` detectors are accepted.
double path_sum_bruteforce(const DetectorErrorModel& model, DetectorId u,
                           DetectorId v, int max_detectors = 12);

/// CSV dump: header `u_ancilla,u_round,v_ancilla,v_round,weight`, pair rows
/// (i < j) then boundary rows with `B,B` for the boundary endpoint.
std::string weight_table_to_csv(const WeightTable& table);

/// Lazy per-source weight cache used by the decoding hot path. Rows are
/// computed on first use and reused across queries; the exact backend keeps
/// one LU factorization of (1 - A) for the whole model.
class CachedWeightOracle {
public:
    CachedWeightOracle(const DetectorErrorModel& model, WeightBackend backend);
    ~CachedWeightOracle();
    CachedWeightOracle(const CachedWeightOracle&) = delete;
    CachedWeightOracle& operator=(const CachedWeightOracle&) = delete;

    WeightBackend backend() const { return backend_; }
    double pair_weight(DetectorId u, DetectorId v);
    bool pair_parity(DetectorId u, DetectorId v);
    double boundary_weight(DetectorId u);
    bool boundary_parity(DetectorId u);
    /// Assemble the dense table (with paths) for a small event set.
    WeightTable table_for(const std::vector<DetectorId>& events);

private:
    struct Impl;
    const DetectorErrorModel& model_;
    WeightBackend backend_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace aqec

#endif
