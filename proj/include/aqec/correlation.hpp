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

#ifndef AQEC_CORRELATION_HPP
#define AQEC_CORRELATION_HPP

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "aqec/detector_graph.hpp"
#include "aqec/noise_sim.hpp"

namespace aqec {

struct EdgeEstimate {
    double p_hat = 0.0;
    double std_err = 0.0;
    bool clamped = false;
    int64_t n_samples = 0;
};

/// Streaming first and second moments of syndrome rows, pooled per
/// time-translation class. Classes, for a repetition code with d-1 ancillas:
/// one vertex class per ancilla, one space-pair class per adjacent ancilla
/// pair (a, a+1), one time-pair class per ancilla at separation `lag`.
///
/// With window > 0 the accumulator keeps only the most recent `window`
/// rounds; a time pair is counted exactly while its earlier row is inside
/// the window, so counts over rounds [0, 2N) with window N equal counts over
/// [N, 2N) fed to a fresh accumulator.
class MomentAccumulator {
public:
    /// window = 0 keeps everything. A positive window must exceed lag.
    MomentAccumulator(int d, int lag, int64_t window = 0);

    int distance() const { return d_; }
    int lag() const { return lag_; }
    int64_t window() const { return window_; }
    int64_t rounds_seen() const { return next_t_; }

    /// Append one row (d-1 bits) at round t = rounds_seen().
    void add_round(const uint8_t* row);
    /// Append contiguous rows starting at first_t, which must equal
    /// rounds_seen(); throws otherwise.
    void add_rounds(const std::vector<std::vector<uint8_t>>& rows,
                    int64_t first_t);
    void add_record(const SyndromeRecord& record);

    /// Combine counts from a second accumulator over disjoint data. Only
    /// windowless accumulators merge.
    void merge(const MomentAccumulator& other);

    // Counts in window.
    int64_t vertex_n() const { return vertex_n_; }
    int64_t pair_n() const { return pair_n_; }
    int64_t vertex_sum(int ancilla) const { return vertex_sum_.at(ancilla); }
    int64_t space_sum(int ancilla) const { return space_sum_.at(ancilla); }
    int64_t time_sum(int ancilla) const { return time_sum_.at(ancilla); }

private:
    int d_;
    int lag_;
    int64_t window_;
    int64_t next_t_ = 0;
    std::deque<std::vector<uint8_t>> ring_;
    std::vector<int64_t> vertex_sum_;
    std::vector<int64_t> space_sum_;
    std::vector<int64_t> time_sum_;
    int64_t vertex_n_ = 0;
    int64_t pair_n_ = 0;
};

/// Invert the two-point correlator of a shared edge:
/// p = 1/2 - sqrt(1/4 - (<vi vj> - <vi><vj>) / (1 - 2<vi xor vj>)).
/// With n > 0 the sampling error sqrt(p(1-p)/n) is attached.
EdgeEstimate pair_probability(double mean_i, double mean_j, double mean_ij,
                              int64_t n = 0);

/// Solve <vi> = sum over incident edges for the remaining boundary edge:
/// p = 1/2 + (<vi> - 1/2) / prod_j (1 - 2 p_j). Result clamped to [0, 1/2]
/// with the flag set when the raw value fell outside.
EdgeEstimate boundary_probability(double mean_i,
                                  const std::vector<double>& neighbor_ps,
                                  int64_t n = 0);

struct ClassEstimate {
    EdgeKind kind = EdgeKind::space;
    int ancilla = 0;  // space: lower ancilla; boundary: 0 = left, d-2 = right
    EdgeEstimate estimate;
};

struct EstimateSet {
    int d = 3;
    int lag = 1;
    std::vector<ClassEstimate> classes;

    const EdgeEstimate& find(EdgeKind kind, int ancilla) const;
};

/// Estimate every edge class. Pair classes are z-clamped to zero when their
/// covariance is not significant at z standard errors; boundary classes are
/// then solved using the (possibly clamped) pair results, with the incident
/// edge-class multiplicities read off an interior-round vertex of
/// `topology`.
EstimateSet estimate_all(const MomentAccumulator& acc,
                         const DetectorErrorModel& topology, double z = 2.0);

std::string estimates_to_json(const EstimateSet& set);
EstimateSet estimates_from_json(const std::string& text);

/// sqrt(p(1-p)/n): expected sampling error of an edge-probability estimate.
double uncertainty(double p, int64_t n);
/// Minimum useful training length: ceil(1/p).
int64_t n_min(double p_bar);
/// Drift-optimal window for rate-of-change omega: round((p * omega^2)^(-1/3)).
int64_t n_opt(double p_bar, double omega);
/// Fastest trackable angular frequency: omega_c = p.
double omega_c(double p_bar);

}  // namespace aqec

#endif
