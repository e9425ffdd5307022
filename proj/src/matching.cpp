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

#include "aqec/matching.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace aqec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kNodeCap = 512;

bool finite_weight(double w) { return std::isfinite(w) && w >= 0.0; }

}  // namespace

Matching min_weight_perfect_matching(const MatchingProblem& problem) {
    int nr = static_cast<int>(problem.nodes.size());
    if (problem.pair_weight.size() != static_cast<size_t>(nr) * nr ||
        problem.boundary_weight.size() != static_cast<size_t>(nr))
        throw std::invalid_argument("matching problem shape mismatch");
    Matching out;
    if (nr == 0) return out;
    if (nr > kNodeCap)
        throw std::invalid_argument("too many nodes for dense matching");
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nr; ++j) {
            double w = problem.pair_weight[static_cast<size_t>(i) * nr + j];
            if (i != j && !(w >= 0.0) && !std::isinf(w))
                throw std::invalid_argument("pair weight must be >= 0 or inf");
        }

    // Twin construction: node i may match its own twin i+nr at the boundary
    // weight, twins pair up freely at zero weight, and cross real-twin edges
    // are forbidden. Forbidden and infinite entries get weight `big` so the
    // value transform stays finite; any optimum that still uses one is
    // reported as infeasible.
    int n = 2 * nr;
    double big = 1.0;
    auto add_if_finite = [&](double w) {
        if (finite_weight(w)) big += w;
    };
    for (int i = 0; i < nr; ++i) {
        for (int j = i + 1; j < nr; ++j)
            add_if_finite(problem.pair_weight[static_cast<size_t>(i) * nr + j]);
        add_if_finite(problem.boundary_weight[i]);
    }
    double cval = big + 1.0;

    std::vector<double> val(static_cast<size_t>(n) * n, cval - big);
    auto put = [&](int i, int j, double w) {
        double v = finite_weight(w) ? cval - w : cval - big;
        val[static_cast<size_t>(i) * n + j] = v;
        val[static_cast<size_t>(j) * n + i] = v;
    };
    for (int i = 0; i < nr; ++i) {
        for (int j = i + 1; j < nr; ++j) {
            put(i, j, problem.pair_weight[static_cast<size_t>(i) * nr + j]);
            put(nr + i, nr + j, 0.0);
        }
        put(i, nr + i, problem.boundary_weight[i]);
    }

    std::vector<int32_t> mate = internal::max_weight_matching_dense(n, val);

    for (int i = 0; i < nr; ++i) {
        int m = mate[i];
        if (m < 0) throw std::runtime_error("matching left a node exposed");
        if (m == nr + i) {
            if (!finite_weight(problem.boundary_weight[i]))
                throw std::runtime_error("no finite-weight perfect matching");
            out.to_boundary.push_back(i);
        } else if (m < nr) {
            if (!finite_weight(
                    problem.pair_weight[static_cast<size_t>(i) * nr + m]))
                throw std::runtime_error("no finite-weight perfect matching");
            if (m > i) out.pairs.emplace_back(i, m);
        } else {
            throw std::runtime_error("no finite-weight perfect matching");
        }
    }
    for (const auto& [i, j] : out.pairs)
        out.total_weight += problem.pair_weight[static_cast<size_t>(i) * nr + j];
    for (int i : out.to_boundary)
        out.total_weight += problem.boundary_weight[i];
    return out;
}

MatchingProblem problem_from_table(const std::vector<DetectorId>& events,
                                   const WeightTable& table) {
    MatchingProblem problem;
    problem.nodes = events;
    size_t n = events.size();
    problem.pair_weight.assign(n * n, 0.0);
    problem.boundary_weight.assign(n, kInf);
    std::vector<int> idx(n);
    for (size_t i = 0; i < n; ++i) {
        idx[i] = table.index_of(events[i]);
        if (idx[i] < 0)
            throw std::invalid_argument("event missing from weight table");
    }
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j)
            problem.pair_weight[i * n + j] = problem.pair_weight[j * n + i] =
                table.pair_weight(idx[i], idx[j]);
        problem.boundary_weight[i] = table.boundary_weight(idx[i]);
    }
    return problem;
}

namespace {

std::vector<DetectorId> events_of(const SyndromeRecord& record) {
    std::vector<DetectorId> events;
    int width = record.d - 1;
    for (int t = 0; t < record.rounds; ++t)
        for (int a = 0; a < width; ++a)
            if (record.bit(a, t)) events.push_back(DetectorId{a, t});
    return events;
}

}  // namespace

CorrectionResult decode_events(const std::vector<DetectorId>& events,
                               const WeightTable& table) {
    MatchingProblem problem = problem_from_table(events, table);
    CorrectionResult result;
    result.events = events;
    result.matching = min_weight_perfect_matching(problem);
    bool parity = false;
    for (const auto& [i, j] : result.matching.pairs)
        parity ^= table.pair_parity(table.index_of(events[i]),
                                    table.index_of(events[j]));
    for (int i : result.matching.to_boundary)
        parity ^= table.boundary_parity(table.index_of(events[i]));
    result.predicted_logical = parity;
    return result;
}

CorrectionResult decode_events(const std::vector<DetectorId>& events,
                               CachedWeightOracle& oracle) {
    size_t n = events.size();
    MatchingProblem problem;
    problem.nodes = events;
    problem.pair_weight.assign(n * n, 0.0);
    problem.boundary_weight.assign(n, kInf);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j)
            problem.pair_weight[i * n + j] = problem.pair_weight[j * n + i] =
                oracle.pair_weight(events[i], events[j]);
        problem.boundary_weight[i] = oracle.boundary_weight(events[i]);
    }
    CorrectionResult result;
    result.events = events;
    result.matching = min_weight_perfect_matching(problem);
    bool parity = false;
    for (const auto& [i, j] : result.matching.pairs)
        parity ^= oracle.pair_parity(events[i], events[j]);
    for (int i : result.matching.to_boundary)
        parity ^= oracle.boundary_parity(events[i]);
    result.predicted_logical = parity;
    return result;
}

CorrectionResult decode(const SyndromeRecord& record,
                        const WeightTable& table) {
    return decode_events(events_of(record), table);
}

bool score(const SyndromeRecord& record, const CorrectionResult& result) {
    return result.predicted_logical == record.true_logical;
}

}  // namespace aqec
