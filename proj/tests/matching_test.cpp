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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "aqec/noise_sim.hpp"
#include "oracles.hpp"

namespace aqec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MatchingProblem make_problem(int n) {
    MatchingProblem p;
    p.nodes.assign(n, DetectorId{});
    for (int i = 0; i < n; ++i) p.nodes[i] = DetectorId{0, i};
    p.pair_weight.assign(static_cast<size_t>(n) * n, kInf);
    p.boundary_weight.assign(n, kInf);
    return p;
}

void set_pair(MatchingProblem& p, int i, int j, double w) {
    size_t n = p.nodes.size();
    p.pair_weight[i * n + j] = p.pair_weight[j * n + i] = w;
}

TEST(Matching, EmptyProblem) {
    Matching m = min_weight_perfect_matching(make_problem(0));
    EXPECT_TRUE(m.pairs.empty());
    EXPECT_TRUE(m.to_boundary.empty());
    EXPECT_DOUBLE_EQ(m.total_weight, 0.0);
}

TEST(Matching, SingleNodeGoesToBoundary) {
    MatchingProblem p = make_problem(1);
    p.boundary_weight[0] = 1.5;
    Matching m = min_weight_perfect_matching(p);
    EXPECT_TRUE(m.pairs.empty());
    ASSERT_EQ(m.to_boundary.size(), 1u);
    EXPECT_DOUBLE_EQ(m.total_weight, 1.5);
}

TEST(Matching, PairBeatsBoundaryWhenCheaper) {
    MatchingProblem p = make_problem(2);
    set_pair(p, 0, 1, 1.0);
    p.boundary_weight = {0.8, 0.9};
    Matching m = min_weight_perfect_matching(p);
    // 1.0 < 0.8 + 0.9: take the pair.
    ASSERT_EQ(m.pairs.size(), 1u);
    EXPECT_EQ(m.pairs[0], (std::pair<int32_t, int32_t>{0, 1}));
    EXPECT_DOUBLE_EQ(m.total_weight, 1.0);

    p.boundary_weight = {0.4, 0.5};
    Matching m2 = min_weight_perfect_matching(p);
    EXPECT_TRUE(m2.pairs.empty());
    EXPECT_EQ(m2.to_boundary.size(), 2u);
    EXPECT_DOUBLE_EQ(m2.total_weight, 0.9);
}

TEST(Matching, OddClusterSendsOneNodeOut) {
    // Three mutually close nodes: one must exit through the boundary.
    MatchingProblem p = make_problem(3);
    set_pair(p, 0, 1, 1.0);
    set_pair(p, 1, 2, 1.0);
    set_pair(p, 0, 2, 1.0);
    p.boundary_weight = {10.0, 10.0, 2.0};
    Matching m = min_weight_perfect_matching(p);
    ASSERT_EQ(m.pairs.size(), 1u);
    EXPECT_EQ(m.pairs[0], (std::pair<int32_t, int32_t>{0, 1}));
    ASSERT_EQ(m.to_boundary.size(), 1u);
    EXPECT_EQ(m.to_boundary[0], 2);
    EXPECT_DOUBLE_EQ(m.total_weight, 3.0);
}

TEST(Matching, BlossomCaseNeedsOddCycleReasoning) {
    // 5-cycle plus a pendant off node 2. The only cost-3 solution pairs
    // (0,1), (3,4), (2,5); augmenting to it requires reasoning through the
    // odd cycle rather than pairing greedily around it.
    MatchingProblem p = make_problem(6);
    set_pair(p, 0, 1, 1.0);
    set_pair(p, 1, 2, 1.0);
    set_pair(p, 2, 3, 1.0);
    set_pair(p, 3, 4, 1.0);
    set_pair(p, 4, 0, 1.0);
    set_pair(p, 2, 5, 1.0);
    for (int i = 0; i < 6; ++i) p.boundary_weight[i] = 100.0;
    Matching m = min_weight_perfect_matching(p);
    EXPECT_DOUBLE_EQ(m.total_weight, 3.0);
    EXPECT_DOUBLE_EQ(m.total_weight, testing::brute_force_min_total(p));
    EXPECT_EQ(m.pairs.size(), 3u);
    EXPECT_TRUE(m.to_boundary.empty());
}

TEST(Matching, InfeasibleProblemsThrow) {
    MatchingProblem p = make_problem(1);
    EXPECT_THROW(min_weight_perfect_matching(p), std::runtime_error);

    MatchingProblem p3 = make_problem(3);
    set_pair(p3, 0, 1, 1.0);
    EXPECT_THROW(min_weight_perfect_matching(p3), std::runtime_error);

    MatchingProblem bad = make_problem(2);
    bad.pair_weight.pop_back();
    EXPECT_THROW(min_weight_perfect_matching(bad), std::invalid_argument);

    MatchingProblem neg = make_problem(2);
    set_pair(neg, 0, 1, -1.0);
    EXPECT_THROW(min_weight_perfect_matching(neg), std::invalid_argument);
}

TEST(Matching, MatchesBruteForceOnRandomProblems) {
    testing::TestRng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        int n = rng.uniform_int(1, 8);
        MatchingProblem p = make_problem(n);
        for (int i = 0; i < n; ++i) {
            // Dyadic weights keep every candidate total exactly
            // representable, so optima compare with ==.
            if (rng.uniform_int(0, 4) > 0)
                p.boundary_weight[i] = rng.uniform_int(1, 160) / 16.0;
            for (int j = i + 1; j < n; ++j)
                if (rng.uniform_int(0, 4) > 0)
                    set_pair(p, i, j, rng.uniform_int(1, 160) / 16.0);
        }
        double expected = testing::brute_force_min_total(p);
        if (!std::isfinite(expected)) {
            EXPECT_THROW(min_weight_perfect_matching(p), std::runtime_error)
                << "trial " << trial;
            continue;
        }
        Matching m = min_weight_perfect_matching(p);
        EXPECT_EQ(m.total_weight, expected) << "trial " << trial;
    }
}

TEST(MaxWeightMatchingDense, HandCase) {
    // Triangle plus pendant: best is (0,2) + (1,3) = 9, not greedy (0,1).
    int n = 4;
    std::vector<double> val(16, 0.0);
    auto put = [&](int i, int j, double v) {
        val[i * 4 + j] = val[j * 4 + i] = v;
    };
    put(0, 1, 5.0);
    put(0, 2, 6.0);
    put(1, 3, 3.0);
    std::vector<int32_t> mate = internal::max_weight_matching_dense(n, val);
    EXPECT_EQ(mate[0], 2);
    EXPECT_EQ(mate[2], 0);
    EXPECT_EQ(mate[1], 3);
    EXPECT_EQ(mate[3], 1);
}

TEST(Decode, SingleSpaceErrorPairsItsEvents) {
    QubitRates rates;
    rates.data.assign(3, std::vector<double>(3, 0.01));
    rates.ancilla.assign(2, std::vector<double>(3, 0.01));
    auto model = build_repetition_dem(3, 3, 1, rates);
    WeightTable table = weights_exact(model);

    SyndromeRecord rec;
    rec.d = 3;
    rec.rounds = 3;
    rec.lag = 1;
    rec.bits.assign(6, 0);
    rec.bits[2] = 1;  // (0, 1)
    rec.bits[3] = 1;  // (1, 1)
    rec.true_logical = false;

    CorrectionResult res = decode(rec, table);
    ASSERT_EQ(res.events.size(), 2u);
    ASSERT_EQ(res.matching.pairs.size(), 1u);
    EXPECT_TRUE(res.matching.to_boundary.empty());
    EXPECT_FALSE(res.predicted_logical);
    EXPECT_TRUE(score(rec, res));
}

TEST(Decode, LeftBoundaryErrorPredictsLogicalFlip) {
    QubitRates rates;
    rates.data.assign(3, std::vector<double>(2, 0.01));
    rates.ancilla.assign(2, std::vector<double>(2, 0.01));
    auto model = build_repetition_dem(3, 2, 1, rates);
    WeightTable table = weights_exact(model);

    SyndromeRecord rec;
    rec.d = 3;
    rec.rounds = 2;
    rec.lag = 1;
    rec.bits = {1, 0, 0, 0};  // single event at (0, 0)
    rec.true_logical = true;

    CorrectionResult res = decode(rec, table);
    ASSERT_EQ(res.matching.to_boundary.size(), 1u);
    EXPECT_TRUE(res.predicted_logical);
    EXPECT_TRUE(score(rec, res));

    rec.true_logical = false;
    EXPECT_FALSE(score(rec, decode(rec, table)));
}

TEST(Decode, OracleAndTableAgree) {
    auto sched = NoiseSchedule::uniform(5, RateFunction::constant(0.03));
    auto model = true_probabilities(sched, 6, 1);
    WeightTable table = weights_shortest_path(
        model, [&] {
            std::vector<DetectorId> all;
            for (int32_t i = 0; i < model.num_detectors(); ++i)
                all.push_back(model.detector_at(i));
            return all;
        }());
    CachedWeightOracle oracle(model, WeightBackend::shortest_path);

    for (uint64_t seed = 0; seed < 30; ++seed) {
        SampledTrial trial = sample_trial_detailed(model, seed);
        std::vector<DetectorId> events;
        for (int t = 0; t < trial.record.rounds; ++t)
            for (int a = 0; a < 4; ++a)
                if (trial.record.bit(a, t)) events.push_back({a, t});
        CorrectionResult via_table = decode_events(events, table);
        CorrectionResult via_oracle = decode_events(events, oracle);
        EXPECT_EQ(via_table.predicted_logical, via_oracle.predicted_logical);
        EXPECT_DOUBLE_EQ(via_table.matching.total_weight,
                         via_oracle.matching.total_weight);
    }
}

TEST(Decode, EventMissingFromTableThrows) {
    auto sched = NoiseSchedule::uniform(3, RateFunction::constant(0.03));
    auto model = true_probabilities(sched, 3, 1);
    WeightTable table = weights_exact(model, RoundInterval{0, 2});
    std::vector<DetectorId> events = {{0, 2}};
    EXPECT_THROW(decode_events(events, table), std::invalid_argument);
}

}  // namespace
}  // namespace aqec
