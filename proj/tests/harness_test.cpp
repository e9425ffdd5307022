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

#include "aqec/harness.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace aqec {
namespace {

TEST(ConfigFromJson, DefaultsAndOverrides) {
    ExperimentConfig def = config_from_json("{}");
    EXPECT_EQ(def.d, 3);
    EXPECT_EQ(def.lag, 1);
    EXPECT_EQ(def.backend, "dijkstra");
    EXPECT_EQ(def.seed, 1u);
    EXPECT_EQ(def.schedule.type, "constant");

    ExperimentConfig c = config_from_json(R"({
        "d": 5, "lag": 2, "rounds_test": 50,
        "schedule": {"type": "sinusoid", "gamma0": 0.005,
                     "amplitude": 0.005, "omega": 3.14e-4,
                     "phase": 0.5, "targets": "ancilla"},
        "window": 2000, "n_train": 20000, "repetitions": 7,
        "trials": 123, "z": 1.5, "backend": "exact", "seed": 99,
        "n_list": [100, 1000], "windows": [500, 2000],
        "oracle_trials": 777, "eval_start": 4000, "eval_stride": 500,
        "eval_count": 3, "stages": 4, "p_floor": 1e-5
    })");
    EXPECT_EQ(c.d, 5);
    EXPECT_EQ(c.lag, 2);
    EXPECT_EQ(c.rounds_test, 50);
    EXPECT_EQ(c.schedule.targets, "ancilla");
    EXPECT_DOUBLE_EQ(c.schedule.phase, 0.5);
    EXPECT_EQ(c.window, 2000);
    EXPECT_EQ(c.repetitions, 7);
    EXPECT_EQ(c.backend, "exact");
    EXPECT_EQ(c.seed, 99u);
    EXPECT_EQ(c.n_list, (std::vector<int64_t>{100, 1000}));
    EXPECT_EQ(c.windows, (std::vector<int64_t>{500, 2000}));
    EXPECT_EQ(c.stages, 4);
}

TEST(ConfigFromJson, RejectsUnknownAndMalformedKeys) {
    try {
        config_from_json(R"({"dee": 3})");
        FAIL() << "expected invalid_argument";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("dee"), std::string::npos);
    }
    try {
        config_from_json(R"({"schedule": {"gamma": 0.1}})");
        FAIL() << "expected invalid_argument";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("gamma"), std::string::npos);
    }
    EXPECT_THROW(config_from_json("not json"), std::invalid_argument);
    EXPECT_THROW(config_from_json("[1,2]"), std::invalid_argument);
    EXPECT_THROW(config_from_json(R"({"d": "three"})"), std::invalid_argument);
}

TEST(ConfigFromJson, ValidatesRanges) {
    EXPECT_THROW(config_from_json(R"({"d": 4})"), std::invalid_argument);
    EXPECT_THROW(config_from_json(R"({"lag": 3})"), std::invalid_argument);
    EXPECT_THROW(config_from_json(R"({"rounds_test": 55})"),
                 std::invalid_argument);
    EXPECT_THROW(config_from_json(R"({"window": 1})"), std::invalid_argument);
    EXPECT_THROW(config_from_json(R"({"window": 20000})"),
                 std::invalid_argument);
    EXPECT_THROW(config_from_json(R"({"backend": "astar"})"),
                 std::invalid_argument);
    EXPECT_THROW(config_from_json(R"({"schedule": {"type": "square"}})"),
                 std::invalid_argument);
    EXPECT_THROW(config_from_json(R"({"schedule": {"targets": "qubits"}})"),
                 std::invalid_argument);
    EXPECT_THROW(config_from_json(R"({"n_list": []})"), std::invalid_argument);
    EXPECT_THROW(config_from_json(R"({"n_list": [1]})"), std::invalid_argument);
    EXPECT_THROW(config_from_json(R"({"windows": [1]})"),
                 std::invalid_argument);
    EXPECT_THROW(config_from_json(R"({"p_floor": 0.6})"),
                 std::invalid_argument);
    EXPECT_THROW(config_from_json(R"({"trials": 0})"), std::invalid_argument);
    EXPECT_THROW(config_from_json(R"({"z": -1})"), std::invalid_argument);
}

TEST(ConfigSchema, MentionsTheKeys) {
    std::string schema = config_schema();
    for (const char* key : {"d", "lag", "schedule", "window", "backend",
                            "seed", "n_list", "windows", "p_floor"})
        EXPECT_NE(schema.find(key), std::string::npos) << key;
}

TEST(ScheduleFromConfig, AppliesTargets) {
    ExperimentConfig c = config_from_json(R"({
        "schedule": {"type": "sinusoid", "gamma0": 0.005,
                     "amplitude": 0.005, "omega": 1.0, "phase": 0.0,
                     "targets": "ancilla"}
    })");
    NoiseSchedule s = schedule_from_config(c);
    // At omega * t = pi/2 the sinusoid peaks; data stays flat.
    double t = std::acos(-1.0) / 2.0;
    EXPECT_NEAR(s.ancilla[0].at(t), 0.010, 1e-12);
    EXPECT_DOUBLE_EQ(s.data[0].at(t), 0.005);

    c.schedule.targets = "data";
    s = schedule_from_config(c);
    EXPECT_NEAR(s.data[2].at(t), 0.010, 1e-12);
    EXPECT_DOUBLE_EQ(s.ancilla[1].at(t), 0.005);

    c.schedule.targets = "all";
    s = schedule_from_config(c);
    EXPECT_NEAR(s.data[0].at(t), 0.010, 1e-12);
    EXPECT_NEAR(s.ancilla[0].at(t), 0.010, 1e-12);

    c.schedule.type = "constant";
    s = schedule_from_config(c);
    EXPECT_DOUBLE_EQ(s.data[0].at(t), 0.005);

    EXPECT_EQ(backend_from_config(c), WeightBackend::shortest_path);
    c.backend = "exact";
    EXPECT_EQ(backend_from_config(c), WeightBackend::exact);
}

TEST(DefaultCheckpoints, TenEvenSteps) {
    std::vector<int> cps = default_checkpoints(100);
    ASSERT_EQ(cps.size(), 10u);
    EXPECT_EQ(cps.front(), 10);
    EXPECT_EQ(cps.back(), 100);
    EXPECT_EQ(cps[4], 50);
    EXPECT_EQ(default_checkpoints(10),
              (std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}));
    EXPECT_THROW(default_checkpoints(0), std::invalid_argument);
    EXPECT_THROW(default_checkpoints(55), std::invalid_argument);
}

EstimateSet hand_estimates() {
    EstimateSet set;
    set.d = 3;
    set.lag = 1;
    set.classes = {
        {EdgeKind::space, 0, {0.02, 0.0, false, 100}},
        {EdgeKind::time, 0, {0.04, 0.0, false, 100}},
        {EdgeKind::time, 1, {0.05, 0.0, false, 100}},
        {EdgeKind::boundary, 0, {0.01, 0.0, false, 100}},
        {EdgeKind::boundary, 1, {0.03, 0.0, false, 100}},
    };
    return set;
}

TEST(RatesFromEstimates, MapsClassesToQubits) {
    QubitRates rates = rates_from_estimates(hand_estimates(), 2, 1e-6);
    ASSERT_EQ(rates.data.size(), 3u);
    ASSERT_EQ(rates.ancilla.size(), 2u);
    EXPECT_DOUBLE_EQ(rates.data[0][0], 0.01);   // left boundary
    EXPECT_DOUBLE_EQ(rates.data[1][1], 0.02);   // interior space
    EXPECT_DOUBLE_EQ(rates.data[2][0], 0.03);   // right boundary
    EXPECT_DOUBLE_EQ(rates.ancilla[0][0], 0.04);
    EXPECT_DOUBLE_EQ(rates.ancilla[1][1], 0.05);
}

TEST(RatesFromEstimates, FloorsAndCaps) {
    EstimateSet set = hand_estimates();
    set.classes[0].estimate.p_hat = 0.0;  // clamped space class
    set.classes[1].estimate.p_hat = 0.5;  // saturated time class
    QubitRates rates = rates_from_estimates(set, 1, 1e-4);
    EXPECT_DOUBLE_EQ(rates.data[1][0], 1e-4);
    EXPECT_DOUBLE_EQ(rates.ancilla[0][0], 0.499999);
}

TEST(CalibratedDem, EdgesCarryTheEstimates) {
    DetectorErrorModel model = calibrated_dem(hand_estimates(), 3, 1e-6);
    EXPECT_EQ(model.distance(), 3);
    EXPECT_EQ(model.rounds(), 3);
    for (const EdgeSpec& e : model.edges()) {
        switch (e.kind) {
            case EdgeKind::space:
                EXPECT_DOUBLE_EQ(e.probability, 0.02);
                break;
            case EdgeKind::time:
                EXPECT_DOUBLE_EQ(e.probability,
                                 e.u.detector.ancilla == 0 ? 0.04 : 0.05);
                break;
            case EdgeKind::boundary: {
                const DetectorId& det =
                    e.u.is_boundary ? e.v.detector : e.u.detector;
                EXPECT_DOUBLE_EQ(e.probability,
                                 det.ancilla == 0 ? 0.01 : 0.03);
                break;
            }
        }
    }
}

TEST(FitFidelity, RecoversExactDecay) {
    const double eps = 0.01;
    std::vector<int> cps = default_checkpoints(100);
    std::vector<double> fid;
    for (int t : cps)
        fid.push_back(0.5 + 0.5 * std::pow(1.0 - 2.0 * eps, t));
    FidelityCurve curve = fit_fidelity(cps, fid);
    EXPECT_TRUE(curve.valid);
    EXPECT_NEAR(curve.eps, eps, 1e-12);
    EXPECT_NEAR(curve.residual, 0.0, 1e-12);
    EXPECT_EQ(curve.checkpoints, cps);
}

TEST(FitFidelity, SkipsSaturatedCheckpointsAndFlagsEmptyFits) {
    std::vector<int> cps = {10, 20, 30};
    FidelityCurve dead = fit_fidelity(cps, {0.5, 0.49, 0.31});
    EXPECT_FALSE(dead.valid);
    EXPECT_TRUE(std::isnan(dead.eps));

    // The saturated tail is excluded; the early points still pin eps.
    const double eps = 0.02;
    std::vector<double> fid = {0.5 + 0.5 * std::pow(0.96, 10),
                               0.5 + 0.5 * std::pow(0.96, 20), 0.5};
    FidelityCurve curve = fit_fidelity(cps, fid);
    EXPECT_TRUE(curve.valid);
    EXPECT_NEAR(curve.eps, eps, 1e-12);

    FidelityCurve noisy = fit_fidelity({10, 20}, {0.9, 0.88});
    EXPECT_TRUE(noisy.valid);
    EXPECT_GT(noisy.residual, 0.0);

    EXPECT_THROW(fit_fidelity({10, 20}, {0.9}), std::invalid_argument);
}

TEST(CheckpointDecoderTest, MatchesManualTruncation) {
    auto sched = NoiseSchedule::uniform(3, RateFunction::constant(0.01));
    auto model = true_probabilities(sched, 20, 1);
    std::vector<int> cps = {10, 20};
    CheckpointDecoder decoder(model, WeightBackend::exact, cps);
    EXPECT_EQ(decoder.num_checkpoints(), 2);

    EXPECT_FALSE(decoder.decode_at(0, {}));

    std::vector<DetectorId> events = {{0, 3}, {1, 5}};
    for (size_t k = 0; k < cps.size(); ++k) {
        DetectorErrorModel cut = truncate_rounds(model, cps[k]);
        CachedWeightOracle oracle(cut, WeightBackend::exact);
        CorrectionResult manual = decode_events(events, oracle);
        EXPECT_EQ(decoder.decode_at(static_cast<int>(k), events),
                  manual.predicted_logical);
    }
}

TEST(LogicalErrorRate, SilentChannelScoresPerfectly) {
    auto truth = NoiseSchedule::uniform(3, RateFunction::constant(0.0));
    auto decode_sched = NoiseSchedule::uniform(3, RateFunction::constant(0.01));
    auto decode_model = true_probabilities(decode_sched, 20, 1);
    FidelityCurve curve = logical_error_rate(decode_model, truth, 20, 1, 0, 50,
                                             7, WeightBackend::shortest_path);
    ASSERT_TRUE(curve.valid);
    EXPECT_DOUBLE_EQ(curve.eps, 0.0);
    for (double f : curve.fidelity) EXPECT_DOUBLE_EQ(f, 1.0);
}

TEST(LogicalErrorRate, SubPhysicalAndDeterministic) {
    const double gamma = 0.02;
    auto truth = NoiseSchedule::uniform(3, RateFunction::constant(gamma));
    auto model = true_probabilities(truth, 20, 1);
    FidelityCurve a = logical_error_rate(model, truth, 20, 1, 0, 3000, 11,
                                         WeightBackend::shortest_path);
    ASSERT_TRUE(a.valid);
    EXPECT_GT(a.eps, 0.0);
    EXPECT_LT(a.eps, gamma);

    FidelityCurve b = logical_error_rate(model, truth, 20, 1, 0, 3000, 11,
                                         WeightBackend::shortest_path);
    EXPECT_EQ(a.fidelity, b.fidelity);
    EXPECT_DOUBLE_EQ(a.eps, b.eps);

    EXPECT_THROW(logical_error_rate(model, truth, 40, 1, 0, 10, 1,
                                    WeightBackend::shortest_path),
                 std::invalid_argument);
    EXPECT_THROW(logical_error_rate(model, truth, 20, 1, 0, 0, 1,
                                    WeightBackend::shortest_path),
                 std::invalid_argument);
}

TEST(LogicalErrorRate, LargerDistanceSuppressesErrors) {
    const double gamma = 0.02;
    auto truth3 = NoiseSchedule::uniform(3, RateFunction::constant(gamma));
    auto truth5 = NoiseSchedule::uniform(5, RateFunction::constant(gamma));
    auto m3 = true_probabilities(truth3, 20, 1);
    auto m5 = true_probabilities(truth5, 20, 1);
    FidelityCurve c3 = logical_error_rate(m3, truth3, 20, 1, 0, 3000, 13,
                                          WeightBackend::shortest_path);
    FidelityCurve c5 = logical_error_rate(m5, truth5, 20, 1, 0, 3000, 13,
                                          WeightBackend::shortest_path);
    ASSERT_TRUE(c3.valid);
    ASSERT_TRUE(c5.valid);
    EXPECT_LT(c5.eps, c3.eps);
}

TEST(RelativeError, HandValues) {
    EXPECT_DOUBLE_EQ(relative_error(0.005, 0.005), 0.0);
    EXPECT_NEAR(relative_error(0.006, 0.005), 0.2, 1e-12);
    EXPECT_NEAR(relative_error(0.004, 0.005), -0.2, 1e-12);
    EXPECT_THROW(relative_error(0.01, 0.0), std::domain_error);
}

TEST(ExpConvergence, TinyRunHasShapeAndDeterminism) {
    ExperimentConfig c = config_from_json(R"({
        "d": 3, "rounds_test": 20,
        "schedule": {"type": "constant", "gamma0": 0.02},
        "n_list": [200, 2000], "repetitions": 3, "trials": 300,
        "oracle_trials": 4000, "seed": 5
    })");
    ConvergenceResult r = exp_convergence(c);
    EXPECT_GT(r.eps0, 0.0);
    ASSERT_EQ(r.rows.size(), 2u);
    EXPECT_EQ(r.rows[0].n_train, 200);
    EXPECT_EQ(r.rows[1].n_train, 2000);
    EXPECT_EQ(r.csv.substr(0, r.csv.find('\n')),
              "N,delta_mean,delta_stderr,alpha_fit");
    EXPECT_EQ(static_cast<int>(std::count(r.csv.begin(), r.csv.end(), '\n')),
              3);

    ConvergenceResult again = exp_convergence(c);
    EXPECT_EQ(again.csv, r.csv);
    EXPECT_DOUBLE_EQ(again.eps0, r.eps0);
}

TEST(ExpFluctuation, TinyRunHasShapeAndDeterminism) {
    ExperimentConfig c = config_from_json(R"({
        "d": 3, "rounds_test": 20,
        "schedule": {"type": "sinusoid", "gamma0": 0.02,
                     "amplitude": 0.01, "omega": 0.05,
                     "targets": "ancilla"},
        "windows": [20, 50], "stages": 2, "trials": 100,
        "eval_start": 50, "eval_stride": 20, "eval_count": 2, "seed": 9
    })");
    FluctuationResult r = exp_fluctuation(c);
    EXPECT_EQ(r.eval_times, (std::vector<int64_t>{50, 70}));
    ASSERT_EQ(r.eps.size(), 2u);
    ASSERT_EQ(r.eps[0].size(), 2u);
    ASSERT_EQ(r.eps_oracle.size(), 2u);
    EXPECT_EQ(r.csv.substr(0, r.csv.find('\n')), "t,eps_w20,eps_w50,eps_oracle");
    EXPECT_EQ(static_cast<int>(std::count(r.csv.begin(), r.csv.end(), '\n')),
              3);
    EXPECT_EQ(r.time_avg.size(), 2u);

    FluctuationResult again = exp_fluctuation(c);
    EXPECT_EQ(again.csv, r.csv);

    ExperimentConfig early = c;
    early.windows = {2};
    early.eval_start = 2;
    early.eval_count = 1;
    EXPECT_THROW(exp_fluctuation(early), std::invalid_argument);
}

}  // namespace
}  // namespace aqec
