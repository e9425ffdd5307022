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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "aqec/rng.hpp"

namespace aqec {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw std::invalid_argument(std::string("bad value for config key: ") +
                                    key);
    }
}

void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                const char* what) {
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            throw std::invalid_argument(std::string("unknown ") + what +
                                        " key: " + item.key());
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config parse error: ") +
                                    e.what());
    }
    if (!j.is_object())
        throw std::invalid_argument("config must be a JSON object");
    static const std::set<std::string> allowed = {
        "d",           "lag",        "rounds_test", "schedule",
        "window",      "n_train",    "repetitions", "trials",
        "z",           "backend",    "seed",        "n_list",
        "windows",     "oracle_trials", "eval_start",  "eval_stride",
        "eval_count",  "stages",     "p_floor"};
    check_keys(j, allowed, "config");

    ExperimentConfig c;
    read_field(j, "d", c.d);
    read_field(j, "lag", c.lag);
    read_field(j, "rounds_test", c.rounds_test);
    read_field(j, "window", c.window);
    read_field(j, "n_train", c.n_train);
    read_field(j, "repetitions", c.repetitions);
    read_field(j, "trials", c.trials);
    read_field(j, "z", c.z);
    read_field(j, "backend", c.backend);
    read_field(j, "seed", c.seed);
    read_field(j, "n_list", c.n_list);
    read_field(j, "windows", c.windows);
    read_field(j, "oracle_trials", c.oracle_trials);
    read_field(j, "eval_start", c.eval_start);
    read_field(j, "eval_stride", c.eval_stride);
    read_field(j, "eval_count", c.eval_count);
    read_field(j, "stages", c.stages);
    read_field(j, "p_floor", c.p_floor);

    if (j.contains("schedule")) {
        const auto& s = j.at("schedule");
        if (!s.is_object())
            throw std::invalid_argument("schedule must be a JSON object");
        static const std::set<std::string> sched_keys = {
            "type", "gamma0", "amplitude", "omega", "phase", "targets"};
        check_keys(s, sched_keys, "schedule");
        read_field(s, "type", c.schedule.type);
        read_field(s, "gamma0", c.schedule.gamma0);
        read_field(s, "amplitude", c.schedule.amplitude);
        read_field(s, "omega", c.schedule.omega);
        read_field(s, "phase", c.schedule.phase);
        read_field(s, "targets", c.schedule.targets);
    }

    if (c.d < 3 || c.d % 2 == 0)
        throw std::invalid_argument("d must be odd and >= 3");
    if (c.lag != 1 && c.lag != 2)
        throw std::invalid_argument("lag must be 1 or 2");
    if (c.rounds_test < 10 || c.rounds_test % 10 != 0)
        throw std::invalid_argument("rounds_test must be a multiple of 10");
    if (c.window < 0 || (c.window > 0 && c.window <= c.lag))
        throw std::invalid_argument("window must be 0 or > lag");
    if (c.n_train < 1) throw std::invalid_argument("n_train must be >= 1");
    if (c.window > c.n_train)
        throw std::invalid_argument("window must not exceed n_train");
    if (c.repetitions < 1)
        throw std::invalid_argument("repetitions must be >= 1");
    if (c.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!(c.z >= 0.0)) throw std::invalid_argument("z must be >= 0");
    if (c.backend != "dijkstra" && c.backend != "exact")
        throw std::invalid_argument("backend must be dijkstra or exact");
    if (c.schedule.type != "constant" && c.schedule.type != "sinusoid")
        throw std::invalid_argument("schedule.type must be constant or sinusoid");
    if (c.schedule.targets != "all" && c.schedule.targets != "data" &&
        c.schedule.targets != "ancilla")
        throw std::invalid_argument(
            "schedule.targets must be all, data or ancilla");
    if (c.n_list.empty())
        throw std::invalid_argument("n_list must be non-empty");
    for (int64_t n : c.n_list)
        if (n < 2) throw std::invalid_argument("n_list entries must be >= 2");
    if (c.windows.empty())
        throw std::invalid_argument("windows must be non-empty");
    for (int64_t w : c.windows)
        if (w <= c.lag)
            throw std::invalid_argument("windows entries must be > lag");
    if (c.oracle_trials < 1)
        throw std::invalid_argument("oracle_trials must be >= 1");
    if (c.eval_stride < 1)
        throw std::invalid_argument("eval_stride must be >= 1");
    if (c.eval_count < 1)
        throw std::invalid_argument("eval_count must be >= 1");
    if (c.stages < 1) throw std::invalid_argument("stages must be >= 1");
    if (!(c.p_floor > 0.0 && c.p_floor < 0.5))
        throw std::invalid_argument("p_floor must lie in (0, 1/2)");
    return c;
}

std::string config_schema() {
    return "config keys (all optional, JSON object):\n"
           "  d            odd int >= 3 (default 3)\n"
           "  lag          1 or 2 (default 1)\n"
           "  rounds_test  multiple of 10 (default 100)\n"
           "  schedule     {type: constant|sinusoid, gamma0, amplitude,\n"
           "                omega, phase, targets: all|data|ancilla}\n"
           "  window       0 (unbounded) or int > lag\n"
           "  n_train      training rounds for `estimate` (default 10000)\n"
           "  repetitions  train/test repetitions (default 400)\n"
           "  trials       test trials per measurement (default 2000)\n"
           "  z            significance clamp threshold (default 2.0)\n"
           "  backend      dijkstra|exact (default dijkstra)\n"
           "  seed         master seed (default 1)\n"
           "  n_list       training sizes for exp-convergence\n"
           "  windows      window lengths for exp-fluctuation\n"
           "  oracle_trials  baseline trials (default 200000)\n"
           "  eval_start/eval_stride/eval_count  fluctuation eval grid\n"
           "  stages       fluctuation stages (default 200)\n"
           "  p_floor      probability floor for decode weights\n";
}

NoiseSchedule schedule_from_config(const ExperimentConfig& config) {
    const ScheduleConfig& s = config.schedule;
    NoiseSchedule sched = NoiseSchedule::uniform(
        config.d, RateFunction::constant(s.gamma0));
    if (s.type == "sinusoid") {
        RateFunction f =
            RateFunction::sinusoid(s.gamma0, s.amplitude, s.omega, s.phase);
        if (s.targets == "all" || s.targets == "data")
            sched.data.assign(config.d, f);
        if (s.targets == "all" || s.targets == "ancilla")
            sched.ancilla.assign(config.d - 1, f);
    }
    return sched;
}

WeightBackend backend_from_config(const ExperimentConfig& config) {
    return weight_backend_from_string(config.backend);
}

std::vector<int> default_checkpoints(int rounds_test) {
    if (rounds_test < 10 || rounds_test % 10 != 0)
        throw std::invalid_argument("rounds_test must be a multiple of 10");
    std::vector<int> cps;
    for (int k = 1; k <= 10; ++k) cps.push_back(rounds_test / 10 * k);
    return cps;
}

QubitRates rates_from_estimates(const EstimateSet& estimates, int rounds,
                                double p_floor) {
    int d = estimates.d;
    auto effective = [&](double p) {
        return std::min(std::max(p, p_floor), 0.499999);
    };
    QubitRates rates;
    rates.data.resize(d);
    rates.ancilla.resize(d - 1);
    rates.data[0].assign(rounds,
                         effective(estimates.find(EdgeKind::boundary, 0).p_hat));
    for (int k = 2; k <= d - 1; ++k)
        rates.data[k - 1].assign(
            rounds, effective(estimates.find(EdgeKind::space, k - 2).p_hat));
    rates.data[d - 1].assign(
        rounds, effective(estimates.find(EdgeKind::boundary, d - 2).p_hat));
    for (int a = 0; a < d - 1; ++a)
        rates.ancilla[a].assign(
            rounds, effective(estimates.find(EdgeKind::time, a).p_hat));
    return rates;
}

DetectorErrorModel calibrated_dem(const EstimateSet& estimates, int rounds,
                                  double p_floor) {
    return build_repetition_dem(estimates.d, rounds, estimates.lag,
                                rates_from_estimates(estimates, rounds, p_floor));
}

FidelityCurve fit_fidelity(const std::vector<int>& checkpoints,
                           const std::vector<double>& fidelity) {
    if (checkpoints.size() != fidelity.size())
        throw std::invalid_argument("checkpoint/fidelity size mismatch");
    FidelityCurve curve;
    curve.checkpoints = checkpoints;
    curve.fidelity = fidelity;
    double num = 0.0, den = 0.0;
    for (size_t k = 0; k < checkpoints.size(); ++k) {
        if (!(fidelity[k] > 0.5)) continue;
        double y = std::log(2.0 * fidelity[k] - 1.0);
        num += checkpoints[k] * y;
        den += static_cast<double>(checkpoints[k]) * checkpoints[k];
    }
    if (den == 0.0) {
        curve.eps = kNan;
        curve.valid = false;
        return curve;
    }
    double slope = num / den;
    double ss = 0.0;
    int used = 0;
    for (size_t k = 0; k < checkpoints.size(); ++k) {
        if (!(fidelity[k] > 0.5)) continue;
        double r = std::log(2.0 * fidelity[k] - 1.0) - slope * checkpoints[k];
        ss += r * r;
        ++used;
    }
    curve.residual = std::sqrt(ss / used);
    curve.eps = (1.0 - std::exp(slope)) / 2.0;
    curve.valid = true;
    return curve;
}

CheckpointDecoder::CheckpointDecoder(const DetectorErrorModel& decode_model,
                                     WeightBackend backend,
                                     const std::vector<int>& checkpoints) {
    for (int t : checkpoints) {
        models_.push_back(
            std::make_unique<DetectorErrorModel>(truncate_rounds(decode_model, t)));
        oracles_.push_back(
            std::make_unique<CachedWeightOracle>(*models_.back(), backend));
    }
}

bool CheckpointDecoder::decode_at(int k, const std::vector<DetectorId>& events) {
    if (events.empty()) return false;
    return decode_events(events, *oracles_.at(k)).predicted_logical;
}

FidelityCurve logical_error_rate(const DetectorErrorModel& decode_model,
                                 const NoiseSchedule& truth, int rounds_test,
                                 int lag, int64_t t_offset, int64_t trials,
                                 uint64_t seed, WeightBackend backend) {
    if (decode_model.rounds() < rounds_test)
        throw std::invalid_argument("decode model shorter than rounds_test");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    std::vector<int> checkpoints = default_checkpoints(rounds_test);
    CheckpointDecoder decoder(decode_model, backend, checkpoints);
    DetectorErrorModel truth_model =
        true_probabilities(truth, rounds_test, lag, t_offset);

    std::vector<int64_t> successes(checkpoints.size(), 0);
    for (int64_t trial = 0; trial < trials; ++trial) {
        uint64_t ts = rng::derive_seed(seed, trial);
        std::vector<int32_t> on = sample_edges(truth_model, ts);
        for (size_t k = 0; k < checkpoints.size(); ++k) {
            TruncatedTrial tt = restrict_trial(truth_model, on, checkpoints[k]);
            bool pred = decoder.decode_at(static_cast<int>(k), tt.events);
            if (pred == tt.true_logical) ++successes[k];
        }
    }
    std::vector<double> fidelity(checkpoints.size());
    for (size_t k = 0; k < checkpoints.size(); ++k)
        fidelity[k] =
            static_cast<double>(successes[k]) / static_cast<double>(trials);
    return fit_fidelity(checkpoints, fidelity);
}

double relative_error(double eps_adaptive, double eps_oracle) {
    if (!(eps_oracle > 0.0))
        throw std::domain_error("baseline error rate must be > 0");
    return eps_adaptive / eps_oracle - 1.0;
}

ConvergenceResult exp_convergence(const ExperimentConfig& config) {
    NoiseSchedule sched = schedule_from_config(config);
    WeightBackend backend = backend_from_config(config);
    int lag = config.lag;

    DetectorErrorModel oracle_model =
        true_probabilities(sched, config.rounds_test, lag, 0);
    FidelityCurve oracle_curve = logical_error_rate(
        oracle_model, sched, config.rounds_test, lag, 0, config.oracle_trials,
        rng::derive_seed(config.seed, rng::kStreamOracle), backend);
    if (!oracle_curve.valid || !(oracle_curve.eps > 0.0))
        throw std::runtime_error("baseline error rate could not be measured");

    ConvergenceResult result;
    result.eps0 = oracle_curve.eps;
    DetectorErrorModel topology =
        true_probabilities(sched, 2 * lag + 1, lag, 0);

    uint64_t train_stream = rng::derive_seed(config.seed, rng::kStreamTrain);
    uint64_t test_stream = rng::derive_seed(config.seed, rng::kStreamTest);

    for (size_t ni = 0; ni < config.n_list.size(); ++ni) {
        int64_t n = config.n_list[ni];
        DetectorErrorModel train_model =
            true_probabilities(sched, static_cast<int>(n), lag, 0);
        std::vector<double> deltas;
        for (int rep = 0; rep < config.repetitions; ++rep) {
            uint64_t train_seed =
                rng::derive_seed(rng::derive_seed(train_stream, ni), rep);
            SampledTrial train = sample_trial_detailed(train_model, train_seed);
            MomentAccumulator acc(config.d, lag, config.window);
            acc.add_record(train.record);
            EstimateSet est = estimate_all(acc, topology, config.z);
            DetectorErrorModel decode_model =
                calibrated_dem(est, config.rounds_test, config.p_floor);
            uint64_t test_seed =
                rng::derive_seed(rng::derive_seed(test_stream, ni), rep);
            FidelityCurve curve =
                logical_error_rate(decode_model, sched, config.rounds_test, lag,
                                   0, config.trials, test_seed, backend);
            if (curve.valid)
                deltas.push_back(relative_error(curve.eps, result.eps0));
        }
        double mean = 0.0, sem = 0.0;
        for (double x : deltas) mean += x;
        if (!deltas.empty()) mean /= static_cast<double>(deltas.size());
        if (deltas.size() > 1) {
            double ss = 0.0;
            for (double x : deltas) ss += (x - mean) * (x - mean);
            sem = std::sqrt(ss / (deltas.size() - 1.0) /
                            static_cast<double>(deltas.size()));
        }
        result.rows.push_back(ConvergenceRow{n, mean, sem});
    }

    // Power-law fit over the N values whose mean excess is positive.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int pts = 0;
    for (const ConvergenceRow& row : result.rows) {
        if (!(row.delta_mean > 0.0)) continue;
        double x = std::log10(static_cast<double>(row.n_train));
        double y = std::log10(row.delta_mean);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++pts;
    }
    if (pts >= 2 && pts * sxx - sx * sx > 0.0)
        result.alpha = -(pts * sxy - sx * sy) / (pts * sxx - sx * sx);
    else
        result.alpha = kNan;

    std::ostringstream csv;
    csv << "N,delta_mean,delta_stderr,alpha_fit\n";
    for (const ConvergenceRow& row : result.rows)
        csv << row.n_train << ',' << fmt(row.delta_mean) << ','
            << fmt(row.delta_stderr) << ',' << fmt(result.alpha) << '\n';
    result.csv = csv.str();
    return result;
}

FluctuationResult exp_fluctuation(const ExperimentConfig& config) {
    NoiseSchedule sched = schedule_from_config(config);
    WeightBackend backend = backend_from_config(config);
    int lag = config.lag;
    int d = config.d;

    FluctuationResult result;
    result.windows = config.windows;
    int64_t eval_start = config.eval_start >= 0
                             ? config.eval_start
                             : *std::max_element(config.windows.begin(),
                                                 config.windows.end());
    for (int k = 0; k < config.eval_count; ++k)
        result.eval_times.push_back(eval_start + k * config.eval_stride);
    int64_t stream_rounds = result.eval_times.back();
    if (stream_rounds < 2 * lag + 1)
        throw std::invalid_argument("evaluation grid starts too early");

    std::vector<int> checkpoints = default_checkpoints(config.rounds_test);
    size_t nw = config.windows.size();
    size_t ne = result.eval_times.size();
    size_t nc = checkpoints.size();

    // pooled[decoder][eval][checkpoint]; decoder nw is the oracle.
    std::vector<std::vector<std::vector<int64_t>>> pooled(
        nw + 1, std::vector<std::vector<int64_t>>(ne,
                                                  std::vector<int64_t>(nc, 0)));

    DetectorErrorModel topology = true_probabilities(sched, 2 * lag + 1, lag, 0);
    DetectorErrorModel stream_model =
        true_probabilities(sched, static_cast<int>(stream_rounds), lag, 0);
    uint64_t stage_stream = rng::derive_seed(config.seed, rng::kStreamStage);
    uint64_t test_stream = rng::derive_seed(config.seed, rng::kStreamTest);

    for (int stage = 0; stage < config.stages; ++stage) {
        SampledTrial stream = sample_trial_detailed(
            stream_model, rng::derive_seed(stage_stream, stage));
        std::vector<MomentAccumulator> accs;
        for (int64_t w : config.windows)
            accs.emplace_back(d, lag, w);

        int64_t row = 0;
        for (size_t k = 0; k < ne; ++k) {
            int64_t t_k = result.eval_times[k];
            for (; row < t_k; ++row)
                for (auto& acc : accs)
                    acc.add_round(stream.record.bits.data() +
                                  static_cast<size_t>(row) * (d - 1));

            std::vector<std::unique_ptr<DetectorErrorModel>> dms;
            std::vector<std::unique_ptr<CheckpointDecoder>> decoders;
            for (size_t i = 0; i < nw; ++i) {
                EstimateSet est = estimate_all(accs[i], topology, config.z);
                dms.push_back(std::make_unique<DetectorErrorModel>(
                    calibrated_dem(est, config.rounds_test, config.p_floor)));
                decoders.push_back(std::make_unique<CheckpointDecoder>(
                    *dms.back(), backend, checkpoints));
            }
            // Oracle decoder: the schedule's instantaneous rates at t_k.
            QubitRates oracle_rates;
            oracle_rates.data.resize(d);
            oracle_rates.ancilla.resize(d - 1);
            for (int q = 1; q <= d; ++q)
                oracle_rates.data[q - 1].assign(
                    config.rounds_test,
                    gamma_at(sched, Qubit{Qubit::Role::data, q}, t_k));
            for (int q = 1; q <= d - 1; ++q)
                oracle_rates.ancilla[q - 1].assign(
                    config.rounds_test,
                    gamma_at(sched, Qubit{Qubit::Role::ancilla, q}, t_k));
            dms.push_back(std::make_unique<DetectorErrorModel>(
                build_repetition_dem(d, config.rounds_test, lag, oracle_rates)));
            decoders.push_back(std::make_unique<CheckpointDecoder>(
                *dms.back(), backend, checkpoints));

            DetectorErrorModel test_truth =
                true_probabilities(sched, config.rounds_test, lag, t_k);
            uint64_t eval_seed =
                rng::derive_seed(rng::derive_seed(test_stream, stage), k);
            for (int64_t j = 0; j < config.trials; ++j) {
                std::vector<int32_t> on =
                    sample_edges(test_truth, rng::derive_seed(eval_seed, j));
                for (size_t c = 0; c < nc; ++c) {
                    TruncatedTrial tt =
                        restrict_trial(test_truth, on, checkpoints[c]);
                    for (size_t i = 0; i <= nw; ++i) {
                        bool pred = decoders[i]->decode_at(static_cast<int>(c),
                                                           tt.events);
                        if (pred == tt.true_logical) ++pooled[i][k][c];
                    }
                }
            }
        }
    }

    int64_t per_cell = static_cast<int64_t>(config.stages) * config.trials;
    result.eps.assign(nw, std::vector<double>(ne, kNan));
    result.eps_oracle.assign(ne, kNan);
    for (size_t i = 0; i <= nw; ++i)
        for (size_t k = 0; k < ne; ++k) {
            std::vector<double> fid(nc);
            for (size_t c = 0; c < nc; ++c)
                fid[c] = static_cast<double>(pooled[i][k][c]) /
                         static_cast<double>(per_cell);
            FidelityCurve curve = fit_fidelity(checkpoints, fid);
            double eps = curve.valid ? curve.eps : kNan;
            if (i < nw)
                result.eps[i][k] = eps;
            else
                result.eps_oracle[k] = eps;
        }

    result.time_avg.assign(nw, 0.0);
    for (size_t i = 0; i < nw; ++i) {
        double s = 0.0;
        for (double e : result.eps[i]) s += e;
        result.time_avg[i] = s / static_cast<double>(ne);
    }
    double so = 0.0;
    for (double e : result.eps_oracle) so += e;
    result.time_avg_oracle = so / static_cast<double>(ne);

    std::ostringstream csv;
    csv << 't';
    for (int64_t w : config.windows) csv << ",eps_w" << w;
    csv << ",eps_oracle\n";
    for (size_t k = 0; k < ne; ++k) {
        csv << result.eval_times[k];
        for (size_t i = 0; i < nw; ++i) csv << ',' << fmt(result.eps[i][k]);
        csv << ',' << fmt(result.eps_oracle[k]) << '\n';
    }
    result.csv = csv.str();
    return result;
}

}  // namespace aqec
