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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aqec/harness.hpp"
#include "aqec/rng.hpp"

namespace {

using namespace aqec;

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + path);
    f << text;
}

ExperimentConfig load_config(const std::string& path) {
    if (path.empty()) return ExperimentConfig{};
    return config_from_json(read_file(path));
}

struct CommonOpts {
    std::string config_path;
    std::string out_path = "-";
    int64_t seed = -1;        // -1: keep config value
    std::string backend;      // empty: keep config value
    int64_t window = -1;      // -1: keep config value
    int64_t repetitions = -1; // -1: keep config value
};

void add_common(CLI::App* sub, CommonOpts& opts) {
    sub->add_option("-c,--config", opts.config_path, "JSON config file");
    sub->add_option("-o,--out", opts.out_path, "output file (default stdout)");
    sub->add_option("-s,--seed", opts.seed, "master seed override");
    sub->add_option("-b,--backend", opts.backend,
                    "weight backend override (exact|dijkstra)");
    sub->add_option("-w,--window", opts.window, "window length override");
    sub->add_option("-R,--repetitions", opts.repetitions,
                    "repetition count override");
}

ExperimentConfig load_config(const CommonOpts& opts) {
    ExperimentConfig cfg = load_config(opts.config_path);
    if (opts.seed >= 0) cfg.seed = static_cast<uint64_t>(opts.seed);
    if (!opts.backend.empty()) cfg.backend = opts.backend;
    if (opts.window >= 0) cfg.window = opts.window;
    if (opts.repetitions >= 0)
        cfg.repetitions = static_cast<int>(opts.repetitions);
    if (cfg.backend != "dijkstra" && cfg.backend != "exact")
        throw std::invalid_argument("backend must be dijkstra or exact");
    if (cfg.window > 0 && cfg.window <= cfg.lag)
        throw std::invalid_argument("window must be 0 or > lag");
    if (cfg.repetitions < 1)
        throw std::invalid_argument("repetitions must be >= 1");
    return cfg;
}

void run_simulate(const CommonOpts& opts, int64_t rounds, int64_t t_offset) {
    ExperimentConfig cfg = load_config(opts);
    int r = rounds > 0 ? static_cast<int>(rounds) : static_cast<int>(cfg.n_train);
    NoiseSchedule sched = schedule_from_config(cfg);
    SyndromeRecord record = sample_trial(sched, r, cfg.lag, cfg.seed, t_offset);
    write_file(opts.out_path, syndrome_to_text(record));
}

void run_estimate(const CommonOpts& opts, const std::vector<std::string>& ins) {
    ExperimentConfig cfg = load_config(opts);
    if (ins.empty()) throw std::invalid_argument("estimate needs --in");
    if (cfg.window > 0 && ins.size() > 1)
        throw std::invalid_argument(
            "windowed estimation takes a single syndrome stream");
    MomentAccumulator acc(cfg.d, cfg.lag, cfg.window);
    bool first = true;
    for (const std::string& path : ins) {
        SyndromeRecord record = syndrome_from_text(read_file(path));
        if (record.d != cfg.d || record.lag != cfg.lag)
            throw std::invalid_argument("record dimensions disagree with config: " +
                                        path);
        if (first) {
            acc.add_record(record);
            first = false;
        } else {
            MomentAccumulator part(cfg.d, cfg.lag, 0);
            part.add_record(record);
            acc.merge(part);
        }
    }
    DetectorErrorModel topology = true_probabilities(
        schedule_from_config(cfg), 2 * cfg.lag + 1, cfg.lag, 0);
    EstimateSet est = estimate_all(acc, topology, cfg.z);
    write_file(opts.out_path, estimates_to_json(est));
}

void run_decode(const CommonOpts& opts, const std::string& in_path,
                const std::string& dem_path, const std::string& est_path) {
    ExperimentConfig cfg = load_config(opts);
    if (in_path.empty()) throw std::invalid_argument("decode needs --in");
    SyndromeRecord record = syndrome_from_text(read_file(in_path));
    DetectorErrorModel model = [&] {
        if (!dem_path.empty()) return dem_from_text(read_file(dem_path));
        if (!est_path.empty()) {
            EstimateSet est = estimates_from_json(read_file(est_path));
            return calibrated_dem(est, record.rounds, cfg.p_floor);
        }
        throw std::invalid_argument("decode needs --dem or --estimates");
    }();
    if (model.distance() != record.d || model.lag() != record.lag)
        throw std::invalid_argument("model dimensions disagree with record");
    if (model.rounds() < record.rounds)
        throw std::invalid_argument("model has fewer rounds than record");
    if (model.rounds() > record.rounds)
        model = truncate_rounds(model, record.rounds);

    CachedWeightOracle oracle(model, backend_from_config(cfg));
    std::vector<DetectorId> events;
    for (int t = 0; t < record.rounds; ++t)
        for (int a = 0; a < record.d - 1; ++a)
            if (record.bit(a, t)) events.push_back(DetectorId{a, t});
    CorrectionResult result = decode_events(events, oracle);

    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", result.matching.total_weight);
    std::ostringstream out;
    out << "events " << events.size() << '\n'
        << "matched_weight " << buf << '\n'
        << "predicted " << (result.predicted_logical ? 1 : 0) << '\n'
        << "actual " << (record.true_logical ? 1 : 0) << '\n'
        << "correct " << (result.predicted_logical == record.true_logical ? 1 : 0)
        << '\n';
    write_file(opts.out_path, out.str());
}

void run_dump_dem(const CommonOpts& opts, int64_t rounds, int64_t t_offset,
                  const std::string& est_path) {
    ExperimentConfig cfg = load_config(opts);
    int r = rounds > 0 ? static_cast<int>(rounds) : cfg.rounds_test;
    DetectorErrorModel model = [&] {
        if (!est_path.empty()) {
            EstimateSet est = estimates_from_json(read_file(est_path));
            return calibrated_dem(est, r, cfg.p_floor);
        }
        return true_probabilities(schedule_from_config(cfg), r, cfg.lag,
                                  t_offset);
    }();
    write_file(opts.out_path, dem_to_text(model));
}

void run_convergence(const CommonOpts& opts) {
    ExperimentConfig cfg = load_config(opts);
    ConvergenceResult result = exp_convergence(cfg);
    write_file(opts.out_path, result.csv);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", result.eps0);
    std::cerr << "eps0 " << buf << '\n';
    std::snprintf(buf, sizeof buf, "%.12g", result.alpha);
    std::cerr << "alpha " << buf << '\n';
}

void run_fluctuation(const CommonOpts& opts) {
    ExperimentConfig cfg = load_config(opts);
    FluctuationResult result = exp_fluctuation(cfg);
    write_file(opts.out_path, result.csv);
    char buf[64];
    for (size_t i = 0; i < result.windows.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g", result.time_avg[i]);
        std::cerr << "time_avg_w" << result.windows[i] << ' ' << buf << '\n';
    }
    std::snprintf(buf, sizeof buf, "%.12g", result.time_avg_oracle);
    std::cerr << "time_avg_oracle " << buf << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"repetition-code syndrome toolkit with adaptively estimated"
                 " matching weights"};
    app.require_subcommand(1);

    CommonOpts sim_opts;
    int64_t sim_rounds = 0, sim_offset = 0;
    CLI::App* sim = app.add_subcommand("simulate",
                                       "sample one syndrome stream");
    add_common(sim, sim_opts);
    sim->add_option("-r,--rounds", sim_rounds, "rounds (default: n_train)");
    sim->add_option("-t,--t-offset", sim_offset, "starting round index");

    CommonOpts est_opts;
    std::vector<std::string> est_ins;
    CLI::App* est = app.add_subcommand(
        "estimate", "estimate edge probabilities from syndrome streams");
    add_common(est, est_opts);
    est->add_option("-i,--in", est_ins, "syndrome file (repeatable)");

    CommonOpts dec_opts;
    std::string dec_in, dec_dem, dec_est;
    CLI::App* dec = app.add_subcommand("decode",
                                       "match one record and predict the"
                                       " logical outcome");
    add_common(dec, dec_opts);
    dec->add_option("-i,--in", dec_in, "syndrome file");
    dec->add_option("--dem", dec_dem, "detector error model file");
    dec->add_option("--estimates", dec_est, "estimate JSON file");

    CommonOpts dump_opts;
    int64_t dump_rounds = 0, dump_offset = 0;
    std::string dump_est;
    CLI::App* dump = app.add_subcommand("dump-dem",
                                        "write a detector error model");
    add_common(dump, dump_opts);
    dump->add_option("-r,--rounds", dump_rounds, "rounds (default: rounds_test)");
    dump->add_option("-t,--t-offset", dump_offset, "starting round index");
    dump->add_option("--estimates", dump_est,
                     "build the model from an estimate JSON file");

    CommonOpts conv_opts;
    CLI::App* conv = app.add_subcommand(
        "exp-convergence", "training-size convergence sweep (CSV)");
    add_common(conv, conv_opts);

    CommonOpts fluc_opts;
    CLI::App* fluc = app.add_subcommand(
        "exp-fluctuation", "sliding-window tracking of drifting noise (CSV)");
    add_common(fluc, fluc_opts);

    try {
        app.parse(argc, argv);
        if (sim->parsed()) run_simulate(sim_opts, sim_rounds, sim_offset);
        if (est->parsed()) run_estimate(est_opts, est_ins);
        if (dec->parsed()) run_decode(dec_opts, dec_in, dec_dem, dec_est);
        if (dump->parsed()) run_dump_dem(dump_opts, dump_rounds, dump_offset, dump_est);
        if (conv->parsed()) run_convergence(conv_opts);
        if (fluc->parsed()) run_fluctuation(fluc_opts);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n\n" << aqec::config_schema();
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
