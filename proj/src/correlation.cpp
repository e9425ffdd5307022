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

#include "aqec/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace aqec {

MomentAccumulator::MomentAccumulator(int d, int lag, int64_t window)
    : d_(d), lag_(lag), window_(window) {
    if (d_ < 3 || d_ % 2 == 0)
        throw std::invalid_argument("distance must be odd and >= 3");
    if (lag_ != 1 && lag_ != 2)
        throw std::invalid_argument("lag must be 1 or 2");
    if (window_ < 0 || (window_ > 0 && window_ <= lag_))
        throw std::invalid_argument("window must be 0 or > lag");
    vertex_sum_.assign(d_ - 1, 0);
    space_sum_.assign(d_ - 2, 0);
    time_sum_.assign(d_ - 1, 0);
}

void MomentAccumulator::add_round(const uint8_t* row) {
    int width = d_ - 1;
    if (window_ > 0 && static_cast<int64_t>(ring_.size()) == window_) {
        // Retire the oldest row together with the pairs it anchors.
        const std::vector<uint8_t>& oldest = ring_.front();
        const std::vector<uint8_t>& partner = ring_[lag_];
        for (int a = 0; a < width; ++a) {
            vertex_sum_[a] -= oldest[a];
            time_sum_[a] -= oldest[a] & partner[a];
        }
        for (int a = 0; a + 1 < width; ++a)
            space_sum_[a] -= oldest[a] & oldest[a + 1];
        --vertex_n_;
        --pair_n_;
        ring_.pop_front();
    }
    for (int a = 0; a < width; ++a) vertex_sum_[a] += row[a];
    for (int a = 0; a + 1 < width; ++a) space_sum_[a] += row[a] & row[a + 1];
    ++vertex_n_;
    if (static_cast<int64_t>(ring_.size()) >= lag_) {
        const std::vector<uint8_t>& earlier = ring_[ring_.size() - lag_];
        for (int a = 0; a < width; ++a) time_sum_[a] += row[a] & earlier[a];
        ++pair_n_;
    }
    ring_.emplace_back(row, row + width);
    if (window_ == 0 && static_cast<int64_t>(ring_.size()) > lag_)
        ring_.pop_front();
    ++next_t_;
}

void MomentAccumulator::add_rounds(const std::vector<std::vector<uint8_t>>& rows,
                                   int64_t first_t) {
    if (first_t != next_t_)
        throw std::invalid_argument("non-contiguous rows: expected t=" +
                                    std::to_string(next_t_));
    for (const auto& row : rows) {
        if (row.size() != static_cast<size_t>(d_ - 1))
            throw std::invalid_argument("row width != d-1");
        add_round(row.data());
    }
}

void MomentAccumulator::add_record(const SyndromeRecord& record) {
    if (record.d != d_ || record.lag != lag_)
        throw std::invalid_argument("record shape mismatch");
    for (int t = 0; t < record.rounds; ++t)
        add_round(record.bits.data() + static_cast<size_t>(t) * (d_ - 1));
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
    if (d_ != other.d_ || lag_ != other.lag_)
        throw std::invalid_argument("accumulator shape mismatch");
    if (window_ != 0 || other.window_ != 0)
        throw std::invalid_argument("windowed accumulators do not merge");
    for (int a = 0; a < d_ - 1; ++a) {
        vertex_sum_[a] += other.vertex_sum_[a];
        time_sum_[a] += other.time_sum_[a];
    }
    for (int a = 0; a < d_ - 2; ++a) space_sum_[a] += other.space_sum_[a];
    vertex_n_ += other.vertex_n_;
    pair_n_ += other.pair_n_;
    next_t_ += other.next_t_;
}

EdgeEstimate pair_probability(double mean_i, double mean_j, double mean_ij,
                              int64_t n) {
    if (!(mean_i >= 0.0 && mean_i <= 1.0) || !(mean_j >= 0.0 && mean_j <= 1.0))
        throw std::invalid_argument("vertex means must lie in [0, 1]");
    if (mean_ij > std::min(mean_i, mean_j) + 1e-9)
        throw std::invalid_argument("joint mean exceeds a vertex mean");
    double cov = mean_ij - mean_i * mean_j;
    double xor_mean = mean_i + mean_j - 2.0 * mean_ij;
    double denom = 1.0 - 2.0 * xor_mean;
    if (std::abs(denom) < 1e-6)
        throw std::domain_error("degenerate denominator in pair inversion");

    EdgeEstimate est;
    est.n_samples = n;
    double ratio = cov / denom;
    if (ratio <= 0.0) {
        est.p_hat = 0.0;
        est.clamped = ratio < 0.0;
    } else if (ratio >= 0.25) {
        est.p_hat = 0.5;
        est.clamped = ratio > 0.25;
    } else {
        est.p_hat = 0.5 - std::sqrt(0.25 - ratio);
    }
    if (n > 0 && est.p_hat > 0.0 && est.p_hat < 1.0)
        est.std_err = std::sqrt(est.p_hat * (1.0 - est.p_hat) /
                                static_cast<double>(n));
    return est;
}

EdgeEstimate boundary_probability(double mean_i,
                                  const std::vector<double>& neighbor_ps,
                                  int64_t n) {
    if (!(mean_i >= 0.0 && mean_i <= 1.0))
        throw std::invalid_argument("vertex mean must lie in [0, 1]");
    double prod = 1.0;
    for (double p : neighbor_ps) {
        if (!(p >= 0.0 && p <= 0.5))
            throw std::invalid_argument("neighbor probability outside [0, 1/2]");
        prod *= 1.0 - 2.0 * p;
    }
    if (prod < 1e-6)
        throw std::domain_error("degenerate product in boundary inversion");
    EdgeEstimate est;
    est.n_samples = n;
    double raw = 0.5 + (mean_i - 0.5) / prod;
    if (raw < 0.0) {
        est.p_hat = 0.0;
        est.clamped = true;
    } else if (raw >= 0.5) {
        est.p_hat = 0.5;
        est.clamped = true;
    } else {
        est.p_hat = raw;
    }
    if (n > 0 && est.p_hat > 0.0 && est.p_hat < 1.0)
        est.std_err = std::sqrt(est.p_hat * (1.0 - est.p_hat) /
                                static_cast<double>(n));
    return est;
}

const EdgeEstimate& EstimateSet::find(EdgeKind kind, int ancilla) const {
    for (const ClassEstimate& c : classes)
        if (c.kind == kind && c.ancilla == ancilla) return c.estimate;
    throw std::out_of_range("no such edge class");
}

EstimateSet estimate_all(const MomentAccumulator& acc,
                         const DetectorErrorModel& topology, double z) {
    if (topology.distance() != acc.distance() || topology.lag() != acc.lag())
        throw std::invalid_argument("topology does not match accumulator");
    if (acc.vertex_n() < 2 || acc.pair_n() < 2)
        throw std::invalid_argument("need at least 2 samples per class");
    int d = acc.distance();
    int lag = acc.lag();
    if (topology.rounds() < 2 * lag + 1)
        throw std::invalid_argument(
            "topology too short to expose an interior vertex");

    auto vn = static_cast<double>(acc.vertex_n());
    auto pn = static_cast<double>(acc.pair_n());
    std::vector<double> m_v(d - 1), m_sp(std::max(d - 2, 0)), m_tm(d - 1);
    for (int a = 0; a < d - 1; ++a) {
        m_v[a] = static_cast<double>(acc.vertex_sum(a)) / vn;
        m_tm[a] = static_cast<double>(acc.time_sum(a)) / pn;
    }
    for (int a = 0; a < d - 2; ++a)
        m_sp[a] = static_cast<double>(acc.space_sum(a)) / vn;

    auto significant = [&](double mi, double mj, double mij, double n) {
        double cov = mij - mi * mj;
        double se = std::sqrt(std::max(mij * (1.0 - mij), 0.0) / n);
        return cov > z * se;
    };

    EstimateSet out;
    out.d = d;
    out.lag = lag;
    for (int a = 0; a < d - 2; ++a) {
        EdgeEstimate est;
        if (significant(m_v[a], m_v[a + 1], m_sp[a], vn))
            est = pair_probability(m_v[a], m_v[a + 1], m_sp[a],
                                   acc.vertex_n());
        else
            est = EdgeEstimate{0.0, 0.0, true, acc.vertex_n()};
        out.classes.push_back({EdgeKind::space, a, est});
    }
    for (int a = 0; a < d - 1; ++a) {
        EdgeEstimate est;
        if (significant(m_v[a], m_v[a], m_tm[a], pn))
            est = pair_probability(m_v[a], m_v[a], m_tm[a], acc.pair_n());
        else
            est = EdgeEstimate{0.0, 0.0, true, acc.pair_n()};
        out.classes.push_back({EdgeKind::time, a, est});
    }

    // Boundary classes: read incident multiplicities off an interior vertex.
    int r_mid = lag;
    for (int a : {0, d - 2}) {
        std::vector<double> neighbor_ps;
        for (int32_t e : topology.incident_edges({a, r_mid})) {
            const EdgeSpec& spec = topology.edges()[e];
            if (spec.kind == EdgeKind::boundary) continue;
            if (spec.kind == EdgeKind::space) {
                int lower = std::min(spec.u.detector.ancilla,
                                     spec.v.detector.ancilla);
                neighbor_ps.push_back(out.find(EdgeKind::space, lower).p_hat);
            } else {
                neighbor_ps.push_back(out.find(EdgeKind::time, a).p_hat);
            }
        }
        out.classes.push_back(
            {EdgeKind::boundary, a,
             boundary_probability(m_v[a], neighbor_ps, acc.vertex_n())});
    }
    return out;
}

std::string estimates_to_json(const EstimateSet& set) {
    nlohmann::json j;
    j["d"] = set.d;
    j["lag"] = set.lag;
    j["classes"] = nlohmann::json::array();
    for (const ClassEstimate& c : set.classes)
        j["classes"].push_back({{"kind", std::string(to_string(c.kind))},
                                {"ancilla", c.ancilla},
                                {"p_hat", c.estimate.p_hat},
                                {"std_err", c.estimate.std_err},
                                {"clamped", c.estimate.clamped},
                                {"n", c.estimate.n_samples}});
    return j.dump(2) + "\n";
}

EstimateSet estimates_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    EstimateSet set;
    set.d = j.at("d").get<int>();
    set.lag = j.at("lag").get<int>();
    for (const auto& c : j.at("classes")) {
        ClassEstimate ce;
        ce.kind = edge_kind_from_string(c.at("kind").get<std::string>());
        ce.ancilla = c.at("ancilla").get<int>();
        ce.estimate.p_hat = c.at("p_hat").get<double>();
        ce.estimate.std_err = c.at("std_err").get<double>();
        ce.estimate.clamped = c.at("clamped").get<bool>();
        ce.estimate.n_samples = c.at("n").get<int64_t>();
        set.classes.push_back(ce);
    }
    return set;
}

double uncertainty(double p, int64_t n) {
    if (!(p > 0.0 && p < 0.5))
        throw std::domain_error("p must lie in (0, 1/2)");
    if (n < 1) throw std::domain_error("n must be >= 1");
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

int64_t n_min(double p_bar) {
    if (!(p_bar > 0.0 && p_bar < 0.5))
        throw std::domain_error("p must lie in (0, 1/2)");
    return static_cast<int64_t>(std::ceil(1.0 / p_bar));
}

int64_t n_opt(double p_bar, double omega) {
    if (!(p_bar > 0.0 && p_bar < 0.5))
        throw std::domain_error("p must lie in (0, 1/2)");
    if (!(omega > 0.0)) throw std::domain_error("omega must be > 0");
    return std::llround(std::pow(p_bar * omega * omega, -1.0 / 3.0));
}

double omega_c(double p_bar) {
    if (!(p_bar > 0.0 && p_bar < 0.5))
        throw std::domain_error("p must lie in (0, 1/2)");
    return p_bar;
}

}  // namespace aqec
