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

#include "aqec/detector_graph.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace aqec {

std::string_view to_string(EdgeKind kind) {
    switch (kind) {
        case EdgeKind::space: return "space";
        case EdgeKind::time: return "time";
        case EdgeKind::boundary: return "boundary";
    }
    throw std::logic_error("bad EdgeKind");
}

EdgeKind edge_kind_from_string(std::string_view s) {
    if (s == "space") return EdgeKind::space;
    if (s == "time") return EdgeKind::time;
    if (s == "boundary") return EdgeKind::boundary;
    throw std::invalid_argument("unknown edge kind: " + std::string(s));
}

DetectorErrorModel::DetectorErrorModel(int d, int rounds, int lag,
                                       std::vector<EdgeSpec> edges)
    : d_(d), rounds_(rounds), lag_(lag), edges_(std::move(edges)) {
    if (d_ < 3 || d_ % 2 == 0)
        throw std::invalid_argument("distance must be odd and >= 3");
    if (rounds_ < 1) throw std::invalid_argument("rounds must be >= 1");
    if (lag_ != 1 && lag_ != 2)
        throw std::invalid_argument("lag must be 1 or 2");

    incidence_.resize(num_detectors());
    u_index_.reserve(edges_.size());
    v_index_.reserve(edges_.size());

    auto endpoint_index = [&](const EdgeEndpoint& e) -> int32_t {
        if (e.is_boundary) return -1;
        if (!contains(e.detector))
            throw std::invalid_argument("edge endpoint outside detector grid");
        return detector_index(e.detector);
    };

    std::vector<std::tuple<int32_t, int32_t, uint8_t>> seen;
    seen.reserve(edges_.size());
    for (size_t i = 0; i < edges_.size(); ++i) {
        const EdgeSpec& e = edges_[i];
        if (e.u.is_boundary && e.v.is_boundary)
            throw std::invalid_argument("edge with two boundary endpoints");
        if (!(e.probability >= 0.0 && e.probability <= 1.0))
            throw std::invalid_argument("edge probability outside [0, 1]");
        if ((e.kind == EdgeKind::boundary) !=
            (e.u.is_boundary || e.v.is_boundary))
            throw std::invalid_argument(
                "boundary kind must match boundary endpoint");
        int32_t ui = endpoint_index(e.u);
        int32_t vi = endpoint_index(e.v);
        u_index_.push_back(ui);
        v_index_.push_back(vi);
        if (ui >= 0) incidence_[ui].push_back(static_cast<int32_t>(i));
        if (vi >= 0 && vi != ui)
            incidence_[vi].push_back(static_cast<int32_t>(i));
        seen.emplace_back(std::min(ui, vi), std::max(ui, vi),
                          static_cast<uint8_t>(e.kind));
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw std::invalid_argument("duplicate edge (same endpoints and kind)");
}

int32_t DetectorErrorModel::detector_index(DetectorId id) const {
    if (!contains(id))
        throw std::out_of_range("detector outside grid");
    return id.round * (d_ - 1) + id.ancilla;
}

DetectorId DetectorErrorModel::detector_at(int32_t index) const {
    if (index < 0 || index >= num_detectors())
        throw std::out_of_range("detector index outside grid");
    return DetectorId{index % (d_ - 1), index / (d_ - 1)};
}

bool DetectorErrorModel::contains(DetectorId id) const {
    return id.ancilla >= 0 && id.ancilla < d_ - 1 && id.round >= 0 &&
           id.round < rounds_;
}

const std::vector<int32_t>& DetectorErrorModel::incident_edges(
    DetectorId id) const {
    return incidence_[detector_index(id)];
}

DetectorErrorModel build_repetition_dem(int d, int rounds, int lag,
                                        const QubitRates& gammas) {
    if (d < 3 || d % 2 == 0)
        throw std::invalid_argument("distance must be odd and >= 3");
    if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    if (lag != 1 && lag != 2) throw std::invalid_argument("lag must be 1 or 2");
    auto check_table = [&](const std::vector<std::vector<double>>& t,
                           size_t qubits, const char* what) {
        if (t.size() != qubits)
            throw std::invalid_argument(std::string(what) +
                                        " rate table has wrong qubit count");
        for (const auto& row : t) {
            if (row.size() != static_cast<size_t>(rounds))
                throw std::invalid_argument(std::string(what) +
                                            " rate table has wrong round count");
            for (double p : row)
                if (!(p >= 0.0 && p <= 1.0))
                    throw std::invalid_argument("rate outside [0, 1]");
        }
    };
    check_table(gammas.data, static_cast<size_t>(d), "data");
    check_table(gammas.ancilla, static_cast<size_t>(d - 1), "ancilla");

    std::vector<EdgeSpec> edges;
    edges.reserve(static_cast<size_t>(rounds) * (2 * d - 2));
    for (int t = 0; t < rounds; ++t) {
        edges.push_back(EdgeSpec{EdgeEndpoint::at({0, t}),
                                 EdgeEndpoint::boundary(), gammas.data[0][t],
                                 EdgeKind::boundary, true});
        for (int k = 2; k <= d - 1; ++k)
            edges.push_back(EdgeSpec{EdgeEndpoint::at({k - 2, t}),
                                     EdgeEndpoint::at({k - 1, t}),
                                     gammas.data[k - 1][t], EdgeKind::space,
                                     false});
        edges.push_back(EdgeSpec{EdgeEndpoint::at({d - 2, t}),
                                 EdgeEndpoint::boundary(),
                                 gammas.data[d - 1][t], EdgeKind::boundary,
                                 false});
        if (t + lag < rounds)
            for (int a = 0; a < d - 1; ++a)
                edges.push_back(EdgeSpec{EdgeEndpoint::at({a, t}),
                                         EdgeEndpoint::at({a, t + lag}),
                                         gammas.ancilla[a][t], EdgeKind::time,
                                         false});
    }
    return DetectorErrorModel(d, rounds, lag, std::move(edges));
}

std::vector<uint8_t> evaluate_detectors(const DetectorErrorModel& model,
                                        const std::vector<uint8_t>& samples) {
    if (samples.size() != model.edges().size())
        throw std::invalid_argument("sample count != edge count");
    std::vector<uint8_t> det(model.num_detectors(), 0);
    for (size_t e = 0; e < samples.size(); ++e) {
        if (!samples[e]) continue;
        int32_t u = model.edge_u_index(static_cast<int32_t>(e));
        int32_t v = model.edge_v_index(static_cast<int32_t>(e));
        if (u >= 0) det[u] ^= 1;
        if (v >= 0) det[v] ^= 1;
    }
    return det;
}

bool logical_parity(const DetectorErrorModel& model,
                    const std::vector<uint8_t>& samples) {
    if (samples.size() != model.edges().size())
        throw std::invalid_argument("sample count != edge count");
    bool parity = false;
    const auto& edges = model.edges();
    for (size_t e = 0; e < samples.size(); ++e)
        if (samples[e] && edges[e].logical_crossing) parity = !parity;
    return parity;
}

namespace {

std::string format_probability(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", p);
    return buf;
}

void print_endpoint(std::ostream& out, const EdgeEndpoint& e) {
    if (e.is_boundary)
        out << "B B";
    else
        out << e.detector.ancilla << ' ' << e.detector.round;
}

}  // namespace

void dem_to_stream(const DetectorErrorModel& model, std::ostream& out) {
    out << "# dem d=" << model.distance() << " rounds=" << model.rounds()
        << " lag=" << model.lag() << '\n';
    for (const EdgeSpec& e : model.edges()) {
        out << to_string(e.kind) << ' ';
        print_endpoint(out, e.u);
        out << ' ';
        print_endpoint(out, e.v);
        out << ' ' << format_probability(e.probability) << ' '
            << (e.logical_crossing ? 1 : 0) << '\n';
    }
}

std::string dem_to_text(const DetectorErrorModel& model) {
    std::ostringstream out;
    dem_to_stream(model, out);
    return out.str();
}

DetectorErrorModel dem_from_stream(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("empty dem input");
    int d = 0, rounds = 0, lag = 0;
    if (std::sscanf(line.c_str(), "# dem d=%d rounds=%d lag=%d", &d, &rounds,
                    &lag) != 3)
        throw std::invalid_argument("bad dem header: " + line);

    std::vector<EdgeSpec> edges;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kind, au, ru, av, rv;
        double p;
        int crossing;
        if (!(ls >> kind >> au >> ru >> av >> rv >> p >> crossing))
            throw std::invalid_argument("bad dem edge line: " + line);
        auto parse_endpoint = [&](const std::string& a,
                                  const std::string& r) -> EdgeEndpoint {
            if (a == "B" || r == "B") {
                if (a != "B" || r != "B")
                    throw std::invalid_argument("bad boundary endpoint: " +
                                                line);
                return EdgeEndpoint::boundary();
            }
            return EdgeEndpoint::at(
                DetectorId{std::stoi(a), std::stoi(r)});
        };
        edges.push_back(EdgeSpec{parse_endpoint(au, ru), parse_endpoint(av, rv),
                                 p, edge_kind_from_string(kind),
                                 crossing != 0});
    }
    return DetectorErrorModel(d, rounds, lag, std::move(edges));
}

DetectorErrorModel dem_from_text(const std::string& text) {
    std::istringstream in(text);
    return dem_from_stream(in);
}

}  // namespace aqec
