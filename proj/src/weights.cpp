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

#include "aqec/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace aqec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kPathStorageCap = 512;

struct Arc {
    int32_t to;
    double cost;
    double p;
    uint8_t crossing;
    int32_t edge;
};

struct BoundaryArc {
    int32_t at;
    double cost;
    uint8_t crossing;
    int32_t edge;
};

// Sub-graph of a detector error model restricted to a round block, indexed
// by member id (lexicographic in (round, ancilla)).
struct PathGraph {
    int n = 0;
    std::vector<DetectorId> members;
    std::vector<int32_t> member_of;  // model linear index -> member id or -1
    std::vector<std::vector<Arc>> adj;
    std::vector<BoundaryArc> bnd;
    std::vector<double> p_diag;  // summed boundary probability per member
};

PathGraph build_path_graph(const DetectorErrorModel& model,
                           RoundInterval block) {
    int end = block.end < 0 ? model.rounds() : block.end;
    if (block.begin < 0 || block.begin >= end || end > model.rounds())
        throw std::invalid_argument("bad round interval");
    int width = model.distance() - 1;

    PathGraph g;
    g.member_of.assign(model.num_detectors(), -1);
    for (int t = block.begin; t < end; ++t)
        for (int a = 0; a < width; ++a) {
            g.member_of[t * width + a] = g.n++;
            g.members.push_back(DetectorId{a, t});
        }
    g.adj.resize(g.n);
    g.p_diag.assign(g.n, 0.0);

    const auto& edges = model.edges();
    for (size_t e = 0; e < edges.size(); ++e) {
        double p = edges[e].probability;
        if (p >= 0.5)
            throw std::domain_error(
                "edge probability >= 1/2 unsupported by the weight engine");
        if (p <= 0.0) continue;
        int32_t u = model.edge_u_index(static_cast<int32_t>(e));
        int32_t v = model.edge_v_index(static_cast<int32_t>(e));
        int32_t mu = u >= 0 ? g.member_of[u] : -1;
        int32_t mv = v >= 0 ? g.member_of[v] : -1;
        double cost = -std::log(p);
        uint8_t crossing = edges[e].logical_crossing ? 1 : 0;
        if (u < 0 || v < 0) {
            int32_t at = u < 0 ? mv : mu;
            if (at < 0) continue;
            g.bnd.push_back({at, cost, crossing, static_cast<int32_t>(e)});
            g.p_diag[at] += p;
        } else {
            if (mu < 0 || mv < 0) continue;  // straddles the block
            g.adj[mu].push_back({mv, cost, p, crossing, static_cast<int32_t>(e)});
            g.adj[mv].push_back({mu, cost, p, crossing, static_cast<int32_t>(e)});
        }
    }
    return g;
}

struct DijkstraRow {
    std::vector<double> dist;
    std::vector<uint8_t> par;
    std::vector<int32_t> pred_edge;
    std::vector<int32_t> pred_member;
    double bnd_w = kInf;
    uint8_t bnd_par = 0;
    int32_t bnd_at = -1;
    int32_t bnd_edge = -1;
};

DijkstraRow dijkstra(const PathGraph& g, int src) {
    DijkstraRow row;
    row.dist.assign(g.n, kInf);
    row.par.assign(g.n, 0);
    row.pred_edge.assign(g.n, -1);
    row.pred_member.assign(g.n, -1);
    row.dist[src] = 0.0;

    using Item = std::pair<double, int32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    pq.emplace(0.0, src);
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > row.dist[u]) continue;
        for (const Arc& arc : g.adj[u]) {
            double nd = d + arc.cost;
            if (nd < row.dist[arc.to]) {
                row.dist[arc.to] = nd;
                row.par[arc.to] = row.par[u] ^ arc.crossing;
                row.pred_edge[arc.to] = arc.edge;
                row.pred_member[arc.to] = u;
                pq.emplace(nd, arc.to);
            }
        }
    }
    for (const BoundaryArc& b : g.bnd) {
        double w = row.dist[b.at] + b.cost;
        if (w < row.bnd_w) {
            row.bnd_w = w;
            row.bnd_par = row.par[b.at] ^ b.crossing;
            row.bnd_at = b.at;
            row.bnd_edge = b.edge;
        }
    }
    return row;
}

std::vector<int32_t> extract_path(const DijkstraRow& row, int dst) {
    std::vector<int32_t> path;
    for (int v = dst; row.pred_edge[v] >= 0; v = row.pred_member[v])
        path.push_back(row.pred_edge[v]);
    std::reverse(path.begin(), path.end());
    return path;
}

std::vector<int32_t> extract_boundary_path(const DijkstraRow& row) {
    if (row.bnd_edge < 0) return {};
    std::vector<int32_t> path = extract_path(row, row.bnd_at);
    path.push_back(row.bnd_edge);
    return path;
}

std::string format_weight(double w) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", w);
    return buf;
}

}  // namespace

std::string_view to_string(WeightBackend backend) {
    return backend == WeightBackend::exact ? "exact" : "dijkstra";
}

WeightBackend weight_backend_from_string(std::string_view s) {
    if (s == "exact") return WeightBackend::exact;
    if (s == "dijkstra") return WeightBackend::shortest_path;
    throw std::invalid_argument("unknown weight backend: " + std::string(s));
}

int WeightTable::index_of(DetectorId id) const {
    auto it = std::find(members.begin(), members.end(), id);
    return it == members.end() ? -1
                               : static_cast<int>(it - members.begin());
}

double WeightTable::pair_weight(int i, int j) const {
    return pair_w.at(static_cast<size_t>(i) * members.size() + j);
}

bool WeightTable::pair_parity(int i, int j) const {
    return pair_par.at(static_cast<size_t>(i) * members.size() + j) != 0;
}

const std::vector<int32_t>& WeightTable::pair_path(int i, int j) const {
    if (!has_paths) throw std::logic_error("paths not stored for this table");
    return pair_paths.at(static_cast<size_t>(i) * members.size() + j);
}

const std::vector<int32_t>& WeightTable::boundary_path(int i) const {
    if (!has_paths) throw std::logic_error("paths not stored for this table");
    return boundary_paths.at(i);
}

DetectorErrorModel truncate_rounds(const DetectorErrorModel& model,
                                   int rounds_limit) {
    if (rounds_limit < 1 || rounds_limit > model.rounds())
        throw std::out_of_range("rounds_limit outside [1, rounds]");
    int width = model.distance() - 1;
    std::vector<EdgeSpec> kept;
    for (size_t e = 0; e < model.edges().size(); ++e) {
        int32_t u = model.edge_u_index(static_cast<int32_t>(e));
        int32_t v = model.edge_v_index(static_cast<int32_t>(e));
        if (std::max(u, v) / width < rounds_limit)
            kept.push_back(model.edges()[e]);
    }
    return DetectorErrorModel(model.distance(), rounds_limit, model.lag(),
                              std::move(kept));
}

WeightTable weights_exact(const DetectorErrorModel& model, RoundInterval block,
                          int size_cap) {
    PathGraph g = build_path_graph(model, block);
    if (g.n > size_cap)
        throw std::invalid_argument("block exceeds the exact-backend size cap");

    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(g.n, g.n);
    for (int u = 0; u < g.n; ++u)
        for (const Arc& arc : g.adj[u]) m(u, arc.to) = -arc.p;
    Eigen::MatrixXd inv = m.partialPivLu().inverse();

    double min_entry = inv.minCoeff();
    double min_diag = inv.diagonal().minCoeff();
    if (!(min_entry > -1e-9) || !(min_diag > 1.0 - 1e-9))
        throw std::domain_error("path sum diverges (1 - A not invertible "
                                "within the convergent regime)");

    WeightTable table;
    table.backend = WeightBackend::exact;
    table.members = g.members;
    size_t n = g.n;
    table.pair_w.assign(n * n, 0.0);
    table.pair_par.assign(n * n, 0);
    table.boundary_w.assign(n, kInf);
    table.boundary_par.assign(n, 0);
    table.has_paths = g.n <= kPathStorageCap;
    if (table.has_paths) {
        table.pair_paths.resize(n * n);
        table.boundary_paths.resize(n);
    }

    Eigen::VectorXd pd =
        Eigen::Map<const Eigen::VectorXd>(g.p_diag.data(), g.n);
    Eigen::VectorXd bnd_sum = inv * pd;

    for (int i = 0; i < g.n; ++i) {
        DijkstraRow row = dijkstra(g, i);
        for (int j = 0; j < g.n; ++j) {
            if (j == i) continue;
            double val = inv(i, j);
            table.pair_w[i * n + j] = val > 0.0 ? -std::log(val) : kInf;
            table.pair_par[i * n + j] = row.par[j];
            if (table.has_paths && row.dist[j] < kInf)
                table.pair_paths[i * n + j] = extract_path(row, j);
        }
        table.boundary_w[i] =
            bnd_sum(i) > 0.0 ? -std::log(bnd_sum(i)) : kInf;
        table.boundary_par[i] = row.bnd_par;
        if (table.has_paths)
            table.boundary_paths[i] = extract_boundary_path(row);
    }
    return table;
}

WeightTable weights_shortest_path(const DetectorErrorModel& model,
                                  const std::vector<DetectorId>& sources) {
    PathGraph g = build_path_graph(model, RoundInterval{});
    WeightTable table;
    table.backend = WeightBackend::shortest_path;
    table.members = sources;
    size_t n = sources.size();
    table.pair_w.assign(n * n, 0.0);
    table.pair_par.assign(n * n, 0);
    table.boundary_w.assign(n, kInf);
    table.boundary_par.assign(n, 0);
    table.has_paths = n <= kPathStorageCap;
    if (table.has_paths) {
        table.pair_paths.resize(n * n);
        table.boundary_paths.resize(n);
    }

    for (size_t i = 0; i < n; ++i) {
        int src = g.member_of[model.detector_index(sources[i])];
        DijkstraRow row = dijkstra(g, src);
        for (size_t j = i + 1; j < n; ++j) {
            int dst = g.member_of[model.detector_index(sources[j])];
            table.pair_w[i * n + j] = table.pair_w[j * n + i] = row.dist[dst];
            table.pair_par[i * n + j] = table.pair_par[j * n + i] =
                row.par[dst];
            if (table.has_paths && row.dist[dst] < kInf) {
                table.pair_paths[i * n + j] = extract_path(row, dst);
                table.pair_paths[j * n + i] = table.pair_paths[i * n + j];
            }
        }
        table.boundary_w[i] = row.bnd_w;
        table.boundary_par[i] = row.bnd_par;
        if (table.has_paths)
            table.boundary_paths[i] = extract_boundary_path(row);
    }
    return table;
}

double path_sum_bruteforce(const DetectorErrorModel& model, DetectorId u,
                           DetectorId v, int max_detectors) {
    int n = model.num_detectors();
    if (n > max_detectors)
        throw std::invalid_argument("graph too large for the walk oracle");

    std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
    std::vector<double> p_diag(n, 0.0);
    for (size_t e = 0; e < model.edges().size(); ++e) {
        double p = model.edges()[e].probability;
        if (p >= 0.5)
            throw std::domain_error(
                "edge probability >= 1/2 unsupported by the weight engine");
        if (p <= 0.0) continue;
        int32_t eu = model.edge_u_index(static_cast<int32_t>(e));
        int32_t ev = model.edge_v_index(static_cast<int32_t>(e));
        if (eu < 0 || ev < 0) {
            p_diag[std::max(eu, ev)] += p;
        } else {
            a[static_cast<size_t>(eu) * n + ev] += p;
            a[static_cast<size_t>(ev) * n + eu] += p;
        }
    }
    double row_max = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += a[static_cast<size_t>(i) * n + j];
        row_max = std::max(row_max, s);
    }
    double max_pd = *std::max_element(p_diag.begin(), p_diag.end());

    int iu = model.detector_index(u);
    int iv = model.detector_index(v);
    bool diagonal = iu == iv;

    std::vector<double> x(n, 0.0), next(n);
    x[iu] = 1.0;
    double total = 0.0;
    if (diagonal) total = p_diag[iu];

    for (int step = 1; step <= 100000; ++step) {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j)
                s += a[static_cast<size_t>(i) * n + j] * x[j];
            next[i] = s;
        }
        x.swap(next);
        double l1 = 0.0;
        if (diagonal) {
            double term = 0.0;
            for (int i = 0; i < n; ++i) {
                term += x[i] * p_diag[i];
                l1 += x[i];
            }
            total += term;
        } else {
            total += x[iv];
            for (int i = 0; i < n; ++i) l1 += x[i];
        }
        double scale = diagonal ? max_pd : 1.0;
        if (row_max < 1.0) {
            if (l1 * scale * row_max / (1.0 - row_max) < 1e-12) return total;
        } else if (l1 < 1e-13) {
            return total;
        }
    }
    throw std::domain_error("walk series does not converge");
}

std::string weight_table_to_csv(const WeightTable& table) {
    std::ostringstream out;
    out << "u_ancilla,u_round,v_ancilla,v_round,weight\n";
    int n = table.size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            out << table.members[i].ancilla << ',' << table.members[i].round
                << ',' << table.members[j].ancilla << ','
                << table.members[j].round << ','
                << format_weight(table.pair_weight(i, j)) << '\n';
    for (int i = 0; i < n; ++i)
        out << table.members[i].ancilla << ',' << table.members[i].round
            << ",B,B," << format_weight(table.boundary_weight(i)) << '\n';
    return out.str();
}

struct CachedWeightOracle::Impl {
    PathGraph graph;
    std::vector<std::unique_ptr<DijkstraRow>> rows;
    bool exact = false;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    std::vector<std::unique_ptr<Eigen::VectorXd>> cols;
    Eigen::VectorXd p_diag;

    const DijkstraRow& row(int src) {
        if (!rows[src])
            rows[src] = std::make_unique<DijkstraRow>(dijkstra(graph, src));
        return *rows[src];
    }

    const Eigen::VectorXd& col(int src) {
        if (!cols[src]) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(graph.n);
            e(src) = 1.0;
            auto solved = std::make_unique<Eigen::VectorXd>(lu.solve(e));
            if ((*solved)(src) < 1.0 - 1e-9 || solved->minCoeff() < -1e-9)
                throw std::domain_error("path sum diverges");
            cols[src] = std::move(solved);
        }
        return *cols[src];
    }
};

CachedWeightOracle::CachedWeightOracle(const DetectorErrorModel& model,
                                       WeightBackend backend)
    : model_(model), backend_(backend), impl_(std::make_unique<Impl>()) {
    impl_->graph = build_path_graph(model, RoundInterval{});
    impl_->rows.resize(impl_->graph.n);
    impl_->exact = backend == WeightBackend::exact;
    if (impl_->exact) {
        Eigen::MatrixXd m =
            Eigen::MatrixXd::Identity(impl_->graph.n, impl_->graph.n);
        for (int u = 0; u < impl_->graph.n; ++u)
            for (const Arc& arc : impl_->graph.adj[u]) m(u, arc.to) = -arc.p;
        impl_->lu.compute(m);
        impl_->cols.resize(impl_->graph.n);
        impl_->p_diag = Eigen::Map<const Eigen::VectorXd>(
            impl_->graph.p_diag.data(), impl_->graph.n);
    }
}

CachedWeightOracle::~CachedWeightOracle() = default;

double CachedWeightOracle::pair_weight(DetectorId u, DetectorId v) {
    int a = model_.detector_index(u);
    int b = model_.detector_index(v);
    if (a == b) return 0.0;
    int lo = std::min(a, b), hi = std::max(a, b);
    if (impl_->exact) {
        double val = impl_->col(lo)(hi);
        return val > 0.0 ? -std::log(val) : kInf;
    }
    return impl_->row(lo).dist[hi];
}

bool CachedWeightOracle::pair_parity(DetectorId u, DetectorId v) {
    int a = model_.detector_index(u);
    int b = model_.detector_index(v);
    if (a == b) return false;
    int lo = std::min(a, b), hi = std::max(a, b);
    return impl_->row(lo).par[hi] != 0;
}

double CachedWeightOracle::boundary_weight(DetectorId u) {
    int a = model_.detector_index(u);
    if (impl_->exact) {
        double val = impl_->col(a).dot(impl_->p_diag);
        return val > 0.0 ? -std::log(val) : kInf;
    }
    return impl_->row(a).bnd_w;
}

bool CachedWeightOracle::boundary_parity(DetectorId u) {
    return impl_->row(model_.detector_index(u)).bnd_par != 0;
}

WeightTable CachedWeightOracle::table_for(
    const std::vector<DetectorId>& events) {
    WeightTable table;
    table.backend = backend_;
    table.members = events;
    size_t n = events.size();
    table.pair_w.assign(n * n, 0.0);
    table.pair_par.assign(n * n, 0);
    table.boundary_w.assign(n, kInf);
    table.boundary_par.assign(n, 0);
    table.has_paths = n <= kPathStorageCap;
    if (table.has_paths) {
        table.pair_paths.resize(n * n);
        table.boundary_paths.resize(n);
    }
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            table.pair_w[i * n + j] = table.pair_w[j * n + i] =
                pair_weight(events[i], events[j]);
            table.pair_par[i * n + j] = table.pair_par[j * n + i] =
                pair_parity(events[i], events[j]) ? 1 : 0;
            if (table.has_paths) {
                int a = model_.detector_index(events[i]);
                int b = model_.detector_index(events[j]);
                const DijkstraRow& r = impl_->row(std::min(a, b));
                if (r.dist[std::max(a, b)] < kInf) {
                    table.pair_paths[i * n + j] =
                        extract_path(r, std::max(a, b));
                    table.pair_paths[j * n + i] = table.pair_paths[i * n + j];
                }
            }
        }
        table.boundary_w[i] = boundary_weight(events[i]);
        table.boundary_par[i] = boundary_parity(events[i]) ? 1 : 0;
        if (table.has_paths)
            table.boundary_paths[i] = extract_boundary_path(
                impl_->row(model_.detector_index(events[i])));
    }
    return table;
}

}  // namespace aqec
