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

// Dense O(n^3) maximum-weight general matching, dual-primal with blossom
// shrinking (Galil's formulation). Labels follow the doubled convention:
// lab holds 2y for vertices and 2z for blossoms, so e_delta() is twice the
// true slack.

#include "aqec/matching.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace aqec::internal {

namespace {

constexpr double kEps = 1e-7;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Edge {
    int u = 0;
    int v = 0;
    double w = 0.0;
};

class Blossom {
public:
    Blossom(int n, const std::vector<double>& val) : n_(n) {
        int cap = 2 * n_ + 1;
        nx_ = n_;
        g_.assign(cap, std::vector<Edge>(cap));
        lab_.assign(cap, 0.0);
        match_.assign(cap, 0);
        slack_.assign(cap, 0);
        st_.assign(cap, 0);
        pa_.assign(cap, 0);
        s_.assign(cap, -1);
        vis_.assign(cap, 0);
        flower_.resize(cap);
        flower_from_.assign(cap, std::vector<int>(n_ + 1, 0));

        double w_max = 0.0;
        for (int u = 1; u <= n_; ++u)
            for (int v = 1; v <= n_; ++v) {
                double w = u == v ? 0.0
                                  : val[static_cast<size_t>(u - 1) * n_ +
                                        (v - 1)];
                g_[u][v] = Edge{u, v, w};
                w_max = std::max(w_max, w);
            }
        for (int u = 1; u <= n_; ++u) {
            st_[u] = u;
            lab_[u] = w_max;
            flower_from_[u][u] = u;
        }
    }

    std::vector<int32_t> run() {
        while (phase()) {
        }
        std::vector<int32_t> mate(n_, -1);
        for (int u = 1; u <= n_; ++u)
            if (match_[u]) mate[u - 1] = match_[u] - 1;
        return mate;
    }

private:
    double e_delta(const Edge& e) const {
        return lab_[e.u] + lab_[e.v] - g_[e.u][e.v].w * 2.0;
    }

    void update_slack(int u, int x) {
        if (!slack_[x] || e_delta(g_[u][x]) < e_delta(g_[slack_[x]][x]))
            slack_[x] = u;
    }

    void set_slack(int x) {
        slack_[x] = 0;
        for (int u = 1; u <= n_; ++u)
            if (g_[u][x].w > 0.0 && st_[u] != x && s_[st_[u]] == 0)
                update_slack(u, x);
    }

    void q_push(int x) {
        if (x <= n_) {
            q_.push_back(x);
        } else {
            for (int t : flower_[x]) q_push(t);
        }
    }

    void set_st(int x, int b) {
        st_[x] = b;
        if (x > n_)
            for (int t : flower_[x]) set_st(t, b);
    }

    // Position of the child xr inside blossom b; reverses the cycle when xr
    // sits at an odd position so the even alternating path is kept.
    int get_pr(int b, int xr) {
        int pr = static_cast<int>(
            std::find(flower_[b].begin(), flower_[b].end(), xr) -
            flower_[b].begin());
        if (pr % 2 == 1) {
            std::reverse(flower_[b].begin() + 1, flower_[b].end());
            return static_cast<int>(flower_[b].size()) - pr;
        }
        return pr;
    }

    void set_match(int u, int v) {
        match_[u] = g_[u][v].v;
        if (u <= n_) return;
        Edge e = g_[u][v];
        int xr = flower_from_[u][e.u];
        int pr = get_pr(u, xr);
        for (int i = 0; i < pr; ++i)
            set_match(flower_[u][i], flower_[u][i ^ 1]);
        set_match(xr, v);
        std::rotate(flower_[u].begin(), flower_[u].begin() + pr,
                    flower_[u].end());
    }

    void augment(int u, int v) {
        while (true) {
            int xnv = st_[match_[u]];
            set_match(u, v);
            if (!xnv) return;
            set_match(xnv, st_[pa_[xnv]]);
            u = st_[pa_[xnv]];
            v = xnv;
        }
    }

    int get_lca(int u, int v) {
        ++timestamp_;
        while (u || v) {
            if (u) {
                if (vis_[u] == timestamp_) return u;
                vis_[u] = timestamp_;
                u = st_[match_[u]];
                if (u) u = st_[pa_[u]];
            }
            std::swap(u, v);
        }
        return 0;
    }

    void add_blossom(int u, int lca, int v) {
        int b = n_ + 1;
        while (b <= nx_ && st_[b]) ++b;
        if (b > nx_) ++nx_;

        lab_[b] = 0.0;
        s_[b] = 0;
        match_[b] = match_[lca];
        flower_[b].clear();
        flower_[b].push_back(lca);
        for (int x = u, y; x != lca; x = st_[pa_[y]]) {
            flower_[b].push_back(x);
            flower_[b].push_back(y = st_[match_[x]]);
            q_push(y);
        }
        std::reverse(flower_[b].begin() + 1, flower_[b].end());
        for (int x = v, y; x != lca; x = st_[pa_[y]]) {
            flower_[b].push_back(x);
            flower_[b].push_back(y = st_[match_[x]]);
            q_push(y);
        }
        set_st(b, b);

        for (int x = 1; x <= nx_; ++x) g_[b][x].w = g_[x][b].w = 0.0;
        for (int x = 1; x <= n_; ++x) flower_from_[b][x] = 0;
        for (int xs : flower_[b]) {
            for (int x = 1; x <= nx_; ++x)
                if (g_[b][x].w == 0.0 ||
                    e_delta(g_[xs][x]) < e_delta(g_[b][x])) {
                    g_[b][x] = g_[xs][x];
                    g_[x][b] = g_[x][xs];
                }
            for (int x = 1; x <= n_; ++x)
                if (flower_from_[xs][x]) flower_from_[b][x] = xs;
        }
        pa_[b] = pa_[lca];
        set_slack(b);
    }

    void expand_blossom(int b) {
        for (int xs : flower_[b]) set_st(xs, xs);
        int xr = flower_from_[b][g_[b][pa_[b]].u];
        int pr = get_pr(b, xr);
        for (int i = 0; i < pr; i += 2) {
            int xs = flower_[b][i];
            int xns = flower_[b][i + 1];
            pa_[xs] = g_[xns][xs].u;
            s_[xs] = 1;
            s_[xns] = 0;
            slack_[xs] = 0;
            set_slack(xns);
            q_push(xns);
        }
        s_[xr] = 1;
        pa_[xr] = pa_[b];
        for (size_t i = pr + 1; i < flower_[b].size(); ++i) {
            int xs = flower_[b][static_cast<int>(i)];
            s_[xs] = -1;
            set_slack(xs);
        }
        st_[b] = 0;
    }

    bool on_found_edge(const Edge& e) {
        int u = st_[e.u];
        int v = st_[e.v];
        if (s_[v] == -1) {
            pa_[v] = e.u;
            s_[v] = 1;
            int nu = st_[match_[v]];
            slack_[v] = slack_[nu] = 0;
            s_[nu] = 0;
            q_push(nu);
        } else if (s_[v] == 0) {
            int lca = get_lca(u, v);
            if (!lca) {
                augment(u, v);
                augment(v, u);
                return true;
            }
            add_blossom(u, lca, v);
        }
        return false;
    }

    bool phase() {
        std::fill(s_.begin(), s_.end(), -1);
        std::fill(slack_.begin(), slack_.end(), 0);
        q_.clear();
        for (int x = 1; x <= nx_; ++x)
            if (st_[x] == x && !match_[x]) {
                pa_[x] = 0;
                s_[x] = 0;
                q_push(x);
            }
        if (q_.empty()) return false;

        while (true) {
            while (!q_.empty()) {
                int u = q_.front();
                q_.pop_front();
                if (s_[st_[u]] == 1) continue;
                for (int v = 1; v <= n_; ++v)
                    if (g_[u][v].w > 0.0 && st_[u] != st_[v]) {
                        if (e_delta(g_[u][v]) <= kEps) {
                            if (on_found_edge(g_[u][v])) return true;
                        } else {
                            update_slack(u, st_[v]);
                        }
                    }
            }
            double d = kInf;
            for (int b = n_ + 1; b <= nx_; ++b)
                if (st_[b] == b && s_[b] == 1) d = std::min(d, lab_[b] / 2.0);
            for (int x = 1; x <= nx_; ++x)
                if (st_[x] == x && slack_[x]) {
                    if (s_[x] == -1)
                        d = std::min(d, e_delta(g_[slack_[x]][x]));
                    else if (s_[x] == 0)
                        d = std::min(d, e_delta(g_[slack_[x]][x]) / 2.0);
                }
            if (!(d < kInf)) return false;
            d = std::max(d, 0.0);

            for (int u = 1; u <= n_; ++u) {
                int su = s_[st_[u]];
                if (su == 0) {
                    if (lab_[u] <= d) return false;
                    lab_[u] -= d;
                } else if (su == 1) {
                    lab_[u] += d;
                }
            }
            for (int b = n_ + 1; b <= nx_; ++b)
                if (st_[b] == b) {
                    if (s_[b] == 0)
                        lab_[b] += d * 2.0;
                    else if (s_[b] == 1)
                        lab_[b] -= d * 2.0;
                }

            q_.clear();
            for (int x = 1; x <= nx_; ++x)
                if (st_[x] == x && slack_[x] && st_[slack_[x]] != x &&
                    e_delta(g_[slack_[x]][x]) <= kEps)
                    if (on_found_edge(g_[slack_[x]][x])) return true;
            for (int b = n_ + 1; b <= nx_; ++b)
                if (st_[b] == b && s_[b] == 1 && lab_[b] <= kEps)
                    expand_blossom(b);
        }
    }

    int n_;
    int nx_;
    std::vector<std::vector<Edge>> g_;
    std::vector<double> lab_;
    std::vector<int> match_;
    std::vector<int> slack_;
    std::vector<int> st_;
    std::vector<int> pa_;
    std::vector<int> s_;
    std::vector<int> vis_;
    std::vector<std::vector<int>> flower_;
    std::vector<std::vector<int>> flower_from_;
    std::deque<int> q_;
    int timestamp_ = 0;
};

}  // namespace

std::vector<int32_t> max_weight_matching_dense(int n,
                                               const std::vector<double>& val) {
    if (n == 0) return {};
    if (val.size() != static_cast<size_t>(n) * n)
        throw std::invalid_argument("weight matrix size != n*n");
    for (double w : val)
        if (!(w >= 0.0) || w == kInf)
            throw std::invalid_argument("weights must be finite and >= 0");
    return Blossom(n, val).run();
}

}  // namespace aqec::internal
