#pragma once

// Shared helpers for the test suites: deterministic random instances,
// brute-force cut oracles, an independent max-flow, and finite differences.
// Everything here stays independent of the solver paths it is used to check.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "pnormflow/graph.hpp"
#include "pnormflow/pnorm.hpp"

namespace testutil {

using pnormflow::FlowState;
using pnormflow::NetworkGraph;
using pnormflow::TrafficVector;

using Rng = std::mt19937;

// Random connected graph: a random spanning tree plus extra distinct edges up
// to edge_count. Edge endpoints are returned 1-based with r < s.
inline std::vector<std::pair<int, int>> random_connected_edges(Rng& rng, int node_count,
                                                               int edge_count) {
    std::vector<std::pair<int, int>> edges;
    std::set<std::pair<int, int>> seen;
    std::vector<int> order(node_count);
    std::iota(order.begin(), order.end(), 1);
    std::shuffle(order.begin(), order.end(), rng);
    for (int i = 1; i < node_count; ++i) {
        std::uniform_int_distribution<int> pick(0, i - 1);
        int a = order[i];
        int b = order[pick(rng)];
        if (a > b) {
            std::swap(a, b);
        }
        edges.push_back({a, b});
        seen.insert({a, b});
    }
    const long long max_edges =
        static_cast<long long>(node_count) * (node_count - 1) / 2;
    edge_count = static_cast<int>(std::min<long long>(edge_count, max_edges));
    std::uniform_int_distribution<int> pick_node(1, node_count);
    while (static_cast<int>(edges.size()) < edge_count) {
        int a = pick_node(rng);
        int b = pick_node(rng);
        if (a == b) {
            continue;
        }
        if (a > b) {
            std::swap(a, b);
        }
        if (seen.insert({a, b}).second) {
            edges.push_back({a, b});
        }
    }
    return edges;
}

inline NetworkGraph random_connected_graph(Rng& rng, int node_count, int edge_count) {
    return NetworkGraph(node_count, random_connected_edges(rng, node_count, edge_count));
}

inline TrafficVector random_traffic(Rng& rng, int node_count, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    TrafficVector traffic;
    traffic.values.resize(node_count - 1);
    for (double& t : traffic.values) {
        t = dist(rng);
    }
    // Guarantee a nontrivial instance.
    auto max_it = std::max_element(traffic.values.begin(), traffic.values.end());
    *max_it = std::max(*max_it, 0.25);
    return traffic;
}

// Two complete blobs joined by exactly `bridges` edges between distinct
// endpoints. All blob-A nodes carry traffic; blob B holds the destination.
// With |B| >= bridges + 2 the bridge set is the unique minimum cut.
struct UniqueCutInstance {
    NetworkGraph graph;
    TrafficVector traffic;
    int cut_size;
};

inline UniqueCutInstance unique_min_cut_instance(Rng& rng, int bridges) {
    std::uniform_int_distribution<int> extra(0, 2);
    const int a_size = bridges + 1 + extra(rng);
    const int b_size = bridges + 2 + extra(rng);
    const int n = a_size + b_size;

    // Random labels for everything except the destination, which must be n.
    std::vector<int> labels(n - 1);
    std::iota(labels.begin(), labels.end(), 1);
    std::shuffle(labels.begin(), labels.end(), rng);
    std::vector<int> a_nodes(labels.begin(), labels.begin() + a_size);
    std::vector<int> b_nodes(labels.begin() + a_size, labels.end());
    b_nodes.push_back(n);

    std::set<std::pair<int, int>> edge_set;
    auto connect = [&edge_set](int x, int y) {
        if (x > y) {
            std::swap(x, y);
        }
        edge_set.insert({x, y});
    };
    for (std::size_t i = 0; i < a_nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < a_nodes.size(); ++j) {
            connect(a_nodes[i], a_nodes[j]);
        }
    }
    for (std::size_t i = 0; i < b_nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < b_nodes.size(); ++j) {
            connect(b_nodes[i], b_nodes[j]);
        }
    }
    std::shuffle(a_nodes.begin(), a_nodes.end(), rng);
    std::shuffle(b_nodes.begin(), b_nodes.end(), rng);
    for (int k = 0; k < bridges; ++k) {
        connect(a_nodes[k], b_nodes[k]);
    }

    std::vector<std::pair<int, int>> edges(edge_set.begin(), edge_set.end());
    NetworkGraph graph(n, edges);

    TrafficVector traffic;
    traffic.values.assign(n - 1, 0.0);
    std::uniform_real_distribution<double> load(0.5, 1.0);
    for (int node : a_nodes) {
        traffic.values[node - 1] = load(rng);
    }
    return {std::move(graph), std::move(traffic), bridges};
}

// True iff removing `removed` edges leaves no positive-traffic node in the
// destination's component.
inline bool separates(const NetworkGraph& graph, const TrafficVector& traffic,
                      const std::vector<char>& removed) {
    std::vector<char> reached(graph.node_count(), 0);
    std::queue<int> frontier;
    frontier.push(graph.sink());
    reached[graph.sink()] = 1;
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop();
        for (const auto& nb : graph.neighbors(u)) {
            if (!removed[nb.edge] && !reached[nb.node]) {
                reached[nb.node] = 1;
                frontier.push(nb.node);
            }
        }
    }
    for (int v = 0; v < graph.node_count() - 1; ++v) {
        if (traffic.values[v] > 0.0 && reached[v]) {
            return false;
        }
    }
    return true;
}

// Minimum separating edge-set size by exhaustive subset enumeration in
// ascending cardinality.
inline int brute_force_min_cut_size(const NetworkGraph& graph, const TrafficVector& traffic) {
    const int m = graph.edge_count();
    std::vector<char> removed(m, 0);
    for (int k = 0; k <= m; ++k) {
        std::vector<int> pick(k);
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
            std::fill(removed.begin(), removed.end(), 0);
            for (int idx : pick) {
                removed[idx] = 1;
            }
            if (separates(graph, traffic, removed)) {
                return k;
            }
            // next combination
            int i = k - 1;
            while (i >= 0 && pick[i] == m - k + i) {
                --i;
            }
            if (i < 0) {
                break;
            }
            ++pick[i];
            for (int j = i + 1; j < k; ++j) {
                pick[j] = pick[j - 1] + 1;
            }
        }
    }
    return m;
}

// Independent unit-capacity max-flow (DFS Ford-Fulkerson) from a super-source
// over the positive-traffic nodes to the destination.
inline int unit_max_flow(const NetworkGraph& graph, const TrafficVector& traffic) {
    const int n = graph.node_count();
    const int source = n;
    struct Arc {
        int to;
        int cap;
    };
    std::vector<Arc> arcs;
    std::vector<std::vector<int>> out(n + 1);
    auto add_pair = [&](int a, int b, int cap_ab, int cap_ba) {
        out[a].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({b, cap_ab});
        out[b].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({a, cap_ba});
    };
    for (int m = 0; m < graph.edge_count(); ++m) {
        add_pair(graph.edge(m).r, graph.edge(m).s, 1, 1);
    }
    const int big = graph.edge_count() + 1;
    for (int v = 0; v < n - 1; ++v) {
        if (traffic.values[v] > 0.0) {
            add_pair(source, v, big, 0);
        }
    }

    std::vector<char> visited(n + 1, 0);
    auto dfs = [&](auto&& self, int u) -> bool {
        if (u == graph.sink()) {
            return true;
        }
        visited[u] = 1;
        for (int a : out[u]) {
            if (arcs[a].cap > 0 && !visited[arcs[a].to] && self(self, arcs[a].to)) {
                arcs[a].cap -= 1;
                arcs[a ^ 1].cap += 1;
                return true;
            }
        }
        return false;
    };

    int flow = 0;
    for (;;) {
        std::fill(visited.begin(), visited.end(), 0);
        if (!dfs(dfs, source)) {
            break;
        }
        ++flow;
    }
    return flow;
}

// Central finite differences of the p-norm cost and gradient.
inline double fd_gradient(const FlowState& flows, double p, int m, double h) {
    FlowState plus = flows;
    FlowState minus = flows;
    plus.loads[m] += h;
    minus.loads[m] -= h;
    return (pnormflow::cost(plus, p) - pnormflow::cost(minus, p)) / (2.0 * h);
}

inline double fd_hessian_diag(const FlowState& flows, double p, int m, double h) {
    FlowState plus = flows;
    FlowState minus = flows;
    plus.loads[m] += h;
    minus.loads[m] -= h;
    return (pnormflow::gradient(plus, p)[m] - pnormflow::gradient(minus, p)[m]) / (2.0 * h);
}

}  // namespace testutil
