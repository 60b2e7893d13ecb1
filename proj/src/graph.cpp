#include "pnormflow/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

namespace pnormflow {

NetworkGraph::NetworkGraph(int node_count, const std::vector<std::pair<int, int>>& edges_one_based)
    : node_count_(node_count) {
    if (node_count < 2) {
        throw std::invalid_argument("graph needs at least 2 nodes, got " + std::to_string(node_count));
    }
    edges_.reserve(edges_one_based.size());
    std::set<std::pair<int, int>> seen;
    for (std::size_t m = 0; m < edges_one_based.size(); ++m) {
        const auto [r, s] = edges_one_based[m];
        if (r < 1 || s < 1 || r > node_count || s > node_count) {
            throw std::invalid_argument("edge " + std::to_string(m + 1) + " endpoint out of range: (" +
                                        std::to_string(r) + ", " + std::to_string(s) + ")");
        }
        if (r == s) {
            throw std::invalid_argument("edge " + std::to_string(m + 1) + " is a self-loop at node " +
                                        std::to_string(r));
        }
        if (r > s) {
            throw std::invalid_argument("edge " + std::to_string(m + 1) + " violates the low-to-high convention: (" +
                                        std::to_string(r) + ", " + std::to_string(s) + ")");
        }
        if (!seen.insert({r, s}).second) {
            throw std::invalid_argument("duplicate edge (" + std::to_string(r) + ", " + std::to_string(s) + ")");
        }
        edges_.push_back({r - 1, s - 1});
    }

    adjacency_.assign(node_count_, {});
    for (int m = 0; m < edge_count(); ++m) {
        adjacency_[edges_[m].r].push_back({edges_[m].s, m});
        adjacency_[edges_[m].s].push_back({edges_[m].r, m});
    }

    // Connectivity check: BFS from the destination.
    std::vector<char> reached(node_count_, 0);
    std::queue<int> frontier;
    frontier.push(sink());
    reached[sink()] = 1;
    while (!frontier.empty()) {
        const int n = frontier.front();
        frontier.pop();
        for (const Neighbor& nb : adjacency_[n]) {
            if (!reached[nb.node]) {
                reached[nb.node] = 1;
                frontier.push(nb.node);
            }
        }
    }
    for (int n = 0; n < node_count_; ++n) {
        if (!reached[n]) {
            throw std::invalid_argument("graph is disconnected: node " + std::to_string(n + 1) +
                                        " cannot reach node " + std::to_string(node_count_));
        }
    }
}

std::vector<double> IncidenceMatrix::apply(const std::vector<double>& loads) const {
    if (static_cast<int>(loads.size()) != cols) {
        throw std::invalid_argument("incidence apply: expected " + std::to_string(cols) + " loads, got " +
                                    std::to_string(loads.size()));
    }
    std::vector<double> out(rows, 0.0);
    for (int i = 0; i < rows; ++i) {
        double acc = 0.0;
        for (const auto& [col, val] : row_entries[i]) {
            acc += val * loads[col];
        }
        out[i] = acc;
    }
    return out;
}

IncidenceMatrix build_incidence(const NetworkGraph& graph) {
    IncidenceMatrix c;
    c.rows = graph.node_count() - 1;
    c.cols = graph.edge_count();
    c.row_entries.assign(c.rows, {});
    for (int m = 0; m < graph.edge_count(); ++m) {
        const auto& e = graph.edge(m);
        c.row_entries[e.r].push_back({m, +1});
        if (e.s != graph.sink()) {
            c.row_entries[e.s].push_back({m, -1});
        }
    }
    return c;
}

void validate_traffic(const NetworkGraph& graph, const TrafficVector& traffic) {
    if (static_cast<int>(traffic.values.size()) != graph.node_count() - 1) {
        throw std::invalid_argument("traffic vector has " + std::to_string(traffic.values.size()) +
                                    " entries, expected " + std::to_string(graph.node_count() - 1));
    }
    for (std::size_t n = 0; n < traffic.values.size(); ++n) {
        if (!(traffic.values[n] >= 0.0)) {
            throw std::invalid_argument("traffic for node " + std::to_string(n + 1) +
                                        " is negative or NaN");
        }
    }
}

// Residual C*I - T computed straight off the edge list.
static std::vector<double> conservation_residual(const NetworkGraph& graph, const FlowState& flows,
                                                 const TrafficVector& traffic) {
    std::vector<double> residual(graph.node_count() - 1, 0.0);
    for (int m = 0; m < graph.edge_count(); ++m) {
        const auto& e = graph.edge(m);
        residual[e.r] += flows.loads[m];
        if (e.s != graph.sink()) {
            residual[e.s] -= flows.loads[m];
        }
    }
    for (int n = 0; n < graph.node_count() - 1; ++n) {
        residual[n] -= traffic.values[n];
    }
    return residual;
}

FeasibilityReport check_feasibility(const NetworkGraph& graph, const FlowState& flows,
                                    const TrafficVector& traffic, double tol) {
    if (static_cast<int>(flows.loads.size()) != graph.edge_count()) {
        throw std::invalid_argument("flow state has " + std::to_string(flows.loads.size()) +
                                    " loads, expected " + std::to_string(graph.edge_count()));
    }
    validate_traffic(graph, traffic);

    FeasibilityReport report;
    report.residual = conservation_residual(graph, flows, traffic);
    for (double v : report.residual) {
        report.max_residual = std::max(report.max_residual, std::abs(v));
    }
    report.feasible = report.max_residual <= tol;
    return report;
}

FlowState initial_feasible_flow(const NetworkGraph& graph, const TrafficVector& traffic) {
    validate_traffic(graph, traffic);

    const int n_nodes = graph.node_count();
    std::vector<int> parent(n_nodes, -1);
    std::vector<int> parent_edge(n_nodes, -1);
    std::vector<int> order;
    order.reserve(n_nodes);

    std::queue<int> frontier;
    frontier.push(graph.sink());
    parent[graph.sink()] = graph.sink();
    while (!frontier.empty()) {
        const int n = frontier.front();
        frontier.pop();
        order.push_back(n);
        for (const auto& nb : graph.neighbors(n)) {
            if (parent[nb.node] < 0) {
                parent[nb.node] = n;
                parent_edge[nb.node] = nb.edge;
                frontier.push(nb.node);
            }
        }
    }

    // Push accumulated subtree traffic up each tree edge, leaves first.
    FlowState flows;
    flows.loads.assign(graph.edge_count(), 0.0);
    std::vector<double> carry(n_nodes, 0.0);
    for (int n = 0; n < n_nodes - 1; ++n) {
        carry[n] = traffic.values[n];
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int n = *it;
        if (n == graph.sink()) {
            continue;
        }
        const int m = parent_edge[n];
        flows.loads[m] += (n == graph.edge(m).r) ? carry[n] : -carry[n];
        carry[parent[n]] += carry[n];
    }
    return flows;
}

namespace {

// Residual arc network for unit-capacity max-flow. Each undirected graph edge
// becomes a mutually-reverse arc pair (indices 2m, 2m+1), both capacity 1;
// super-source arcs get effectively infinite capacity.
struct ArcNetwork {
    struct Arc {
        int to = 0;
        int64_t cap = 0;
    };
    std::vector<Arc> arcs;
    std::vector<std::vector<int>> out;  // arc indices per node

    explicit ArcNetwork(int n_nodes) : out(n_nodes) {}

    void add_pair(int a, int b, int64_t cap_ab, int64_t cap_ba) {
        out[a].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({b, cap_ab});
        out[b].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({a, cap_ba});
    }
};

constexpr int64_t kInfiniteCap = std::numeric_limits<int64_t>::max() / 4;

}  // namespace

CutSet min_cut(const NetworkGraph& graph, const TrafficVector& traffic) {
    validate_traffic(graph, traffic);

    const int n_nodes = graph.node_count();
    const int source = n_nodes;  // super-source appended after the graph nodes
    const int sink = graph.sink();

    ArcNetwork net(n_nodes + 1);
    for (int m = 0; m < graph.edge_count(); ++m) {
        net.add_pair(graph.edge(m).r, graph.edge(m).s, 1, 1);
    }
    bool any_traffic = false;
    for (int n = 0; n < n_nodes - 1; ++n) {
        if (traffic.values[n] > 0.0) {
            net.add_pair(source, n, kInfiniteCap, 0);
            any_traffic = true;
        }
    }
    if (!any_traffic) {
        throw std::invalid_argument("min_cut requires at least one node with positive traffic");
    }

    // Edmonds-Karp: BFS augmenting paths on the residual network.
    std::vector<int> parent_arc(n_nodes + 1);
    auto bfs = [&]() -> bool {
        std::fill(parent_arc.begin(), parent_arc.end(), -1);
        parent_arc[source] = -2;
        std::queue<int> frontier;
        frontier.push(source);
        while (!frontier.empty()) {
            const int u = frontier.front();
            frontier.pop();
            for (int a : net.out[u]) {
                const auto& arc = net.arcs[a];
                if (arc.cap > 0 && parent_arc[arc.to] == -1) {
                    parent_arc[arc.to] = a;
                    if (arc.to == sink) {
                        return true;
                    }
                    frontier.push(arc.to);
                }
            }
        }
        return false;
    };

    while (bfs()) {
        int64_t bottleneck = kInfiniteCap;
        for (int v = sink; v != source;) {
            const int a = parent_arc[v];
            bottleneck = std::min(bottleneck, net.arcs[a].cap);
            v = net.arcs[a ^ 1].to;
        }
        for (int v = sink; v != source;) {
            const int a = parent_arc[v];
            net.arcs[a].cap -= bottleneck;
            net.arcs[a ^ 1].cap += bottleneck;
            v = net.arcs[a ^ 1].to;
        }
    }

    // Source side of the cut = nodes still reachable in the residual network.
    std::vector<char> reachable(n_nodes + 1, 0);
    std::queue<int> frontier;
    frontier.push(source);
    reachable[source] = 1;
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop();
        for (int a : net.out[u]) {
            if (net.arcs[a].cap > 0 && !reachable[net.arcs[a].to]) {
                reachable[net.arcs[a].to] = 1;
                frontier.push(net.arcs[a].to);
            }
        }
    }

    CutSet cut;
    for (int m = 0; m < graph.edge_count(); ++m) {
        if (reachable[graph.edge(m).r] != reachable[graph.edge(m).s]) {
            cut.edge_indices.push_back(m);
        }
    }
    return cut;
}

CutBalance cut_balance_metric(const FlowState& flows, const CutSet& cut) {
    if (cut.edge_indices.empty()) {
        throw std::invalid_argument("cut_balance_metric requires a non-empty cut");
    }
    CutBalance balance;
    balance.max_abs = 0.0;
    balance.min_abs = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (int m : cut.edge_indices) {
        if (m < 0 || m >= static_cast<int>(flows.loads.size())) {
            throw std::invalid_argument("cut references edge " + std::to_string(m + 1) +
                                        " outside the flow state");
        }
        const double a = std::abs(flows.loads[m]);
        balance.max_abs = std::max(balance.max_abs, a);
        balance.min_abs = std::min(balance.min_abs, a);
        sum += a;
    }
    const double count = static_cast<double>(cut.edge_indices.size());
    balance.mean_abs = sum / count;

    double sq = 0.0;
    for (int m : cut.edge_indices) {
        const double d = std::abs(flows.loads[m]) - balance.mean_abs;
        sq += d * d;
    }
    const double stddev = std::sqrt(sq / count);
    balance.cv = balance.mean_abs > 0.0 ? stddev / balance.mean_abs : 0.0;
    return balance;
}

}  // namespace pnormflow
