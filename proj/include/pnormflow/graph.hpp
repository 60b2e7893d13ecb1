#pragma once

#include <string>
#include <utility>
#include <vector>

namespace pnormflow {

// Undirected connected network carrying single-commodity traffic.
//
// Node ids are 1-based in files and in the constructor's edge list; all
// in-memory indices are 0-based. The highest-numbered node (internal index
// node_count()-1) is the destination for all traffic. Every edge is stored
// with its canonical orientation low index -> high index; a positive load on
// edge m means flow in that direction, a negative load means the reverse.
class NetworkGraph {
public:
    struct Edge {
        int r = 0;  // low endpoint, 0-based
        int s = 0;  // high endpoint, 0-based, r < s
    };
    struct Neighbor {
        int node = 0;  // adjacent node, 0-based
        int edge = 0;  // index of the connecting edge
    };

    // Throws std::invalid_argument on self-loops, duplicate edges, indices
    // out of [1, node_count], or a disconnected graph (the message names one
    // node unreachable from the destination).
    NetworkGraph(int node_count, const std::vector<std::pair<int, int>>& edges_one_based);

    int node_count() const { return node_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int sink() const { return node_count_ - 1; }
    const Edge& edge(int m) const { return edges_[m]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Neighbor>& neighbors(int node) const { return adjacency_[node]; }

private:
    int node_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Neighbor>> adjacency_;
};

// Traffic injected at nodes 1..N-1 (1-based), values[n] for internal node n.
// Length N-1; the destination has no entry. All entries must be >= 0.
struct TrafficVector {
    std::vector<double> values;
};

// Signed per-edge loads, length M.
struct FlowState {
    std::vector<double> loads;
};

// Edge set whose removal disconnects every positive-traffic node from the
// destination.
struct CutSet {
    std::vector<int> edge_indices;  // sorted ascending
    int cardinality() const { return static_cast<int>(edge_indices.size()); }
};

// Conservation matrix C, (N-1) x M, entries in {-1, 0, +1}. Row i covers
// internal node i; the destination row is omitted. Column m has +1 at the low
// endpoint of edge m and -1 at the high endpoint unless that endpoint is the
// destination.
struct IncidenceMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<std::pair<int, int>>> row_entries;  // (column, value)

    std::vector<double> apply(const std::vector<double>& loads) const;
};

IncidenceMatrix build_incidence(const NetworkGraph& graph);

struct FeasibilityReport {
    bool feasible = false;
    double max_residual = 0.0;
    std::vector<double> residual;  // C*I - T, per node 0..N-2
};

// Throws std::invalid_argument on dimension mismatch or negative traffic.
FeasibilityReport check_feasibility(const NetworkGraph& graph, const FlowState& flows,
                                    const TrafficVector& traffic, double tol);

// Routes each node's traffic to the destination along the BFS tree rooted at
// the destination; superposed tree flows satisfy C*I = T up to rounding.
FlowState initial_feasible_flow(const NetworkGraph& graph, const TrafficVector& traffic);

// Minimum-cardinality edge set separating every positive-traffic node from
// the destination. Computed by unit-capacity max-flow from a super-source
// attached to all positive-traffic nodes; the cut is read off the residual
// reachability. Requires at least one positive traffic entry.
CutSet min_cut(const NetworkGraph& graph, const TrafficVector& traffic);

// Summary of absolute loads on the cut edges. cv is the population standard
// deviation over the mean; 0 iff the loads are perfectly even.
struct CutBalance {
    double max_abs = 0.0;
    double min_abs = 0.0;
    double mean_abs = 0.0;
    double cv = 0.0;
};

CutBalance cut_balance_metric(const FlowState& flows, const CutSet& cut);

// Length and nonnegativity checks shared by the operations above.
void validate_traffic(const NetworkGraph& graph, const TrafficVector& traffic);

}  // namespace pnormflow
