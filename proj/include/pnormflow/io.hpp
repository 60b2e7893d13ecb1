#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pnormflow/graph.hpp"
#include "pnormflow/solver.hpp"

namespace pnormflow {

// File formats, 1-based node indices throughout:
//  - graph JSON: {"nodes": N, "edges": [[r, s], ...], "traffic": [N-1 reals]}
//    ("traffic" may be absent entirely -> all zeros; a short list is an error)
//  - edge list: one "r s" pair per line; traffic sidecar with one real per
//    line, N-1 lines, N inferred from the largest endpoint
//  - flows CSV: header edge_index,r,s,flow
//  - trace CSV: header iter,cost,feasibility_residual,correction_norm,
//    inner_sweeps,step_length
// CSV values are fixed 6-decimal; JSON keeps full double precision.
// All loaders throw std::runtime_error with a file/line/field diagnostic.

struct ProblemInput {
    NetworkGraph graph;
    TrafficVector traffic;
};

ProblemInput load_graph_json(const std::string& path);
ProblemInput load_graph_edgelist(const std::string& edge_path, const std::string& traffic_path);

FlowState read_flows_csv(const std::string& path, const NetworkGraph& graph);

struct RunMeta {
    double p = 0.0;
    long seed = 0;
    bool converged = false;
    std::string termination_reason;
};

void write_flows_csv(const std::string& path, const NetworkGraph& graph, const FlowState& flows);
void write_flows_json(const std::string& path, const NetworkGraph& graph, const FlowState& flows,
                      const RunMeta& meta);

void write_trace_csv(const std::string& path, const SolveReport& report);
void write_trace_json(const std::string& path, const SolveReport& report, const RunMeta& meta);

struct SweepRow {
    double p = 0.0;
    double cost = 0.0;
    double cut_max = 0.0;
    double cut_min = 0.0;
    double cut_cv = 0.0;
    bool converged = false;
};

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);
void write_sweep_json(const std::string& path, const std::vector<SweepRow>& rows, const RunMeta& meta);

}  // namespace pnormflow
