#include "pnormflow/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pnormflow {

namespace {

using nlohmann::json;

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(path + ": cannot open for reading");
    }
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error(path + ": cannot open for writing");
    }
    out << std::fixed << std::setprecision(6);
    return out;
}

}  // namespace

ProblemInput load_graph_json(const std::string& path) {
    std::ifstream in = open_input(path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }

    if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_number_integer()) {
        throw std::runtime_error(path + ": field \"nodes\" must be an integer");
    }
    const int n = doc["nodes"].get<int>();

    if (!doc.contains("edges") || !doc["edges"].is_array()) {
        throw std::runtime_error(path + ": field \"edges\" must be a list of [r, s] pairs");
    }
    std::vector<std::pair<int, int>> edges;
    for (std::size_t m = 0; m < doc["edges"].size(); ++m) {
        const auto& e = doc["edges"][m];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
            throw std::runtime_error(path + ": edges[" + std::to_string(m) + "] must be a [r, s] integer pair");
        }
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }

    TrafficVector traffic;
    if (doc.contains("traffic")) {
        if (!doc["traffic"].is_array()) {
            throw std::runtime_error(path + ": field \"traffic\" must be a list of reals");
        }
        for (std::size_t i = 0; i < doc["traffic"].size(); ++i) {
            if (!doc["traffic"][i].is_number()) {
                throw std::runtime_error(path + ": traffic[" + std::to_string(i) + "] is not a number");
            }
            traffic.values.push_back(doc["traffic"][i].get<double>());
        }
        if (static_cast<int>(traffic.values.size()) != n - 1) {
            throw std::runtime_error(path + ": traffic list has " + std::to_string(traffic.values.size()) +
                                     " entries, expected " + std::to_string(n - 1) +
                                     " (one per node except the destination)");
        }
    } else {
        traffic.values.assign(std::max(n - 1, 0), 0.0);
    }

    try {
        return ProblemInput{NetworkGraph(n, edges), std::move(traffic)};
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

ProblemInput load_graph_edgelist(const std::string& edge_path, const std::string& traffic_path) {
    std::ifstream in = open_input(edge_path);
    std::vector<std::pair<int, int>> edges;
    int max_node = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first) || first[0] == '#') {
            continue;  // blank or comment line
        }
        int r = 0;
        int s = 0;
        std::istringstream head(first);
        if (!(head >> r) || !(fields >> s)) {
            throw std::runtime_error(edge_path + ":" + std::to_string(line_no) +
                                     ": expected \"r s\" node pair");
        }
        std::string extra;
        if (fields >> extra) {
            throw std::runtime_error(edge_path + ":" + std::to_string(line_no) +
                                     ": trailing content after the node pair");
        }
        edges.emplace_back(r, s);
        max_node = std::max({max_node, r, s});
    }
    if (edges.empty()) {
        throw std::runtime_error(edge_path + ": no edges found");
    }

    TrafficVector traffic;
    if (!traffic_path.empty()) {
        std::ifstream tin = open_input(traffic_path);
        int tline_no = 0;
        while (std::getline(tin, line)) {
            ++tline_no;
            std::istringstream fields(line);
            std::string first;
            if (!(fields >> first) || first[0] == '#') {
                continue;
            }
            try {
                traffic.values.push_back(std::stod(first));
            } catch (const std::exception&) {
                throw std::runtime_error(traffic_path + ":" + std::to_string(tline_no) +
                                         ": expected one real per line");
            }
        }
        if (static_cast<int>(traffic.values.size()) != max_node - 1) {
            throw std::runtime_error(traffic_path + ": has " + std::to_string(traffic.values.size()) +
                                     " traffic entries, expected " + std::to_string(max_node - 1));
        }
    } else {
        traffic.values.assign(std::max(max_node - 1, 0), 0.0);
    }

    try {
        return ProblemInput{NetworkGraph(max_node, edges), std::move(traffic)};
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(edge_path + ": " + e.what());
    }
}

FlowState read_flows_csv(const std::string& path, const NetworkGraph& graph) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line) || line != "edge_index,r,s,flow") {
        throw std::runtime_error(path + ": expected header edge_index,r,s,flow");
    }
    FlowState flows;
    flows.loads.assign(graph.edge_count(), 0.0);
    std::vector<char> seen(graph.edge_count(), 0);
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::istringstream fields(line);
        int m = 0;
        int r = 0;
        int s = 0;
        double flow = 0.0;
        char c1 = 0;
        char c2 = 0;
        char c3 = 0;
        if (!(fields >> m >> c1 >> r >> c2 >> s >> c3 >> flow) || c1 != ',' || c2 != ',' || c3 != ',') {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected edge_index,r,s,flow");
        }
        if (m < 1 || m > graph.edge_count()) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": edge index " +
                                     std::to_string(m) + " out of range");
        }
        const auto& e = graph.edge(m - 1);
        if (e.r + 1 != r || e.s + 1 != s) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": edge " + std::to_string(m) +
                                     " endpoints (" + std::to_string(r) + ", " + std::to_string(s) +
                                     ") do not match the graph");
        }
        seen[m - 1] = 1;
        flows.loads[m - 1] = flow;
    }
    for (int m = 0; m < graph.edge_count(); ++m) {
        if (!seen[m]) {
            throw std::runtime_error(path + ": missing row for edge " + std::to_string(m + 1));
        }
    }
    return flows;
}

void write_flows_csv(const std::string& path, const NetworkGraph& graph, const FlowState& flows) {
    std::ofstream out = open_output(path);
    out << "edge_index,r,s,flow\n";
    for (int m = 0; m < graph.edge_count(); ++m) {
        const auto& e = graph.edge(m);
        out << (m + 1) << ',' << (e.r + 1) << ',' << (e.s + 1) << ',' << flows.loads[m] << '\n';
    }
}

namespace {

json meta_json(const RunMeta& meta) {
    return json{{"p", meta.p},
                {"seed", meta.seed},
                {"converged", meta.converged},
                {"termination_reason", meta.termination_reason}};
}

void dump(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error(path + ": cannot open for writing");
    }
    out << doc.dump(2) << '\n';
}

}  // namespace

void write_flows_json(const std::string& path, const NetworkGraph& graph, const FlowState& flows,
                      const RunMeta& meta) {
    json rows = json::array();
    for (int m = 0; m < graph.edge_count(); ++m) {
        const auto& e = graph.edge(m);
        rows.push_back(json{{"edge_index", m + 1}, {"r", e.r + 1}, {"s", e.s + 1}, {"flow", flows.loads[m]}});
    }
    dump(path, json{{"meta", meta_json(meta)}, {"flows", rows}});
}

void write_trace_csv(const std::string& path, const SolveReport& report) {
    std::ofstream out = open_output(path);
    out << "iter,cost,feasibility_residual,correction_norm,inner_sweeps,step_length\n";
    for (const auto& rec : report.iterations) {
        out << rec.iter << ',' << rec.cost << ',' << std::scientific << rec.feasibility_residual << ','
            << rec.correction_norm << std::fixed << ',' << rec.inner_sweeps << ',' << rec.step_length
            << '\n';
    }
}

void write_trace_json(const std::string& path, const SolveReport& report, const RunMeta& meta) {
    json rows = json::array();
    for (const auto& rec : report.iterations) {
        rows.push_back(json{{"iter", rec.iter},
                            {"cost", rec.cost},
                            {"feasibility_residual", rec.feasibility_residual},
                            {"correction_norm", rec.correction_norm},
                            {"inner_sweeps", rec.inner_sweeps},
                            {"step_length", rec.step_length}});
    }
    json doc{{"meta", meta_json(meta)},
             {"iterations", rows},
             {"final_cost", report.final_cost},
             {"final_feasibility_residual", report.final_feasibility_residual},
             {"accumulated_nullspace_drift", report.accumulated_nullspace_drift},
             {"total_inner_sweeps", report.total_inner_sweeps}};
    dump(path, doc);
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream out = open_output(path);
    out << "p,cost,cut_max,cut_min,cut_cv,converged\n";
    for (const auto& row : rows) {
        out << row.p << ',' << row.cost << ',' << row.cut_max << ',' << row.cut_min << ',' << row.cut_cv
            << ',' << (row.converged ? 1 : 0) << '\n';
    }
}

void write_sweep_json(const std::string& path, const std::vector<SweepRow>& rows, const RunMeta& meta) {
    json out_rows = json::array();
    for (const auto& row : rows) {
        out_rows.push_back(json{{"p", row.p},
                                {"cost", row.cost},
                                {"cut_max", row.cut_max},
                                {"cut_min", row.cut_min},
                                {"cut_cv", row.cut_cv},
                                {"converged", row.converged}});
    }
    dump(path, json{{"meta", meta_json(meta)}, {"rows", out_rows}});
}

}  // namespace pnormflow
