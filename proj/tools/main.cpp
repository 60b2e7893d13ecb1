// Command-line front end: solve, sweep, oracle, and mincut subcommands over
// graphs in JSON or edge-list form. Exit codes are a contract: 0 success /
// converged, 1 input or usage error, 2 non-convergence (or, for `oracle`,
// disagreement beyond tolerance).

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pnormflow/graph.hpp"
#include "pnormflow/io.hpp"
#include "pnormflow/oracles.hpp"
#include "pnormflow/pnorm.hpp"
#include "pnormflow/solver.hpp"

namespace {

using namespace pnormflow;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNotConverged = 2;

struct CommonArgs {
    std::string graph_path;
    std::string format = "json";
    std::string traffic_path;
    std::string out_prefix = "pnormflow";
    std::string out_format = "csv";
    double p = 2.0;
    std::string p_list;
    double inner_tol = 1e-10;
    double outer_tol = 1e-8;
    int max_outer = 200;
    long seed = 0;
};

void add_common_flags(CLI::App& cmd, CommonArgs& args, bool wants_p, bool wants_p_list) {
    cmd.add_option("--graph", args.graph_path, "input graph file")->required();
    cmd.add_option("--format", args.format, "input format: json or edgelist")
        ->check(CLI::IsMember({"json", "edgelist"}));
    cmd.add_option("--traffic", args.traffic_path, "traffic sidecar file (edgelist format only)");
    cmd.add_option("--out", args.out_prefix, "output path prefix (default: pnormflow)");
    cmd.add_option("--out-format", args.out_format, "report format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    if (wants_p) {
        cmd.add_option("--p", args.p, "congestion exponent p (> 1)");
    }
    if (wants_p_list) {
        cmd.add_option("--p-list", args.p_list, "comma-separated list of p values");
    }
    cmd.add_option("--inner-tol", args.inner_tol, "Jacobi sweep tolerance");
    cmd.add_option("--outer-tol", args.outer_tol, "SQP correction tolerance");
    cmd.add_option("--max-outer", args.max_outer, "SQP iteration budget");
    cmd.add_option("--seed", args.seed, "reserved; echoed in reports for reproducibility");
}

ProblemInput load_input(const CommonArgs& args) {
    if (args.format == "json") {
        if (!args.traffic_path.empty()) {
            throw std::runtime_error("--traffic only applies to the edgelist format");
        }
        return load_graph_json(args.graph_path);
    }
    return load_graph_edgelist(args.graph_path, args.traffic_path);
}

SolverOptions make_options(const CommonArgs& args, double p) {
    SolverOptions opts;
    opts.p = p;
    opts.inner_tol = args.inner_tol;
    opts.outer_tol = args.outer_tol;
    opts.outer_max_iters = args.max_outer;
    opts.validate();
    return opts;
}

std::vector<double> parse_p_list(const std::string& text) {
    std::vector<double> values;
    std::istringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        try {
            values.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw std::runtime_error("--p-list: cannot parse \"" + token + "\" as a real");
        }
        if (!(values.back() > 1.0)) {
            throw std::runtime_error("--p-list: every p must be > 1");
        }
    }
    if (values.size() < 2) {
        throw std::runtime_error("--p-list needs at least 2 values");
    }
    return values;
}

int cmd_solve(const CommonArgs& args) {
    const ProblemInput input = load_input(args);
    const SolverOptions opts = make_options(args, args.p);
    const SolveReport report = solve(input.graph, input.traffic, opts);

    RunMeta meta{opts.p, args.seed, report.converged, report.termination_reason};
    if (args.out_format == "csv") {
        write_flows_csv(args.out_prefix + ".flows.csv", input.graph, report.flows);
        write_trace_csv(args.out_prefix + ".trace.csv", report);
    } else {
        write_flows_json(args.out_prefix + ".flows.json", input.graph, report.flows, meta);
        write_trace_json(args.out_prefix + ".trace.json", report, meta);
    }

    std::cout << (report.converged ? "converged" : "not converged") << " after "
              << report.iterations.size() << " outer iterations (" << report.termination_reason
              << ")\n"
              << "p " << opts.p << ", seed " << args.seed << ", cost " << report.final_cost
              << ", feasibility residual " << report.final_feasibility_residual << '\n'
              << "reports written to " << args.out_prefix << ".{flows,trace}." << args.out_format
              << '\n';
    return report.converged ? kExitOk : kExitNotConverged;
}

int cmd_sweep(const CommonArgs& args) {
    const ProblemInput input = load_input(args);
    const std::vector<double> p_values = parse_p_list(args.p_list);
    const CutSet cut = min_cut(input.graph, input.traffic);

    std::vector<SweepRow> rows;
    bool all_converged = true;
    for (double p : p_values) {
        const SolverOptions opts = make_options(args, p);
        const SolveReport report = solve(input.graph, input.traffic, opts);
        const CutBalance balance = cut_balance_metric(report.flows, cut);
        rows.push_back({p, report.final_cost, balance.max_abs, balance.min_abs, balance.cv,
                        report.converged});
        all_converged = all_converged && report.converged;
    }

    RunMeta meta{0.0, args.seed, all_converged, all_converged ? "" : "some p values did not converge"};
    const std::string path = args.out_prefix + ".sweep." + args.out_format;
    if (args.out_format == "csv") {
        write_sweep_csv(path, rows);
    } else {
        write_sweep_json(path, rows, meta);
    }

    std::cout << "swept " << p_values.size() << " p values over a cut of cardinality "
              << cut.cardinality() << "; report written to " << path << '\n';
    return all_converged ? kExitOk : kExitNotConverged;
}

int cmd_oracle(const CommonArgs& args) {
    const ProblemInput input = load_input(args);
    const SolverOptions opts = make_options(args, args.p);
    const SolveReport report = solve(input.graph, input.traffic, opts);

    const OracleSolution reference = opts.p == 2.0
                                         ? oracle_p2(input.graph, input.traffic)
                                         : oracle_general_p(input.graph, input.traffic, opts.p, 1e-9);
    OracleSolution laplacian;
    const bool have_p2 = opts.p == 2.0;
    if (have_p2) {
        laplacian = reference;
    }
    const OracleSolution descent =
        have_p2 ? oracle_general_p(input.graph, input.traffic, opts.p, 1e-9) : reference;

    double discrepancy = 0.0;
    std::printf("edge      r      s        solver        oracle\n");
    for (int m = 0; m < input.graph.edge_count(); ++m) {
        const auto& e = input.graph.edge(m);
        std::printf("%4d  %5d  %5d  %12.8f  %12.8f\n", m + 1, e.r + 1, e.s + 1,
                    report.flows.loads[m], reference.flows.loads[m]);
        discrepancy = std::max(discrepancy,
                               std::abs(report.flows.loads[m] - reference.flows.loads[m]));
    }
    std::printf("max-norm discrepancy vs %s: %.3e\n", reference.method.c_str(), discrepancy);
    if (have_p2) {
        double cross = 0.0;
        for (int m = 0; m < input.graph.edge_count(); ++m) {
            cross = std::max(cross, std::abs(laplacian.flows.loads[m] - descent.flows.loads[m]));
        }
        std::printf("oracle cross-check (%s vs %s): %.3e\n", laplacian.method.c_str(),
                    descent.method.c_str(), cross);
    }
    if (!report.converged) {
        std::printf("solver did not converge (%s)\n", report.termination_reason.c_str());
        return kExitNotConverged;
    }
    return discrepancy <= 1e-5 ? kExitOk : kExitNotConverged;
}

int cmd_mincut(const CommonArgs& args, const std::string& flows_path) {
    const ProblemInput input = load_input(args);
    const CutSet cut = min_cut(input.graph, input.traffic);

    std::cout << "min cut cardinality " << cut.cardinality() << "; edges:";
    for (int m : cut.edge_indices) {
        const auto& e = input.graph.edge(m);
        std::cout << " e" << (m + 1) << "=(" << (e.r + 1) << "," << (e.s + 1) << ")";
    }
    std::cout << '\n';

    if (!flows_path.empty()) {
        const FlowState flows = read_flows_csv(flows_path, input.graph);
        const CutBalance balance = cut_balance_metric(flows, cut);
        std::cout << std::fixed;
        std::cout.precision(6);
        std::cout << "cut loads: max " << balance.max_abs << ", min " << balance.min_abs << ", cv "
                  << balance.cv << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-norm congestion-minimizing traffic flows"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string flows_path;

    CLI::App* solve_cmd = app.add_subcommand("solve", "minimize the p-norm congestion cost");
    add_common_flags(*solve_cmd, args, true, false);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "solve for several p and report cut balance");
    add_common_flags(*sweep_cmd, args, false, true);

    CLI::App* oracle_cmd = app.add_subcommand("oracle", "compare the solver against reference oracles");
    add_common_flags(*oracle_cmd, args, true, false);

    CLI::App* mincut_cmd = app.add_subcommand("mincut", "report the minimum cut and its load balance");
    add_common_flags(*mincut_cmd, args, false, false);
    mincut_cmd->add_option("--flows", flows_path, "flows CSV to evaluate on the cut");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);  // --help
        }
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (solve_cmd->parsed()) {
            return cmd_solve(args);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(args);
        }
        if (oracle_cmd->parsed()) {
            return cmd_oracle(args);
        }
        return cmd_mincut(args, flows_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }
}
