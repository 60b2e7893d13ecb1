#pragma once

#include <string>
#include <vector>

#include "pnormflow/graph.hpp"

namespace pnormflow {

// SQP outer loop around simulated-distributed Jacobi potential solves. Each
// node's potential update reads only its neighbors' previous-sweep values, so
// one sweep corresponds to one round of message exchange.

struct SolverOptions {
    double p = 2.0;                // congestion exponent, > 1
    double inner_tol = 1e-10;      // Jacobi stop: max potential change per sweep
    int inner_max_sweeps = 0;      // 0 -> 10 * N^2
    double outer_tol = 1e-8;       // SQP stop: max-norm of the correction
    int outer_max_iters = 200;
    double feas_tol = 1e-9;
    double line_search_shrink = 0.5;
    double line_search_min_step = 1.0 / (1 << 20);

    int resolved_inner_max_sweeps(int node_count) const {
        return inner_max_sweeps > 0 ? inner_max_sweeps : 10 * node_count * node_count;
    }
    void validate() const;
};

// One synchronous Jacobi sweep: every node n < N recomputes its potential
// from the previous sweep's neighbor values,
//   u'_n = (b_n + sum_k u_k / r_nk) / (sum_k 1 / r_nk),
// and the destination stays grounded at 0.
std::vector<double> jacobi_sweep(const NetworkGraph& graph, const std::vector<double>& weights,
                                 const std::vector<double>& rhs, const std::vector<double>& potentials);

struct PotentialSolve {
    std::vector<double> potentials;  // length N, destination entry 0
    int sweeps = 0;
    bool converged = false;
    double last_delta = 0.0;    // max potential change in the final sweep
    double residual_inf = 0.0;  // max-norm of the weighted-Laplacian node equations
};

// Sweeps until the potential change is <= inner_tol and the node equations
//   sum_k (u_n - u_k)/r_nk = b_n
// hold with residual <= 10*inner_tol, or the sweep budget runs out (flagged,
// not fatal). Starts from `warm_start` when given, otherwise from zero.
PotentialSolve solve_potentials(const NetworkGraph& graph, const std::vector<double>& weights,
                                const std::vector<double>& rhs, const SolverOptions& opts,
                                const std::vector<double>& warm_start = {});

// i_m = (u_r - u_s)/r_m - I_m/(p-1) with (r, s) the canonical endpoints.
std::vector<double> recover_correction(const NetworkGraph& graph, const std::vector<double>& potentials,
                                       const std::vector<double>& weights, const FlowState& flows,
                                       double p);

struct StepResult {
    FlowState flows;                    // iterate after the step
    double correction_inf = 0.0;        // max-norm of the recovered correction
    double step_length = 0.0;           // accepted alpha; 0 when no step was taken
    bool stalled = false;               // inner solve converged but no alpha decreased the cost
    bool inner_converged = false;
    int inner_sweeps = 0;
    double cost_after = 0.0;
    double feasibility_residual = 0.0;  // max-norm of C*I - T after the step
    double nullspace_residual = 0.0;    // max-norm of C*i for the recovered correction
};

// One SQP step: build weights and rhs from the current iterate, solve the
// potential subproblem, recover the correction, and backtrack on the true
// cost. Corrections from an unconverged inner solve are discarded (the next
// step resumes from the warm-started potentials). Throws on an infeasible
// input iterate. `warm_potentials`, when provided, is read and updated.
StepResult sqp_step(const NetworkGraph& graph, const FlowState& flows, const TrafficVector& traffic,
                    const SolverOptions& opts);
StepResult sqp_step(const NetworkGraph& graph, const FlowState& flows, const TrafficVector& traffic,
                    const SolverOptions& opts, std::vector<double>& warm_potentials);

struct IterationRecord {
    int iter = 0;
    double cost = 0.0;
    double feasibility_residual = 0.0;
    double correction_norm = 0.0;
    int inner_sweeps = 0;
    double step_length = 0.0;
};

struct SolveReport {
    FlowState flows;
    std::vector<IterationRecord> iterations;
    bool converged = false;
    std::string termination_reason;
    double final_cost = 0.0;
    double final_feasibility_residual = 0.0;
    // Upper bound on conservation drift introduced by inexact inner solves:
    // sum over accepted steps of alpha * max-norm(C*i).
    double accumulated_nullspace_drift = 0.0;
    int total_inner_sweeps = 0;
};

// Full pipeline: BFS-tree initial flow, then SQP steps until the correction
// max-norm falls below outer_tol, the line search stalls, or the iteration
// budget runs out. Never throws on non-convergence; the report carries the
// termination reason.
SolveReport solve(const NetworkGraph& graph, const TrafficVector& traffic, const SolverOptions& opts);

}  // namespace pnormflow
