#include "pnormflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pnormflow/pnorm.hpp"

namespace pnormflow {

void SolverOptions::validate() const {
    if (!(p > 1.0)) {
        throw std::invalid_argument("solver option p must be > 1");
    }
    if (!(inner_tol > 0.0) || !(outer_tol > 0.0) || !(feas_tol > 0.0)) {
        throw std::invalid_argument("solver tolerances must be positive");
    }
    if (!(line_search_shrink > 0.0 && line_search_shrink < 1.0)) {
        throw std::invalid_argument("line_search_shrink must lie in (0, 1)");
    }
    if (!(line_search_min_step > 0.0 && line_search_min_step <= 1.0)) {
        throw std::invalid_argument("line_search_min_step must lie in (0, 1]");
    }
    if (outer_max_iters < 0 || inner_max_sweeps < 0) {
        throw std::invalid_argument("iteration budgets must be nonnegative");
    }
}

namespace {

void require_weights(const NetworkGraph& graph, const std::vector<double>& weights) {
    if (static_cast<int>(weights.size()) != graph.edge_count()) {
        throw std::invalid_argument("weights vector has wrong length");
    }
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("edge weights must be positive and finite");
        }
    }
}

void require_rhs(const NetworkGraph& graph, const std::vector<double>& rhs) {
    if (static_cast<int>(rhs.size()) != graph.node_count() - 1) {
        throw std::invalid_argument("rhs vector has wrong length");
    }
}

// u_out[n] from previous-sweep values only; returns the max potential change.
double sweep_kernel(const NetworkGraph& graph, const std::vector<double>& conductance,
                    const std::vector<double>& rhs, const std::vector<double>& u_in,
                    std::vector<double>& u_out) {
    const int sink = graph.sink();
    double delta = 0.0;
    for (int n = 0; n < graph.node_count(); ++n) {
        if (n == sink) {
            u_out[n] = 0.0;
            continue;
        }
        double num = rhs[n];
        double den = 0.0;
        for (const auto& nb : graph.neighbors(n)) {
            const double g = conductance[nb.edge];
            num += g * u_in[nb.node];
            den += g;
        }
        u_out[n] = num / den;
        delta = std::max(delta, std::abs(u_out[n] - u_in[n]));
    }
    return delta;
}

// Max-norm residual of the node equations sum_k (u_n - u_k) g_nk = b_n.
double node_equation_residual(const NetworkGraph& graph, const std::vector<double>& conductance,
                              const std::vector<double>& rhs, const std::vector<double>& u) {
    double residual = 0.0;
    for (int n = 0; n < graph.node_count() - 1; ++n) {
        double acc = rhs[n];
        for (const auto& nb : graph.neighbors(n)) {
            acc -= conductance[nb.edge] * (u[n] - u[nb.node]);
        }
        residual = std::max(residual, std::abs(acc));
    }
    return residual;
}

std::vector<double> to_conductance(const std::vector<double>& weights) {
    std::vector<double> conductance(weights.size());
    for (std::size_t m = 0; m < weights.size(); ++m) {
        conductance[m] = 1.0 / weights[m];
    }
    return conductance;
}

double max_abs(const std::vector<double>& v) {
    double out = 0.0;
    for (double x : v) {
        out = std::max(out, std::abs(x));
    }
    return out;
}

// Max-norm of C*i, accumulated straight off the edge list.
double nullspace_residual(const NetworkGraph& graph, const std::vector<double>& correction) {
    std::vector<double> acc(graph.node_count() - 1, 0.0);
    for (int m = 0; m < graph.edge_count(); ++m) {
        const auto& e = graph.edge(m);
        acc[e.r] += correction[m];
        if (e.s != graph.sink()) {
            acc[e.s] -= correction[m];
        }
    }
    return max_abs(acc);
}

}  // namespace

std::vector<double> jacobi_sweep(const NetworkGraph& graph, const std::vector<double>& weights,
                                 const std::vector<double>& rhs, const std::vector<double>& potentials) {
    require_weights(graph, weights);
    require_rhs(graph, rhs);
    if (static_cast<int>(potentials.size()) != graph.node_count()) {
        throw std::invalid_argument("potential vector has wrong length");
    }
    if (potentials[graph.sink()] != 0.0) {
        throw std::invalid_argument("destination potential must be 0");
    }
    std::vector<double> next(potentials.size());
    sweep_kernel(graph, to_conductance(weights), rhs, potentials, next);
    return next;
}

PotentialSolve solve_potentials(const NetworkGraph& graph, const std::vector<double>& weights,
                                const std::vector<double>& rhs, const SolverOptions& opts,
                                const std::vector<double>& warm_start) {
    opts.validate();
    require_weights(graph, weights);
    require_rhs(graph, rhs);

    PotentialSolve result;
    if (warm_start.empty()) {
        result.potentials.assign(graph.node_count(), 0.0);
    } else {
        if (static_cast<int>(warm_start.size()) != graph.node_count()) {
            throw std::invalid_argument("warm start potential vector has wrong length");
        }
        result.potentials = warm_start;
        result.potentials[graph.sink()] = 0.0;
    }

    const std::vector<double> conductance = to_conductance(weights);
    const int max_sweeps = opts.resolved_inner_max_sweeps(graph.node_count());
    std::vector<double> next(result.potentials.size());

    while (result.sweeps < max_sweeps) {
        result.last_delta = sweep_kernel(graph, conductance, rhs, result.potentials, next);
        result.potentials.swap(next);
        ++result.sweeps;
        if (result.last_delta <= opts.inner_tol) {
            // Also require the node equations to actually hold; the change
            // criterion alone can trigger early on slowly mixing graphs.
            result.residual_inf = node_equation_residual(graph, conductance, rhs, result.potentials);
            if (result.residual_inf <= 10.0 * opts.inner_tol) {
                result.converged = true;
                return result;
            }
        }
    }
    result.residual_inf = node_equation_residual(graph, conductance, rhs, result.potentials);
    result.converged =
        result.last_delta <= opts.inner_tol && result.residual_inf <= 10.0 * opts.inner_tol;
    return result;
}

std::vector<double> recover_correction(const NetworkGraph& graph, const std::vector<double>& potentials,
                                       const std::vector<double>& weights, const FlowState& flows,
                                       double p) {
    require_weights(graph, weights);
    if (static_cast<int>(potentials.size()) != graph.node_count()) {
        throw std::invalid_argument("potential vector has wrong length");
    }
    if (static_cast<int>(flows.loads.size()) != graph.edge_count()) {
        throw std::invalid_argument("flow state has wrong length");
    }
    if (!(p > 1.0)) {
        throw std::invalid_argument("p must be > 1");
    }
    std::vector<double> correction(graph.edge_count());
    for (int m = 0; m < graph.edge_count(); ++m) {
        const auto& e = graph.edge(m);
        correction[m] = (potentials[e.r] - potentials[e.s]) / weights[m] - flows.loads[m] / (p - 1.0);
    }
    return correction;
}

namespace {

struct SubproblemWeights {
    std::vector<double> weights;  // geometric-mean normalized
};

// Weights for the completed-square subproblem. Normalizing by the geometric
// mean leaves the recovered correction unchanged (potentials rescale with the
// weights) and keeps the per-edge values inside the double range even when
// p is large and the raw r_m would under- or overflow.
SubproblemWeights subproblem_weights(const FlowState& flows, double p) {
    std::vector<double> logs = edge_weight_logs(flows, p, regularization_floor(flows));
    const double mean_log = std::accumulate(logs.begin(), logs.end(), 0.0) / static_cast<double>(logs.size());
    SubproblemWeights out;
    out.weights.resize(logs.size());
    for (std::size_t m = 0; m < logs.size(); ++m) {
        out.weights[m] = std::exp(logs[m] - mean_log);
    }
    return out;
}

}  // namespace

StepResult sqp_step(const NetworkGraph& graph, const FlowState& flows, const TrafficVector& traffic,
                    const SolverOptions& opts, std::vector<double>& warm_potentials) {
    opts.validate();
    if (static_cast<int>(flows.loads.size()) != graph.edge_count()) {
        throw std::invalid_argument("flow state has wrong length");
    }

    // Admit the drift an inexact inner solve may legitimately introduce over a
    // full outer run; anything beyond that is an infeasible input.
    const double entry_gate =
        opts.feas_tol + 100.0 * opts.inner_tol * std::max(opts.outer_max_iters, 1);
    const FeasibilityReport entry = check_feasibility(graph, flows, traffic, entry_gate);
    if (!entry.feasible) {
        throw std::invalid_argument("sqp_step requires a feasible flow (residual " +
                                    std::to_string(entry.max_residual) + ")");
    }

    const SubproblemWeights sub = subproblem_weights(flows, opts.p);
    const std::vector<double> rhs = subproblem_rhs(traffic, opts.p);

    PotentialSolve inner = solve_potentials(graph, sub.weights, rhs, opts, warm_potentials);
    warm_potentials = inner.potentials;

    const std::vector<double> correction =
        recover_correction(graph, inner.potentials, sub.weights, flows, opts.p);

    StepResult step;
    step.flows = flows;
    step.correction_inf = max_abs(correction);
    step.inner_converged = inner.converged;
    step.inner_sweeps = inner.sweeps;
    step.nullspace_residual = nullspace_residual(graph, correction);
    step.feasibility_residual = entry.max_residual;

    const double cost_before = cost(flows, opts.p);
    step.cost_after = cost_before;

    // A correction from an unconverged inner solve may violate conservation;
    // skip it and let the next step continue from the warm-started potentials.
    if (!inner.converged || step.nullspace_residual > 100.0 * opts.inner_tol) {
        return step;
    }

    auto apply = [&](double alpha) {
        FlowState candidate = flows;
        for (int m = 0; m < graph.edge_count(); ++m) {
            candidate.loads[m] += alpha * correction[m];
        }
        return candidate;
    };
    auto accept = [&](FlowState&& candidate, double alpha) {
        step.cost_after = cost(candidate, opts.p);
        step.flows = std::move(candidate);
        step.step_length = alpha;
        step.feasibility_residual =
            check_feasibility(graph, step.flows, traffic, entry_gate).max_residual;
    };

    if (step.correction_inf <= opts.outer_tol) {
        // At a fixed point; take the full step only if it does not move the
        // cost up within rounding.
        FlowState candidate = apply(1.0);
        if (cost(candidate, opts.p) <= cost_before) {
            accept(std::move(candidate), 1.0);
        }
        return step;
    }

    for (double alpha = 1.0; alpha >= opts.line_search_min_step; alpha *= opts.line_search_shrink) {
        FlowState candidate = apply(alpha);
        if (cost(candidate, opts.p) < cost_before) {
            accept(std::move(candidate), alpha);
            return step;
        }
    }
    step.stalled = true;
    return step;
}

StepResult sqp_step(const NetworkGraph& graph, const FlowState& flows, const TrafficVector& traffic,
                    const SolverOptions& opts) {
    std::vector<double> cold(graph.node_count(), 0.0);
    return sqp_step(graph, flows, traffic, opts, cold);
}

SolveReport solve(const NetworkGraph& graph, const TrafficVector& traffic, const SolverOptions& opts) {
    opts.validate();
    validate_traffic(graph, traffic);
    if (std::all_of(traffic.values.begin(), traffic.values.end(), [](double t) { return t == 0.0; })) {
        throw std::invalid_argument("traffic is all-zero; nothing to route");
    }

    SolveReport report;
    report.flows = initial_feasible_flow(graph, traffic);
    std::vector<double> warm(graph.node_count(), 0.0);

    report.termination_reason = "outer iteration budget exhausted";
    for (int k = 1; k <= opts.outer_max_iters; ++k) {
        StepResult step = sqp_step(graph, report.flows, traffic, opts, warm);
        report.flows = step.flows;
        report.total_inner_sweeps += step.inner_sweeps;
        report.accumulated_nullspace_drift += step.step_length * step.nullspace_residual;
        report.iterations.push_back({k, step.cost_after, step.feasibility_residual,
                                     step.correction_inf, step.inner_sweeps, step.step_length});
        if (step.inner_converged && step.correction_inf <= opts.outer_tol) {
            report.converged = true;
            report.termination_reason = "correction below outer tolerance";
            break;
        }
        if (step.stalled) {
            report.termination_reason = "line search stalled";
            break;
        }
    }

    report.final_cost = cost(report.flows, opts.p);
    report.final_feasibility_residual =
        check_feasibility(graph, report.flows, traffic, opts.feas_tol).max_residual;
    return report;
}

}  // namespace pnormflow
