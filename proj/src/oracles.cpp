#include "pnormflow/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "pnormflow/pnorm.hpp"

namespace pnormflow {

namespace {

// Gaussian elimination with partial pivoting; A is overwritten.
std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int row = col + 1; row < n; ++row) {
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) {
                pivot = row;
            }
        }
        if (a[pivot][col] == 0.0) {
            throw std::runtime_error("singular system in dense elimination");
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (int row = col + 1; row < n; ++row) {
            const double factor = a[row][col] / a[col][col];
            if (factor == 0.0) {
                continue;
            }
            for (int k = col; k < n; ++k) {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (int row = n - 1; row >= 0; --row) {
        double acc = b[row];
        for (int k = row + 1; k < n; ++k) {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    return x;
}

struct SpanningTree {
    std::vector<int> parent;       // parent node toward the root (sink)
    std::vector<int> parent_edge;  // edge to the parent, -1 at the root
    std::vector<int> depth;
    std::vector<char> in_tree;     // per edge
};

SpanningTree bfs_tree(const NetworkGraph& graph) {
    SpanningTree tree;
    tree.parent.assign(graph.node_count(), -1);
    tree.parent_edge.assign(graph.node_count(), -1);
    tree.depth.assign(graph.node_count(), 0);
    tree.in_tree.assign(graph.edge_count(), 0);

    std::queue<int> frontier;
    frontier.push(graph.sink());
    tree.parent[graph.sink()] = graph.sink();
    while (!frontier.empty()) {
        const int n = frontier.front();
        frontier.pop();
        for (const auto& nb : graph.neighbors(n)) {
            if (tree.parent[nb.node] < 0) {
                tree.parent[nb.node] = n;
                tree.parent_edge[nb.node] = nb.edge;
                tree.depth[nb.node] = tree.depth[n] + 1;
                tree.in_tree[nb.edge] = 1;
                frontier.push(nb.node);
            }
        }
    }
    return tree;
}

}  // namespace

CycleBasis cycle_space_basis(const NetworkGraph& graph) {
    const SpanningTree tree = bfs_tree(graph);
    CycleBasis basis;

    for (int m = 0; m < graph.edge_count(); ++m) {
        if (tree.in_tree[m]) {
            continue;
        }
        // Unit circulation: r -> s over the non-tree edge, back s -> r along
        // tree paths through the lowest common ancestor. A tree edge counts +1
        // when the walk traverses it in its canonical low-to-high direction.
        std::vector<std::pair<int, int>> cycle;
        cycle.push_back({m, +1});

        int a = graph.edge(m).s;  // walk a -> ... -> lca with the circulation
        int b = graph.edge(m).r;  // walk lca -> ... -> b against parent links
        while (tree.depth[a] > tree.depth[b]) {
            const int e = tree.parent_edge[a];
            cycle.push_back({e, a < tree.parent[a] ? +1 : -1});
            a = tree.parent[a];
        }
        while (tree.depth[b] > tree.depth[a]) {
            const int e = tree.parent_edge[b];
            cycle.push_back({e, tree.parent[b] < b ? +1 : -1});
            b = tree.parent[b];
        }
        while (a != b) {
            const int ea = tree.parent_edge[a];
            cycle.push_back({ea, a < tree.parent[a] ? +1 : -1});
            a = tree.parent[a];
            const int eb = tree.parent_edge[b];
            cycle.push_back({eb, tree.parent[b] < b ? +1 : -1});
            b = tree.parent[b];
        }
        basis.cycles.push_back(std::move(cycle));
    }
    return basis;
}

OracleSolution oracle_p2(const NetworkGraph& graph, const TrafficVector& traffic) {
    validate_traffic(graph, traffic);

    const int n = graph.node_count() - 1;
    std::vector<std::vector<double>> laplacian(n, std::vector<double>(n, 0.0));
    for (int m = 0; m < graph.edge_count(); ++m) {
        const auto& e = graph.edge(m);
        laplacian[e.r][e.r] += 1.0;
        if (e.s != graph.sink()) {
            laplacian[e.s][e.s] += 1.0;
            laplacian[e.r][e.s] -= 1.0;
            laplacian[e.s][e.r] -= 1.0;
        }
    }

    const std::vector<double> u = solve_dense(std::move(laplacian), traffic.values);

    OracleSolution sol;
    sol.method = "reduced-laplacian";
    sol.flows.loads.resize(graph.edge_count());
    for (int m = 0; m < graph.edge_count(); ++m) {
        const auto& e = graph.edge(m);
        const double ur = u[e.r];
        const double us = e.s == graph.sink() ? 0.0 : u[e.s];
        sol.flows.loads[m] = ur - us;
    }
    sol.cost = cost(sol.flows, 2.0);
    return sol;
}

namespace {

FlowState expand(const FlowState& base, const CycleBasis& basis, const std::vector<double>& z) {
    FlowState flows = base;
    for (int c = 0; c < basis.cycle_count(); ++c) {
        for (const auto& [edge, sign] : basis.cycles[c]) {
            flows.loads[edge] += sign * z[c];
        }
    }
    return flows;
}

std::vector<double> reduced_gradient(const CycleBasis& basis, const std::vector<double>& grad) {
    std::vector<double> g(basis.cycle_count(), 0.0);
    for (int c = 0; c < basis.cycle_count(); ++c) {
        for (const auto& [edge, sign] : basis.cycles[c]) {
            g[c] += sign * grad[edge];
        }
    }
    return g;
}

double inf_norm(const std::vector<double>& v) {
    double out = 0.0;
    for (double x : v) {
        out = std::max(out, std::abs(x));
    }
    return out;
}

}  // namespace

OracleSolution oracle_general_p(const NetworkGraph& graph, const TrafficVector& traffic, double p,
                                double tol, int max_iters) {
    validate_traffic(graph, traffic);
    if (!(p > 1.0)) {
        throw std::invalid_argument("p must be > 1");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("tol must be positive");
    }

    const FlowState base = initial_feasible_flow(graph, traffic);
    const CycleBasis basis = cycle_space_basis(graph);

    OracleSolution sol;
    sol.method = "nullspace-descent";

    std::vector<double> z(basis.cycle_count(), 0.0);
    if (basis.cycle_count() == 0) {
        sol.flows = base;
        sol.cost = cost(base, p);
        return sol;
    }

    constexpr double kArmijo = 1e-4;
    double value = cost(base, p);
    std::vector<double> g = reduced_gradient(basis, gradient(base, p));
    std::vector<double> prev_z;
    std::vector<double> prev_g;
    double step = 1.0;

    int iter = 0;
    for (; iter < max_iters; ++iter) {
        sol.stationarity = inf_norm(g);
        if (sol.stationarity <= tol) {
            break;
        }

        // Barzilai-Borwein trial step, safeguarded by Armijo backtracking.
        if (!prev_z.empty()) {
            double sy = 0.0;
            double yy = 0.0;
            for (std::size_t c = 0; c < z.size(); ++c) {
                const double s = z[c] - prev_z[c];
                const double y = g[c] - prev_g[c];
                sy += s * y;
                yy += y * y;
            }
            step = (sy > 0.0 && yy > 0.0) ? std::clamp(sy / yy, 1e-12, 1e6) : 1.0;
        }

        double gg = 0.0;
        for (double gc : g) {
            gg += gc * gc;
        }

        prev_z = z;
        prev_g = g;

        bool moved = false;
        for (double alpha = step; alpha >= 1e-16; alpha *= 0.5) {
            std::vector<double> trial = prev_z;
            for (std::size_t c = 0; c < trial.size(); ++c) {
                trial[c] -= alpha * prev_g[c];
            }
            const FlowState flows = expand(base, basis, trial);
            const double trial_value = cost(flows, p);
            if (trial_value <= value - kArmijo * alpha * gg) {
                z = std::move(trial);
                value = trial_value;
                g = reduced_gradient(basis, gradient(flows, p));
                moved = true;
                break;
            }
        }
        if (!moved) {
            break;  // step underflow; gradient is numerically flat
        }
    }

    sol.flows = expand(base, basis, z);
    sol.cost = cost(sol.flows, p);
    sol.stationarity = inf_norm(reduced_gradient(basis, gradient(sol.flows, p)));
    sol.converged = sol.stationarity <= tol;
    return sol;
}

OracleSolution brute_force_small(const NetworkGraph& graph, const TrafficVector& traffic, double p,
                                 double grid) {
    validate_traffic(graph, traffic);
    if (!(grid > 0.0)) {
        throw std::invalid_argument("grid resolution must be positive");
    }
    const CycleBasis basis = cycle_space_basis(graph);
    const int dim = basis.cycle_count();
    if (dim > 2) {
        throw std::invalid_argument("brute_force_small handles cycle dimension <= 2, got " +
                                    std::to_string(dim));
    }

    const FlowState base = initial_feasible_flow(graph, traffic);
    OracleSolution sol;
    sol.method = "grid-search";

    if (dim == 0) {
        sol.flows = base;
        sol.cost = cost(base, p);
        return sol;
    }

    double bound = 0.0;
    for (double t : traffic.values) {
        bound += t;
    }
    bound = std::max(bound, grid);

    std::vector<double> best(dim, 0.0);
    double best_cost = cost(base, p);

    auto scan = [&](const std::vector<double>& center, double half_width, double resolution) {
        const int steps = static_cast<int>(std::ceil(half_width / resolution));
        std::vector<double> z(dim, 0.0);
        for (int i = -steps; i <= steps; ++i) {
            z[0] = center[0] + i * resolution;
            if (dim == 1) {
                const double c = cost(expand(base, basis, z), p);
                if (c < best_cost) {
                    best_cost = c;
                    best = z;
                }
            } else {
                for (int j = -steps; j <= steps; ++j) {
                    z[1] = center[1] + j * resolution;
                    const double c = cost(expand(base, basis, z), p);
                    if (c < best_cost) {
                        best_cost = c;
                        best = z;
                    }
                }
            }
        }
    };

    scan(std::vector<double>(dim, 0.0), bound, grid);
    // Local refinement around the best grid point.
    double resolution = grid;
    for (int round = 0; round < 4; ++round) {
        const double next_resolution = resolution / 10.0;
        scan(best, 2.0 * resolution, next_resolution);
        resolution = next_resolution;
    }

    sol.flows = expand(base, basis, best);
    sol.cost = best_cost;
    return sol;
}

}  // namespace pnormflow
