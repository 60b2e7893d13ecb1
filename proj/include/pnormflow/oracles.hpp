#pragma once

#include <string>
#include <vector>

#include "pnormflow/graph.hpp"

namespace pnormflow {

// Independent ground-truth solvers used to validate the distributed solver.
// None of them share code with the potential/Jacobi path.

// Fundamental cycle basis of the conservation null space: one cycle per
// non-tree edge of a BFS spanning tree, M - N + 1 cycles in total. Each cycle
// lists (edge index, +-1) coefficients; every basis vector z satisfies C*z = 0.
struct CycleBasis {
    std::vector<std::vector<std::pair<int, int>>> cycles;
    int cycle_count() const { return static_cast<int>(cycles.size()); }
};

CycleBasis cycle_space_basis(const NetworkGraph& graph);

struct OracleSolution {
    FlowState flows;
    double cost = 0.0;
    std::string method;
    bool converged = true;
    double stationarity = 0.0;  // final reduced-gradient max-norm (descent oracle only)
};

// Exact p=2 minimizer: solves the unit-weight reduced Laplacian L*u = T by
// dense elimination with partial pivoting, then I_m = u_r - u_s.
OracleSolution oracle_p2(const NetworkGraph& graph, const TrafficVector& traffic);

// General p > 1: parameterizes the feasible set as I0 + B*z over the cycle
// basis and minimizes the reduced objective by gradient descent with
// backtracking until the reduced gradient max-norm is <= tol.
OracleSolution oracle_general_p(const NetworkGraph& graph, const TrafficVector& traffic, double p,
                                double tol, int max_iters = 200000);

// Sanity oracle for tiny instances (cycle dimension <= 2): grid search over
// the cycle coordinates on [-|T|_1, |T|_1] at the given resolution, followed
// by local refinement. Throws if the cycle dimension is larger than 2.
OracleSolution brute_force_small(const NetworkGraph& graph, const TrafficVector& traffic, double p,
                                 double grid);

}  // namespace pnormflow
