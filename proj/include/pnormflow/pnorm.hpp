#pragma once

#include <vector>

#include "pnormflow/graph.hpp"

namespace pnormflow {

// Congestion cost and its local quadratic model. All functions require p > 1
// and treat loads sign-aware: the cost is sum |I_m|^p, the gradient is
// p*sign(I_m)*|I_m|^(p-1), and powers of non-integer p are evaluated through
// exp/log of absolute values.

// sum_m |I_m|^p
double cost(const FlowState& flows, double p);

// S_m = p * sign(I_m) * |I_m|^(p-1); sign(0) = 0.
std::vector<double> gradient(const FlowState& flows, double p);

// Q_m = p*(p-1) * |I_m|^(p-2), unregularized. Infinite at I_m = 0 for p < 2.
std::vector<double> hessian_diag(const FlowState& flows, double p);

// log r_m with r_m = (1/2)*p*(p-1) * max(|I_m|, eps)^(p-2). Kept in log form
// so the solver can rescale weights without intermediate under/overflow.
std::vector<double> edge_weight_logs(const FlowState& flows, double p, double eps);

// r_m = exp(edge_weight_logs), clamped to the positive normal double range.
std::vector<double> edge_weights(const FlowState& flows, double p, double eps);

// Default clamp floor used by the solver: 1e-6 * (1 + max_m |I_m|).
double regularization_floor(const FlowState& flows);

// b_n = T_n / (p-1), the right-hand side of the completed-square subproblem.
std::vector<double> subproblem_rhs(const TrafficVector& traffic, double p);

// (1/2) sum Q_m i_m^2 + sum S_m i_m: the model's predicted cost change for a
// correction, excluding the constant term.
double model_cost(const std::vector<double>& correction, const std::vector<double>& grad,
                  const std::vector<double>& hess);

}  // namespace pnormflow
