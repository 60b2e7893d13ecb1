#include "pnormflow/pnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pnormflow {

namespace {

void require_p(double p) {
    if (!(p > 1.0)) {
        throw std::invalid_argument("p must be > 1, got " + std::to_string(p));
    }
}

// |x|^e via exp/log; handles x == 0 for e > 0 and e == 0 exactly.
double abs_pow(double x, double e) {
    const double a = std::abs(x);
    if (e == 0.0) {
        return 1.0;
    }
    if (a == 0.0) {
        return 0.0;
    }
    return std::exp(e * std::log(a));
}

}  // namespace

double cost(const FlowState& flows, double p) {
    require_p(p);
    double total = 0.0;
    for (double load : flows.loads) {
        total += abs_pow(load, p);
    }
    return total;
}

std::vector<double> gradient(const FlowState& flows, double p) {
    require_p(p);
    std::vector<double> grad(flows.loads.size());
    for (std::size_t m = 0; m < flows.loads.size(); ++m) {
        const double load = flows.loads[m];
        const double sign = (load > 0.0) - (load < 0.0);
        grad[m] = p * sign * abs_pow(load, p - 1.0);
    }
    return grad;
}

std::vector<double> hessian_diag(const FlowState& flows, double p) {
    require_p(p);
    std::vector<double> hess(flows.loads.size());
    for (std::size_t m = 0; m < flows.loads.size(); ++m) {
        const double a = std::abs(flows.loads[m]);
        if (a == 0.0 && p < 2.0) {
            hess[m] = std::numeric_limits<double>::infinity();
        } else {
            hess[m] = p * (p - 1.0) * abs_pow(a, p - 2.0);
        }
    }
    return hess;
}

std::vector<double> edge_weight_logs(const FlowState& flows, double p, double eps) {
    require_p(p);
    if (!(eps > 0.0)) {
        throw std::invalid_argument("regularization eps must be > 0");
    }
    const double log_prefactor = std::log(0.5 * p * (p - 1.0));
    std::vector<double> logs(flows.loads.size());
    for (std::size_t m = 0; m < flows.loads.size(); ++m) {
        const double a = std::max(std::abs(flows.loads[m]), eps);
        logs[m] = log_prefactor + (p - 2.0) * std::log(a);
    }
    return logs;
}

std::vector<double> edge_weights(const FlowState& flows, double p, double eps) {
    std::vector<double> weights = edge_weight_logs(flows, p, eps);
    for (double& w : weights) {
        w = std::clamp(std::exp(w), 1e-300, 1e300);
    }
    return weights;
}

double regularization_floor(const FlowState& flows) {
    double max_abs = 0.0;
    for (double load : flows.loads) {
        max_abs = std::max(max_abs, std::abs(load));
    }
    return 1e-6 * (1.0 + max_abs);
}

std::vector<double> subproblem_rhs(const TrafficVector& traffic, double p) {
    require_p(p);
    std::vector<double> rhs(traffic.values.size());
    for (std::size_t n = 0; n < traffic.values.size(); ++n) {
        rhs[n] = traffic.values[n] / (p - 1.0);
    }
    return rhs;
}

double model_cost(const std::vector<double>& correction, const std::vector<double>& grad,
                  const std::vector<double>& hess) {
    if (correction.size() != grad.size() || correction.size() != hess.size()) {
        throw std::invalid_argument("model_cost: mismatched vector lengths");
    }
    double total = 0.0;
    for (std::size_t m = 0; m < correction.size(); ++m) {
        total += 0.5 * hess[m] * correction[m] * correction[m] + grad[m] * correction[m];
    }
    return total;
}

}  // namespace pnormflow
