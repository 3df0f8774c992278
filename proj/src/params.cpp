#include "motifcut/params.hpp"

#include <algorithm>
#include <cmath>

namespace motifcut {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError(std::string("calibrate: ") + name + " must be positive and finite");
}

}  // namespace

MechanismParams calibrate(double epsilon, double delta, double beta, double w_total,
                          double u_triangle, double u_lambda, double l3_tilde, int n,
                          const TuningConstants& constants) {
    require_positive(epsilon, "epsilon");
    require_positive(delta, "delta");
    require_positive(beta, "beta");
    require_positive(w_total, "w_total");
    require_positive(u_triangle, "u_triangle");
    require_positive(u_lambda, "u_lambda");
    require_positive(l3_tilde, "l3_tilde");
    require_positive(constants.c_t, "c_t");
    require_positive(constants.c_lambda, "c_lambda");
    require_positive(constants.c_eta, "c_eta");
    if (beta >= 1.0) throw ConfigError("calibrate: beta must lie in (0, 1)");
    if (delta >= 1.0) throw ConfigError("calibrate: delta must lie in (0, 1)");
    if (n < 2) throw ConfigError("calibrate: need at least two vertices");

    MechanismParams p;
    p.epsilon = epsilon;
    p.delta = delta;
    p.beta = beta;
    p.constants = constants;
    p.eps1 = p.eps2 = p.eps3 = epsilon / 6.0;

    // Integer boundary guard: log3(3/beta) hitting an exact integer must not
    // round up from floating-point dust.
    const double l_exact = std::log(3.0 / beta) / std::log(3.0);
    p.restarts = std::max(1, static_cast<int>(std::ceil(l_exact - 1e-12)));
    p.eps4 = epsilon / (6.0 * p.restarts);

    const double t_raw = constants.c_t * w_total * (epsilon * u_triangle + u_lambda) /
                         (static_cast<double>(n) * std::log(static_cast<double>(n) / delta) *
                          l3_tilde);
    if (!std::isfinite(t_raw)) throw NumericError("calibrate: step count overflowed");
    p.steps = std::max<std::int64_t>(1, std::llround(t_raw));

    const double log_td = std::log(static_cast<double>(std::max<std::int64_t>(p.steps, 2)) / delta);
    p.lambda = constants.c_lambda * l3_tilde / epsilon * std::sqrt(static_cast<double>(p.steps)) *
               std::pow(log_td, 1.5) * std::log(3.0 / beta);

    p.radius = std::sqrt(w_total * std::log(static_cast<double>(n)));
    p.grad_bound = (u_triangle + u_lambda * static_cast<double>(p.restarts) / epsilon) *
                   std::log(static_cast<double>(n));
    p.eta = constants.c_eta * (p.radius / p.grad_bound) *
            std::sqrt(2.0 / static_cast<double>(p.steps));

    if (!(p.lambda > 0.0) || !std::isfinite(p.lambda) || !(p.eta > 0.0) || !std::isfinite(p.eta))
        throw NumericError("calibrate: derived parameters are not positive finite");
    return p;
}

}  // namespace motifcut
