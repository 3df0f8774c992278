#pragma once

#include <cstdint>

#include "motifcut/common.hpp"

namespace motifcut {

// Dimensionless tuning constants in front of the calibrated quantities.
// Defaults of 1 reproduce the worked values in the test suite.
struct TuningConstants {
    double c_t{1.0};
    double c_lambda{1.0};
    double c_eta{1.0};
    double c_deg_w{1.0};
    double c_deg_l3{1.0};

    bool operator==(const TuningConstants&) const = default;
};

// Full parameter block for one mechanism run.  Budget split: three
// preprocessing stages at epsilon/6 each plus L restarts at epsilon/(6L)
// consume 2*epsilon/3; the remaining third covers the iterate releases.
struct MechanismParams {
    double epsilon{0.0};
    double delta{0.0};
    double beta{0.0};
    double eps1{0.0};
    double eps2{0.0};
    double eps3{0.0};
    double eps4{0.0};
    int restarts{0};        // L
    std::int64_t steps{0};  // T, per restart
    double lambda{0.0};     // log-det regularizer weight
    double eta{0.0};        // mirror-descent step size
    double radius{0.0};     // R, Bregman radius bound
    double grad_bound{0.0};  // B, gradient second-moment bound
    TuningConstants constants;
};

// Derives every run parameter from the released preprocessing quantities.
//   L    = max(1, ceil(log3(3/beta)))
//   T    = max(1, round(c_t * w_total * (eps*u_tri + u_lam)
//                        / (n * ln(n/delta) * l3_tilde)))
//   lambda = c_lambda * l3_tilde / eps * sqrt(T)
//            * ln(max(T,2)/delta)^{3/2} * ln(3/beta)
//   eta  = c_eta * (R / B) * sqrt(2 / T)
// with R = sqrt(w_total * ln n) and B = (u_tri + u_lam * L / eps) * ln n.
// Requires n >= 2 and every continuous input positive, beta < 1, delta < 1.
MechanismParams calibrate(double epsilon, double delta, double beta, double w_total,
                          double u_triangle, double u_lambda, double l3_tilde, int n,
                          const TuningConstants& constants = {});

}  // namespace motifcut
