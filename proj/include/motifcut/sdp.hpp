#pragma once

#include <Eigen/Dense>
#include <optional>

#include "motifcut/common.hpp"

namespace motifcut {

// Feasible region for the inner maximization, over symmetric 2n x 2n
// matrices: unit diagonal and eigenvalues at least 1/n.  Unit diagonal plus
// positive semidefiniteness already force entries into [-1, 1] and
// eigenvalues to at most 2n (the trace).
struct DomainResiduals {
    double symmetry{0.0};
    double diagonal{0.0};
    double floor{0.0};
    double entry{0.0};

    double worst() const;
};

DomainResiduals domain_residuals(const Eigen::MatrixXd& x, int n);

// Validated member of the domain; half_n is the vertex count n, the matrix
// is 2n x 2n.
struct SdpPoint {
    int half_n{0};
    Eigen::MatrixXd x;

    static SdpPoint checked(Eigen::MatrixXd x, int half_n, double tol = 2e-9);
};

// [[0, D], [D, 0]] for symmetric D; eigenvalues come in +/- pairs.
Eigen::MatrixXd block_embed(const Eigen::MatrixXd& d);

// Inner product of a block-embedded symmetric matrix with a symmetric X,
// using only the top-right n x n block of X.
double block_dot(const Eigen::MatrixXd& d, const Eigen::MatrixXd& x);

// log det of a positive definite symmetric matrix, by eigendecomposition.
double log_det_pd(const Eigen::MatrixXd& x);

struct ProjectOptions {
    double tol{1e-9};
    int max_sweeps{500};
};

// Frobenius projection onto the domain by Dykstra alternation between the
// unit-diagonal affine set and the spectral-floor cone.  Ends on the
// diagonal-set step, so the returned diagonal is exact and the floor residual
// is bounded by the converged alternation gap.  Throws NumericError if the
// sweep cap is reached with either residual still above tol, with both
// residuals in the message.
Eigen::MatrixXd project_domain(const Eigen::MatrixXd& x, int half_n,
                               const ProjectOptions& opts = {});

struct SdpSolveOptions {
    double tol{1e-6};  // relative objective tolerance
    int max_steps{2000};
};

struct SdpSolveInfo {
    int steps{0};
    double objective{0.0};
    bool monotone{true};
    double last_improvement{0.0};
};

// Maximizes M . X + lambda * log det X over the domain by projected gradient
// ascent with backtracking line search.  Warm start optional; ascent is
// monotone across accepted steps.  Stops on a line-search stall or an
// improvement plateau scaled by tol; hitting the step cap first is an error.
SdpPoint inner_sdp_solve(const Eigen::MatrixXd& m, double lambda,
                         const SdpSolveOptions& opts = {}, const SdpPoint* warm = nullptr,
                         SdpSolveInfo* info = nullptr);

// Symmetric square root of a positive semidefinite matrix.  Eigenvalues in
// (-1e-10, 0) are treated as rounding noise and clamped; anything lower is an
// error.
Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& x);

// Everything fixed in the saddle objective besides (w, X): the reference
// motif adjacency, the quadratic anchor weights, the caps, the log-det weight
// and the regularizer coefficients rho = 3 * wedge_sums(caps).
struct SaddleContext {
    int n{0};
    Eigen::MatrixXd target;
    Eigen::VectorXd ref_weights;
    Eigen::VectorXd caps;
    double lambda{0.0};
    Eigen::VectorXd rho;
};

SaddleContext make_saddle_context(int n, Eigen::MatrixXd target, Eigen::VectorXd ref_weights,
                                  Eigen::VectorXd caps, double lambda);

// Saddle objective
//   F(w, X) = [[0, A(w) - target], [A(w) - target, 0]] . X
//             + lambda * log det X + sum_e rho_e (w_e - ref_e)^2.
// X must sit in the domain within tol.
double F_triangle(const Eigen::Ref<const Eigen::VectorXd>& w, const Eigen::MatrixXd& x,
                  const SaddleContext& ctx, double domain_tol = 1e-6);

}  // namespace motifcut
