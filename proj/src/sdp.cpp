#include "motifcut/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "motifcut/triangle.hpp"

namespace motifcut {

namespace {

void require_symmetric(const Eigen::MatrixXd& x, const char* who, double tol = 1e-8) {
    if (x.rows() != x.cols()) throw ConfigError(std::string(who) + ": matrix not square");
    const double asym = (x - x.transpose()).cwiseAbs().maxCoeff();
    if (!(asym <= tol))
        throw ConfigError(std::string(who) + ": matrix not symmetric (residual " +
                          std::to_string(asym) + ")");
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& x) {
    return 0.5 * (x + x.transpose());
}

// Projection onto the spectral-floor cone {X : X >= (1/n) I}.
Eigen::MatrixXd clamp_spectrum(const Eigen::MatrixXd& x, double floor) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
    if (es.info() != Eigen::Success) throw NumericError("clamp_spectrum: eigensolver failed");
    Eigen::VectorXd ev = es.eigenvalues();
    bool touched = false;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) < floor) {
            ev(i) = floor;
            touched = true;
        }
    if (!touched) return x;
    return symmetrized(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose());
}

double min_eigenvalue(const Eigen::MatrixXd& x) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("min_eigenvalue: eigensolver failed");
    return es.eigenvalues().minCoeff();
}

}  // namespace

double DomainResiduals::worst() const {
    return std::max(std::max(symmetry, diagonal), std::max(floor, entry));
}

DomainResiduals domain_residuals(const Eigen::MatrixXd& x, int n) {
    if (n < 1) throw ConfigError("domain_residuals: vertex count must be positive");
    if (x.rows() != 2 * n || x.cols() != 2 * n)
        throw ConfigError("domain_residuals: expected a 2n x 2n matrix");
    DomainResiduals r;
    r.symmetry = (x - x.transpose()).cwiseAbs().maxCoeff();
    r.diagonal = (x.diagonal().array() - 1.0).abs().maxCoeff();
    r.floor = std::max(0.0, 1.0 / n - min_eigenvalue(symmetrized(x)));
    r.entry = std::max(0.0, x.cwiseAbs().maxCoeff() - 1.0);
    return r;
}

SdpPoint SdpPoint::checked(Eigen::MatrixXd x, int half_n, double tol) {
    const DomainResiduals r = domain_residuals(x, half_n);
    if (!(r.worst() <= tol)) {
        std::ostringstream msg;
        msg << "SdpPoint: outside domain (sym " << r.symmetry << ", diag " << r.diagonal
            << ", floor " << r.floor << ", entry " << r.entry << ", tol " << tol << ")";
        throw NumericError(msg.str());
    }
    return SdpPoint{half_n, std::move(x)};
}

Eigen::MatrixXd block_embed(const Eigen::MatrixXd& d) {
    require_symmetric(d, "block_embed", 1e-9);
    const Eigen::Index n = d.rows();
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    b.block(0, n, n, n) = d;
    b.block(n, 0, n, n) = d;
    return b;
}

double block_dot(const Eigen::MatrixXd& d, const Eigen::MatrixXd& x) {
    const Eigen::Index n = d.rows();
    if (x.rows() != 2 * n || x.cols() != 2 * n)
        throw ConfigError("block_dot: dimension mismatch");
    return 2.0 * d.cwiseProduct(x.block(0, n, n, n)).sum();
}

double log_det_pd(const Eigen::MatrixXd& x) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("log_det_pd: eigensolver failed");
    const Eigen::VectorXd& ev = es.eigenvalues();
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (!(ev(i) > 0.0)) throw NumericError("log_det_pd: matrix not positive definite");
        s += std::log(ev(i));
    }
    return s;
}

Eigen::MatrixXd project_domain(const Eigen::MatrixXd& x0, int half_n,
                               const ProjectOptions& opts) {
    if (half_n < 1) throw ConfigError("project_domain: vertex count must be positive");
    if (x0.rows() != 2 * half_n || x0.cols() != 2 * half_n)
        throw ConfigError("project_domain: expected a 2n x 2n matrix");
    require_symmetric(x0, "project_domain");
    const double floor = 1.0 / half_n;

    Eigen::MatrixXd x = symmetrized(x0);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(x.rows(), x.cols());
    Eigen::MatrixXd q = p;
    double gap = 0.0;
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        const Eigen::MatrixXd y = clamp_spectrum(x + p, floor);
        p = x + p - y;
        Eigen::MatrixXd z = y + q;
        z.diagonal().setConstant(1.0);
        q = y + q - z;
        gap = (y - z).norm();
        x = z;
        // The diagonal of x is exact; the floor can lag it by at most the
        // alternation gap, so the gap doubles as the floor residual bound.
        if (gap <= opts.tol) return x;
    }
    // The gap is only an upper bound on the floor residual; when the sweep
    // cap is hit, measure the residuals directly before giving up.
    const double diag_residual = (x.diagonal().array() - 1.0).abs().maxCoeff();
    const double floor_residual = std::max(0.0, floor - min_eigenvalue(x));
    if (diag_residual <= opts.tol && floor_residual <= opts.tol) return x;
    std::ostringstream msg;
    msg << "project_domain: no convergence in " << opts.max_sweeps << " sweeps (gap " << gap
        << ", diag residual " << diag_residual << ", floor residual " << floor_residual << ")";
    throw NumericError(msg.str());
}

SdpPoint inner_sdp_solve(const Eigen::MatrixXd& m, double lambda, const SdpSolveOptions& opts,
                         const SdpPoint* warm, SdpSolveInfo* info) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw ConfigError("inner_sdp_solve: lambda must be positive");
    require_symmetric(m, "inner_sdp_solve");
    if (m.rows() % 2 != 0) throw ConfigError("inner_sdp_solve: dimension must be even");
    const int half_n = static_cast<int>(m.rows() / 2);
    if (half_n < 1) throw ConfigError("inner_sdp_solve: empty matrix");
    if (warm && warm->x.rows() != m.rows())
        throw ConfigError("inner_sdp_solve: warm start dimension mismatch");

    Eigen::MatrixXd x = warm ? project_domain(warm->x, half_n)
                             : Eigen::MatrixXd::Identity(m.rows(), m.cols());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
    if (es.info() != Eigen::Success) throw NumericError("inner_sdp_solve: eigensolver failed");
    auto objective_from_eigs = [&](const Eigen::MatrixXd& xt,
                                   const Eigen::VectorXd& ev) -> double {
        double ld = 0.0;
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            if (!(ev(i) > 0.0)) return -std::numeric_limits<double>::infinity();
            ld += std::log(ev(i));
        }
        return m.cwiseProduct(xt).sum() + lambda * ld;
    };

    double g = objective_from_eigs(x, es.eigenvalues());
    // Inverse Lipschitz scale of the gradient: lambda * n^2 bounds the
    // log-det curvature on the domain, the Frobenius norm covers the linear
    // part.
    const double base_step =
        1.0 / (lambda * static_cast<double>(half_n) * half_n + m.norm() + 1e-12);
    double step = base_step;

    SdpSolveInfo local;
    SdpSolveInfo& out = info ? *info : local;
    out = SdpSolveInfo{};
    out.objective = g;

    int small_improvements = 0;
    for (int iter = 0; iter < opts.max_steps; ++iter) {
        const Eigen::MatrixXd xinv = symmetrized(es.eigenvectors() *
                                                 es.eigenvalues().cwiseInverse().asDiagonal() *
                                                 es.eigenvectors().transpose());
        const Eigen::MatrixXd grad = m + lambda * xinv;

        bool accepted = false;
        double s = std::min(step * 4.0, base_step * 1e8);
        while (s >= base_step * 1e-10) {
            // A speculative trial the projection cannot handle is rejected
            // like any non-improving trial; the iterate stays feasible.
            Eigen::MatrixXd xt;
            try {
                xt = project_domain(x + s * grad, half_n);
            } catch (const NumericError&) {
                s *= 0.5;
                continue;
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> est(xt);
            if (est.info() != Eigen::Success)
                throw NumericError("inner_sdp_solve: eigensolver failed");
            const double gt = objective_from_eigs(xt, est.eigenvalues());
            if (gt > g) {
                out.monotone = out.monotone && (gt >= g);
                out.last_improvement = gt - g;
                x = xt;
                es = est;
                g = gt;
                step = s;
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        out.steps = iter + 1;
        out.objective = g;
        if (!accepted) return SdpPoint::checked(std::move(x), half_n);  // line-search stall

        if (out.last_improvement <= 0.05 * opts.tol * (1.0 + std::abs(g))) {
            if (++small_improvements >= 5) return SdpPoint::checked(std::move(x), half_n);
        } else {
            small_improvements = 0;
        }
    }
    std::ostringstream msg;
    msg << "inner_sdp_solve: step cap " << opts.max_steps << " reached (objective " << g
        << ", last improvement " << out.last_improvement << ")";
    throw NumericError(msg.str());
}

Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& x) {
    require_symmetric(x, "matrix_sqrt_psd");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
    if (es.info() != Eigen::Success) throw NumericError("matrix_sqrt_psd: eigensolver failed");
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -1e-10)
            throw NumericError("matrix_sqrt_psd: eigenvalue " + std::to_string(ev(i)) +
                               " below the rounding-noise band");
        ev(i) = std::sqrt(std::max(ev(i), 0.0));
    }
    return symmetrized(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose());
}

SaddleContext make_saddle_context(int n, Eigen::MatrixXd target, Eigen::VectorXd ref_weights,
                                  Eigen::VectorXd caps, double lambda) {
    PairIndexer px(n);
    if (target.rows() != n || target.cols() != n)
        throw ConfigError("make_saddle_context: target adjacency must be n x n");
    if (ref_weights.size() != px.count() || caps.size() != px.count())
        throw ConfigError("make_saddle_context: vector length mismatch");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw ConfigError("make_saddle_context: lambda must be nonnegative");
    if ((caps.array() < 0.0).any()) throw ConfigError("make_saddle_context: negative cap");
    SaddleContext ctx;
    ctx.n = n;
    ctx.target = std::move(target);
    ctx.ref_weights = std::move(ref_weights);
    ctx.caps = std::move(caps);
    ctx.lambda = lambda;
    ctx.rho = 3.0 * wedge_sums(n, ctx.caps);
    return ctx;
}

double F_triangle(const Eigen::Ref<const Eigen::VectorXd>& w, const Eigen::MatrixXd& x,
                  const SaddleContext& ctx, double domain_tol) {
    if (w.size() != ctx.ref_weights.size()) throw ConfigError("F_triangle: weight length mismatch");
    const DomainResiduals r = domain_residuals(x, ctx.n);
    if (!(r.worst() <= domain_tol))
        throw NumericError("F_triangle: X outside domain (worst residual " +
                           std::to_string(r.worst()) + ")");
    const Eigen::MatrixXd diff = triangle_adjacency_raw(ctx.n, w) - ctx.target;
    const Eigen::VectorXd dev = w - ctx.ref_weights;
    return block_dot(diff, x) + ctx.lambda * log_det_pd(symmetrized(x)) +
           ctx.rho.dot(dev.cwiseProduct(dev));
}

}  // namespace motifcut
