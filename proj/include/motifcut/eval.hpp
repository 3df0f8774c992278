#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "motifcut/sdp.hpp"
#include "motifcut/weighted_graph.hpp"

namespace motifcut {

// Cut-sweep mode: exhaustive enumerates every bipartition (capped at n = 22);
// sampled evaluates exactly `samples` distinct uniform bipartitions.
struct CutMode {
    enum class Kind { exhaustive, sampled };
    Kind kind{Kind::exhaustive};
    std::uint64_t samples{100000};
    std::uint64_t seed{0};

    static CutMode exhaustive() { return CutMode{}; }
    static CutMode sampled(std::uint64_t k, std::uint64_t seed) {
        return CutMode{Kind::sampled, k, seed};
    }
};

struct CutErrorResult {
    double max_error{0.0};
    std::vector<int> argmax_side;  // the S side achieving the max
    std::uint64_t cuts_evaluated{0};
};

// Largest absolute triangle-cut difference between two graphs on the same
// vertex set, over bipartitions.  The exhaustive sweep walks a Gray code over
// subsets containing vertex 0 and updates the cut value incrementally,
// O(2^(n-1) * n) total.  Ties resolve to the earliest subset in sweep order.
CutErrorResult max_cut_error(const WeightedGraph& g1, const WeightedGraph& g2,
                             const CutMode& mode = {});

// Reference implementation recomputing every bipartition from scratch;
// kept independent of the Gray-code walk to cross-check it.  n <= 20.
CutErrorResult max_cut_error_naive(const WeightedGraph& g1, const WeightedGraph& g2);

// Capped-simplex Bregman projection by bisection on the dual variable mu,
// with the per-coordinate closed form w_e = min(y_e * exp(-mu), u_e).
// Independent of the sort-and-sweep production path.  Dual residual
// |sum w - w_total| driven to 1e-12 * max(1, w_total).
Eigen::VectorXd brute_force_md_oracle(const Eigen::Ref<const Eigen::VectorXd>& y, double w_total,
                                      const Eigen::Ref<const Eigen::VectorXd>& u);

struct KktReport {
    bool ok{false};
    double mu{0.0};
    double worst_multiplier{0.0};     // most negative lambda_e (should be >= -tol)
    double worst_slack{0.0};          // max |lambda_e * (w_e - u_e)|
    double budget_residual{0.0};      // |sum w - w_total| / max(1, w_total)
    double worst_cap_violation{0.0};  // max (w_e - u_e)
    std::string detail;
};

// Checks the optimality system of the capped projection: with
// lambda_e = ln(y_e / w_e) - mu and mu read off a maximally slack coordinate,
// requires lambda_e >= -tol, |lambda_e * (w_e - u_e)| <= tol (|lambda_e| <= tol
// for uncapped infinite caps), budget and cap feasibility within tol.
KktReport kkt_check(const Eigen::Ref<const Eigen::VectorXd>& w,
                    const Eigen::Ref<const Eigen::VectorXd>& y, double w_total,
                    const Eigen::Ref<const Eigen::VectorXd>& u, double tol);

// Danskin gradient of the saddle value at w: solve the inner problem to
// tol_sdp, then read off block(D_e) . X* + 2 * rho_e * (w_e - ref_e).
Eigen::VectorXd exact_gradient(const Eigen::Ref<const Eigen::VectorXd>& w,
                               const SaddleContext& ctx, double tol_sdp = 1e-8);

// Saddle value f(w) = max_X F(w, X), via the production inner solver.  The
// argmax is returned through out_x when requested.
double saddle_value(const Eigen::Ref<const Eigen::VectorXd>& w, const SaddleContext& ctx,
                    const SdpSolveOptions& opts = {}, const SdpPoint* warm = nullptr,
                    SdpPoint* out_x = nullptr);

// Reference maximizer for the two-vertex inner problem (4 x 4 matrices):
// annealed random-direction hill climbing with gradient hints, restarted
// from several feasible starts, feasibility by plain alternating
// projection.  Shares no loop logic with inner_sdp_solve.
double sdp_oracle_small(const Eigen::MatrixXd& m, double lambda);

}  // namespace motifcut
