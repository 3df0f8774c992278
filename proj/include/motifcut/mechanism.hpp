#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "motifcut/noise.hpp"
#include "motifcut/params.hpp"
#include "motifcut/sdp.hpp"
#include "motifcut/weighted_graph.hpp"

namespace motifcut {

// Laplace draws consumed by preprocessing, recorded for replay and available
// for injection in tests.
struct PreprocessNoise {
    double w_draw{0.0};
    Eigen::VectorXd cap_draws;
    double l3_draw{0.0};
};

// Released quantities (w_total, caps, l3_tilde, the cap bounds) plus the
// private intermediates the solver loop needs (w_bar, l3_hat).  Only the
// released fields may reach a report.
struct PreprocessedInstance {
    int n{0};
    double w_total{0.0};
    Eigen::VectorXd w_bar;
    Eigen::VectorXd caps;
    double l3_hat{0.0};
    double l3_tilde{0.0};
    double u_triangle{0.0};
    double u_lambda{0.0};
    bool degenerate{false};
    std::string degenerate_reason;
    bool caps_clamped{false};
    PreprocessNoise noise;
};

// Noisy scaling-and-capping stage.  The released total w_total is the input
// total plus Laplace(1/eps1) plus ln(3/beta)/eps1, clamped positive; w_bar
// rescales the input to that total; each cap adds Laplace(1/eps2), the union
// offset ln(6 n^2 / beta)/eps2 and the uniform floor w_total/C(n,2); the
// sensitivity proxy l3_tilde adds cap-scaled Laplace(1/eps3) noise.  Caps are
// clamped so the uniform start and w_bar stay feasible (flagged when a draw
// forces it).  Degeneracy follows the threshold pair on the raw total and
// l3_hat at budget 6*eps1, and any input with fewer than three vertices.
PreprocessedInstance preprocess(const WeightedGraph& g, double eps1, double eps2, double eps3,
                                double beta, NoiseStream& stream,
                                const TuningConstants& constants = {},
                                const PreprocessNoise* injected = nullptr);

// Normalized multiplicative-weights scores exp(ln w - eta * g), shifted so
// the largest is 1; the projection is scale-invariant in these.
Eigen::VectorXd md_scores(const Eigen::Ref<const Eigen::VectorXd>& w,
                          const Eigen::Ref<const Eigen::VectorXd>& g, double eta);

// Bregman projection of the multiplicative-weights proposal onto the capped
// simplex {0 < w <= u, sum w = w_total}: sort by score/cap, then water-fill
// the budget left to right, capping as bindings occur.
Eigen::VectorXd md_update(const Eigen::Ref<const Eigen::VectorXd>& w,
                          const Eigen::Ref<const Eigen::VectorXd>& g, double w_total,
                          const Eigen::Ref<const Eigen::VectorXd>& u, double eta);

// One-sample estimator of the saddle gradient from a released sketch:
//   g_e = (X^{1/2} zeta)(X^{1/2} zeta)' . block(D_e) + 6 q_e (w_e - wt_e)
// with q the wedge sums of the caps.  Unbiased over (zeta, noise in wt).
Eigen::VectorXd estimate_gradient(const Eigen::Ref<const Eigen::VectorXd>& w, const SdpPoint& x,
                                  const Eigen::Ref<const Eigen::VectorXd>& zeta,
                                  const Eigen::Ref<const Eigen::VectorXd>& w_tilde,
                                  const Eigen::Ref<const Eigen::VectorXd>& u);

// Same estimator, taking the already-computed sketch v = X^{1/2} zeta and
// precomputed wedge sums; the inner loop uses this form.
Eigen::VectorXd gradient_from_released(int n, const Eigen::Ref<const Eigen::VectorXd>& w,
                                       const Eigen::Ref<const Eigen::VectorXd>& v,
                                       const Eigen::Ref<const Eigen::VectorXd>& w_tilde,
                                       const Eigen::Ref<const Eigen::VectorXd>& wedge);

struct StepSummary {
    int t{0};
    double sdp_value{0.0};
    double quad_value{0.0};
    double f_proxy{0.0};
    int solver_steps{0};
};

struct RestartSummary {
    int index{0};
    double candidate_value{0.0};
    double seconds{0.0};
    std::vector<StepSummary> steps;
};

struct MechanismReport {
    std::uint64_t seed{0};
    int n{0};
    MechanismParams params;
    bool degenerate{false};
    std::string degenerate_reason;
    double w_total{0.0};
    double l3_tilde{0.0};
    double u_triangle{0.0};
    double u_lambda{0.0};
    bool caps_clamped{false};
    std::vector<double> caps;
    std::vector<RestartSummary> restarts;
    int chosen_restart{-1};
    std::vector<double> final_weights;
    double total_seconds{0.0};
};

struct MechanismResult {
    WeightedGraph output;
    MechanismReport report;
};

struct MechanismOptions {
    SdpSolveOptions solver;
    bool record_steps{true};
};

// Full private release.  Preprocess, calibrate, then L restarts of T noisy
// mirror-descent steps; each restart averages its iterates into a candidate,
// and the winner minimizes the saddle value against a shared post-processed
// reference (the mean of the per-restart noisy anchors).  Degenerate inputs
// release the empty graph.
MechanismResult run_mechanism(const WeightedGraph& g, double epsilon, double delta, double beta,
                              std::uint64_t seed, const TuningConstants& constants = {},
                              const MechanismOptions& options = {});

// Baseline: independent Laplace(1/eps) noise per pair.  Negative results are
// kept; clip_negative zeroes them as explicit post-processing.
WeightedGraph randomized_response(const WeightedGraph& g, double epsilon, NoiseStream& stream,
                                  const Eigen::VectorXd* injected = nullptr);

WeightedGraph clip_negative(const WeightedGraph& g);

}  // namespace motifcut
