#include "motifcut/mechanism.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "motifcut/eval.hpp"
#include "motifcut/triangle.hpp"

namespace motifcut {

namespace {

constexpr double kWeightFloor = 1e-300;
constexpr double kL3Floor = 1e-12;

void require_rate(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError(std::string("preprocess: ") + name + " must be positive and finite");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

PreprocessedInstance preprocess(const WeightedGraph& g, double eps1, double eps2, double eps3,
                                double beta, NoiseStream& stream,
                                const TuningConstants& constants,
                                const PreprocessNoise* injected) {
    require_rate(eps1, "eps1");
    require_rate(eps2, "eps2");
    require_rate(eps3, "eps3");
    if (!(beta > 0.0) || !(beta < 1.0)) throw ConfigError("preprocess: beta must lie in (0, 1)");
    validate_nonnegative(g, "preprocess");

    PreprocessedInstance out;
    out.n = g.n;
    const PairIndexer px(g.n);
    const std::int64_t m = px.count();

    if (g.n < 3) {
        out.degenerate = true;
        out.degenerate_reason = "fewer than three vertices";
        out.w_bar = Eigen::VectorXd::Zero(m);
        out.caps = Eigen::VectorXd::Zero(m);
        out.noise.cap_draws = Eigen::VectorXd::Zero(m);
        return out;
    }
    if (injected && injected->cap_draws.size() != m)
        throw ConfigError("preprocess: injected cap draw count mismatch");

    const double sum_w = g.total_weight();
    const double w_max = g.max_weight();
    const double epsilon = 6.0 * eps1;  // full budget, for the degeneracy thresholds

    out.noise.w_draw = injected ? injected->w_draw : stream.laplace(1.0 / eps1);
    double w_total = sum_w + out.noise.w_draw + std::log(3.0 / beta) / eps1;
    if (w_total <= 0.0) w_total = sum_w * 1e-9 + std::numeric_limits<double>::min();
    out.w_total = w_total;

    out.w_bar = sum_w > 0.0 ? (w_total / sum_w) * g.weights()
                            : Eigen::VectorXd::Zero(m).eval();

    const double cap_offset = std::log(6.0 * g.n * g.n / beta) / eps2;
    const double uniform_floor = w_total / static_cast<double>(m);
    out.caps.resize(m);
    out.noise.cap_draws.resize(m);
    for (std::int64_t k = 0; k < m; ++k) {
        const double draw = injected ? injected->cap_draws(k) : stream.laplace(1.0 / eps2);
        out.noise.cap_draws(k) = draw;
        double cap = out.w_bar(k) + draw + cap_offset + uniform_floor;
        // The uniform start needs cap >= w_total/C(n,2) and w_bar must stay
        // feasible; a left-tail draw can break either, so clamp and flag.
        if (cap < uniform_floor) {
            cap = uniform_floor;
            out.caps_clamped = true;
        }
        if (cap < out.w_bar(k)) {
            cap = out.w_bar(k) + uniform_floor;
            out.caps_clamped = true;
        }
        out.caps(k) = cap;
    }

    out.l3_hat = local_sensitivity_l3(g);
    const double u_max = out.caps.maxCoeff();
    out.noise.l3_draw = injected ? injected->l3_draw : stream.laplace(1.0 / eps3);
    out.l3_tilde = out.l3_hat +
                   u_max * (out.noise.l3_draw + std::log(6.0 * g.n * g.n / beta) / eps3);
    out.l3_tilde = std::max(out.l3_tilde, kL3Floor);

    const UQuantities uq = u_quantities(g.n, out.caps);
    out.u_triangle = uq.u_triangle;
    out.u_lambda = uq.u_lambda;

    const double w_threshold = constants.c_deg_w * std::log(1.0 / beta) / epsilon;
    const double l3_threshold = constants.c_deg_l3 * w_max *
                                std::pow(std::log(g.n / beta), 2) / (epsilon * epsilon);
    if (sum_w < w_threshold) {
        out.degenerate = true;
        out.degenerate_reason = "total weight below the release threshold";
    } else if (out.l3_hat < l3_threshold) {
        out.degenerate = true;
        out.degenerate_reason = "triangle sensitivity below the release threshold";
    }
    return out;
}

Eigen::VectorXd md_scores(const Eigen::Ref<const Eigen::VectorXd>& w,
                          const Eigen::Ref<const Eigen::VectorXd>& g, double eta) {
    if (w.size() != g.size()) throw ConfigError("md_scores: length mismatch");
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw ConfigError("md_scores: step size must be positive and finite");
    Eigen::VectorXd log_y(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (!(w(i) > 0.0)) throw ConfigError("md_scores: weights must be positive");
        if (!std::isfinite(g(i))) throw NumericError("md_scores: non-finite gradient entry");
        log_y(i) = std::log(w(i)) - eta * g(i);
    }
    // Shift so the largest score is exactly 1; every downstream use is a
    // ratio, so the shift cancels and exp never overflows.
    const double shift = log_y.maxCoeff();
    return (log_y.array() - shift).exp();
}

Eigen::VectorXd md_update(const Eigen::Ref<const Eigen::VectorXd>& w,
                          const Eigen::Ref<const Eigen::VectorXd>& g, double w_total,
                          const Eigen::Ref<const Eigen::VectorXd>& u, double eta) {
    const Eigen::Index m = w.size();
    if (g.size() != m || u.size() != m) throw ConfigError("md_update: length mismatch");
    if (!(w_total > 0.0)) throw ConfigError("md_update: budget must be positive");
    if (u.sum() < w_total) throw ConfigError("md_update: caps sum below the budget");
    for (Eigen::Index i = 0; i < m; ++i)
        if (!(u(i) > 0.0)) throw ConfigError("md_update: nonpositive cap");

    const Eigen::VectorXd y = md_scores(w, g, eta);

    std::vector<Eigen::Index> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const double ra = y(a) / u(a);
        const double rb = y(b) / u(b);
        if (ra != rb) return ra > rb;
        return a < b;
    });

    // Suffix sums of the sorted scores; S_i is the score mass from position i
    // on, so the uncapped share at position i is budget_left * y_i / S_i.
    Eigen::VectorXd suffix(m + 1);
    suffix(m) = 0.0;
    for (Eigen::Index i = m - 1; i >= 0; --i) suffix(i) = suffix(i + 1) + y(order[i]);

    Eigen::VectorXd out(m);
    double budget = w_total;
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index e = order[i];
        const double share = budget * y(e) / suffix(i);
        const double v = std::max(std::min(share, u(e)), kWeightFloor);
        out(e) = v;
        budget -= v;
    }
    return out;
}

Eigen::VectorXd gradient_from_released(int n, const Eigen::Ref<const Eigen::VectorXd>& w,
                                       const Eigen::Ref<const Eigen::VectorXd>& v,
                                       const Eigen::Ref<const Eigen::VectorXd>& w_tilde,
                                       const Eigen::Ref<const Eigen::VectorXd>& wedge) {
    const PairIndexer px(n);
    const std::int64_t m = px.count();
    if (w.size() != m || w_tilde.size() != m || wedge.size() != m)
        throw ConfigError("gradient: weight length mismatch");
    if (v.size() != 2 * n) throw ConfigError("gradient: sketch must have length 2n");
    const Eigen::VectorXd a = v.head(n);
    const Eigen::VectorXd b = v.tail(n);
    const Eigen::MatrixXd wm = weight_matrix(n, w);

    Eigen::VectorXd g(m);
    std::int64_t k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++k) {
            // The derivative matrix for pair (i, j) has wedge products
            // d_s = w_is * w_sj in rows i and j and their sum at (i, j), so
            // the sketch quadratic form reduces to three O(n) sums.
            double c = 0.0, p = 0.0, q = 0.0;
            for (int s = 0; s < n; ++s) {
                if (s == i || s == j) continue;
                const double d = wm(i, s) * wm(s, j);
                c += d;
                p += d * b(s);
                q += d * a(s);
            }
            const double bilinear =
                2.0 * (c * (a(i) * b(j) + a(j) * b(i)) + (a(i) + a(j)) * p + (b(i) + b(j)) * q);
            g(k) = bilinear + 6.0 * wedge(k) * (w(k) - w_tilde(k));
        }
    return g;
}

Eigen::VectorXd estimate_gradient(const Eigen::Ref<const Eigen::VectorXd>& w, const SdpPoint& x,
                                  const Eigen::Ref<const Eigen::VectorXd>& zeta,
                                  const Eigen::Ref<const Eigen::VectorXd>& w_tilde,
                                  const Eigen::Ref<const Eigen::VectorXd>& u) {
    if (zeta.size() != 2 * x.half_n) throw ConfigError("estimate_gradient: zeta must have length 2n");
    const Eigen::VectorXd v = matrix_sqrt_psd(x.x) * zeta;
    return gradient_from_released(x.half_n, w, v, w_tilde, wedge_sums(x.half_n, u));
}

MechanismResult run_mechanism(const WeightedGraph& g, double epsilon, double delta, double beta,
                              std::uint64_t seed, const TuningConstants& constants,
                              const MechanismOptions& options) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw ConfigError("run_mechanism: epsilon must be positive");
    if (!(delta > 0.0) || !(delta < 1.0)) throw ConfigError("run_mechanism: delta must lie in (0, 1)");
    if (!(beta > 0.0) || !(beta < 1.0)) throw ConfigError("run_mechanism: beta must lie in (0, 1)");
    validate_nonnegative(g, "run_mechanism");

    const auto t_start = std::chrono::steady_clock::now();
    NoiseStream stream(seed);

    MechanismResult res;
    res.report.seed = seed;
    res.report.n = g.n;
    res.report.params.epsilon = epsilon;
    res.report.params.delta = delta;
    res.report.params.beta = beta;
    res.report.params.constants = constants;

    const PreprocessedInstance pre =
        preprocess(g, epsilon / 6.0, epsilon / 6.0, epsilon / 6.0, beta, stream, constants);
    res.report.degenerate = pre.degenerate;
    res.report.degenerate_reason = pre.degenerate_reason;
    res.report.w_total = pre.w_total;
    res.report.l3_tilde = pre.l3_tilde;
    res.report.u_triangle = pre.u_triangle;
    res.report.u_lambda = pre.u_lambda;
    res.report.caps_clamped = pre.caps_clamped;
    res.report.caps.assign(pre.caps.data(), pre.caps.data() + pre.caps.size());

    if (pre.degenerate) {
        res.output = WeightedGraph(g.n);
        res.report.final_weights.assign(res.output.w.begin(), res.output.w.end());
        res.report.total_seconds = seconds_since(t_start);
        return res;
    }

    const MechanismParams params = calibrate(epsilon, delta, beta, pre.w_total, pre.u_triangle,
                                             pre.u_lambda, pre.l3_tilde, g.n, constants);
    res.report.params = params;

    const PairIndexer px(g.n);
    const std::int64_t m = px.count();
    const Eigen::MatrixXd target = triangle_adjacency_raw(g.n, pre.w_bar);
    const Eigen::VectorXd wedge = wedge_sums(g.n, pre.caps);
    const double budget_tol = 1e-9 * std::max(1.0, pre.w_total);

    std::vector<Eigen::VectorXd> candidates;
    std::vector<Eigen::VectorXd> anchors;
    for (int l = 0; l < params.restarts; ++l) {
        const auto t_restart = std::chrono::steady_clock::now();
        RestartSummary rs;
        rs.index = l;

        Eigen::VectorXd w = Eigen::VectorXd::Constant(m, pre.w_total / static_cast<double>(m));
        Eigen::VectorXd w_tilde(m);
        for (std::int64_t k = 0; k < m; ++k)
            w_tilde(k) = pre.w_bar(k) + stream.laplace(1.0 / params.eps4);
        anchors.push_back(w_tilde);

        Eigen::VectorXd avg = Eigen::VectorXd::Zero(m);
        SdpPoint x;
        bool have_warm = false;
        for (std::int64_t t = 0; t < params.steps; ++t) {
            avg += w;
            const Eigen::MatrixXd mat =
                block_embed(triangle_adjacency_raw(g.n, w) - target);
            SdpSolveInfo info;
            x = inner_sdp_solve(mat, params.lambda, options.solver, have_warm ? &x : nullptr,
                                &info);
            have_warm = true;

            const Eigen::VectorXd zeta = stream.gaussian_vector(2 * g.n);
            const Eigen::VectorXd v = matrix_sqrt_psd(x.x) * zeta;
            const Eigen::VectorXd grad = gradient_from_released(g.n, w, v, w_tilde, wedge);
            w = md_update(w, grad, pre.w_total, pre.caps, params.eta);

            if (std::abs(w.sum() - pre.w_total) > budget_tol ||
                (w.array() > pre.caps.array() + 1e-12).any())
                throw NumericError("run_mechanism: iterate left the feasible set");

            if (options.record_steps) {
                StepSummary ss;
                ss.t = static_cast<int>(t + 1);
                ss.sdp_value = info.objective;
                const Eigen::VectorXd dev = w - w_tilde;
                ss.quad_value = (3.0 * wedge.array() * dev.array() * dev.array()).sum();
                ss.f_proxy = ss.sdp_value + ss.quad_value;
                ss.solver_steps = info.steps;
                rs.steps.push_back(ss);
            }
        }
        candidates.push_back(avg / static_cast<double>(params.steps));
        rs.seconds = seconds_since(t_restart);
        res.report.restarts.push_back(std::move(rs));
    }

    // Selection runs entirely on released data: the shared anchor is the mean
    // of the per-restart noisy references, and the score is the saddle value
    // against that anchor's motif adjacency.
    Eigen::VectorXd anchor = Eigen::VectorXd::Zero(m);
    for (const auto& a : anchors) anchor += a;
    anchor /= static_cast<double>(anchors.size());
    const SaddleContext sel_ctx = make_saddle_context(
        g.n, triangle_adjacency_raw(g.n, anchor), anchor, pre.caps, params.lambda);

    int best = -1;
    double best_value = std::numeric_limits<double>::infinity();
    for (int l = 0; l < params.restarts; ++l) {
        const double value = saddle_value(candidates[l], sel_ctx, options.solver);
        res.report.restarts[l].candidate_value = value;
        if (value < best_value) {
            best_value = value;
            best = l;
        }
    }
    res.report.chosen_restart = best;

    res.output = WeightedGraph(g.n);
    Eigen::VectorXd::Map(res.output.w.data(), m) = candidates[best];
    res.report.final_weights.assign(res.output.w.begin(), res.output.w.end());
    res.report.total_seconds = seconds_since(t_start);
    return res;
}

WeightedGraph randomized_response(const WeightedGraph& g, double epsilon, NoiseStream& stream,
                                  const Eigen::VectorXd* injected) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw ConfigError("randomized_response: epsilon must be positive");
    validate_nonnegative(g, "randomized_response");
    const std::int64_t m = PairIndexer(g.n).count();
    if (injected && injected->size() != m)
        throw ConfigError("randomized_response: injected draw count mismatch");
    WeightedGraph out(g.n);
    for (std::int64_t k = 0; k < m; ++k) {
        const double draw = injected ? (*injected)(k) : stream.laplace(1.0 / epsilon);
        out.w[static_cast<std::size_t>(k)] = g.w[static_cast<std::size_t>(k)] + draw;
    }
    return out;
}

WeightedGraph clip_negative(const WeightedGraph& g) {
    WeightedGraph out = g;
    for (double& v : out.w) v = std::max(v, 0.0);
    return out;
}

}  // namespace motifcut
