#include "motifcut/eval.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "motifcut/noise.hpp"
#include "motifcut/triangle.hpp"

namespace motifcut {

namespace {

constexpr int kExhaustiveCap = 22;

Eigen::MatrixXd adjacency_difference(const WeightedGraph& g1, const WeightedGraph& g2) {
    if (g1.n != g2.n) throw InputError("max_cut_error: vertex counts differ");
    if (g1.n < 2) throw InputError("max_cut_error: need at least two vertices");
    return triangle_adjacency_raw(g1.n, g1.weights()) -
           triangle_adjacency_raw(g2.n, g2.weights());
}

std::vector<int> side_from_mask(int n, const std::vector<bool>& in_s) {
    std::vector<int> side;
    for (int v = 0; v < n; ++v)
        if (in_s[v]) side.push_back(v);
    return side;
}

// Half the signed flow across (S, V\S) for a symmetric zero-diagonal matrix.
double half_cross_sum(const Eigen::MatrixXd& d, const std::vector<bool>& in_s) {
    const int n = static_cast<int>(d.rows());
    double v = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!in_s[i]) continue;
        for (int j = 0; j < n; ++j)
            if (!in_s[j]) v += d(i, j);
    }
    return 0.5 * v;
}

}  // namespace

CutErrorResult max_cut_error_naive(const WeightedGraph& g1, const WeightedGraph& g2) {
    const Eigen::MatrixXd d = adjacency_difference(g1, g2);
    const int n = g1.n;
    if (n > 20) throw ConfigError("max_cut_error_naive: reference sweep capped at n = 20");
    const int nb = n - 1;
    CutErrorResult res;
    res.max_error = -1.0;
    for (std::uint64_t c = 0; c < (1ULL << nb); ++c) {
        std::vector<bool> in_s(n, false);
        in_s[0] = true;
        int members = 1;
        for (int v = 1; v < n; ++v)
            if (c & (1ULL << (v - 1))) {
                in_s[v] = true;
                ++members;
            }
        if (members == n) continue;
        const double err = std::abs(half_cross_sum(d, in_s));
        ++res.cuts_evaluated;
        if (err > res.max_error) {
            res.max_error = err;
            res.argmax_side = side_from_mask(n, in_s);
        }
    }
    return res;
}

CutErrorResult max_cut_error(const WeightedGraph& g1, const WeightedGraph& g2,
                             const CutMode& mode) {
    const Eigen::MatrixXd d = adjacency_difference(g1, g2);
    const int n = g1.n;
    CutErrorResult res;

    if (mode.kind == CutMode::Kind::exhaustive) {
        if (n > kExhaustiveCap)
            throw ConfigError("max_cut_error: exhaustive sweep rejected beyond n = " +
                              std::to_string(kExhaustiveCap) + "; use sampled mode");
        const int nb = n - 1;
        const Eigen::VectorXd t = d.rowwise().sum();

        // Gray-code walk over subsets of {1..n-1}; vertex 0 stays in S.  One
        // vertex flips per state, so the crossing sum updates in O(1) and the
        // per-vertex S-row sums r in O(n).
        std::vector<bool> in_s(n, false);
        in_s[0] = true;
        Eigen::VectorXd r = d.col(0);
        double cross = t(0);  // sum over j outside S of d(0, j), diag is zero
        int members = 1;

        res.max_error = -1.0;
        auto consider = [&]() {
            if (members == n) return;
            const double err = std::abs(0.5 * cross);
            ++res.cuts_evaluated;
            if (err > res.max_error) {
                res.max_error = err;
                res.argmax_side = side_from_mask(n, in_s);
            }
        };
        consider();
        for (std::uint64_t c = 1; c < (1ULL << nb); ++c) {
            const int v = 1 + std::countr_zero(c);
            if (in_s[v]) {
                cross += 2.0 * r(v) - t(v);
                in_s[v] = false;
                --members;
                r -= d.col(v);
            } else {
                cross += t(v) - 2.0 * r(v);
                in_s[v] = true;
                ++members;
                r += d.col(v);
            }
            consider();
        }
        return res;
    }

    // Sampled mode: exactly `samples` distinct bipartitions, uniform over
    // subsets containing vertex 0.
    if (mode.samples == 0) throw ConfigError("max_cut_error: sample count must be positive");
    const int nb = n - 1;
    if (nb <= 62 && mode.samples > (1ULL << nb) - 1)
        throw ConfigError("max_cut_error: requested more distinct cuts than exist");
    NoiseStream stream(mode.seed);
    const int words = (nb + 63) / 64;
    const int top_bits = nb - 64 * (words - 1);
    std::set<std::vector<std::uint64_t>> seen;
    res.max_error = -1.0;
    while (seen.size() < mode.samples) {
        std::vector<std::uint64_t> mask(words);
        for (int w = 0; w < words; ++w) mask[w] = stream.uniform_bits();
        if (top_bits < 64) mask[words - 1] &= (1ULL << top_bits) - 1;
        bool all_ones = true;
        for (int w = 0; w < words && all_ones; ++w) {
            const std::uint64_t full =
                (w == words - 1 && top_bits < 64) ? (1ULL << top_bits) - 1 : ~0ULL;
            all_ones = (mask[w] == full);
        }
        if (all_ones) continue;  // S = V
        if (!seen.insert(mask).second) continue;
        std::vector<bool> in_s(n, false);
        in_s[0] = true;
        for (int v = 1; v < n; ++v)
            if (mask[(v - 1) / 64] & (1ULL << ((v - 1) % 64))) in_s[v] = true;
        const double err = std::abs(half_cross_sum(d, in_s));
        ++res.cuts_evaluated;
        if (err > res.max_error) {
            res.max_error = err;
            res.argmax_side = side_from_mask(n, in_s);
        }
    }
    return res;
}

Eigen::VectorXd brute_force_md_oracle(const Eigen::Ref<const Eigen::VectorXd>& y, double w_total,
                                      const Eigen::Ref<const Eigen::VectorXd>& u) {
    const Eigen::Index m = y.size();
    if (m == 0 || u.size() != m) throw ConfigError("md oracle: length mismatch");
    if (!(w_total > 0.0)) throw ConfigError("md oracle: budget must be positive");
    for (Eigen::Index i = 0; i < m; ++i) {
        if (!(y(i) > 0.0) || !std::isfinite(y(i)))
            throw ConfigError("md oracle: scores must be positive and finite");
        if (!(u(i) > 0.0)) throw ConfigError("md oracle: nonpositive cap");
    }
    const double cap_sum = u.sum();
    if (cap_sum < w_total) throw ConfigError("md oracle: caps sum below the budget");
    if (cap_sum == w_total) return u;

    const auto residual = [&](double mu) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) s += std::min(y(i) * std::exp(-mu), u(i));
        return s - w_total;
    };

    // residual is nonincreasing in mu; the uncapped dual value is an upper
    // bracket, and expanding downward must cross zero because the cap sum
    // strictly exceeds the budget.
    double hi = std::log(y.sum() / w_total);
    double lo = hi - 1.0;
    double step = 1.0;
    while (residual(lo) < 0.0) {
        lo -= step;
        step *= 2.0;
        if (!std::isfinite(lo)) throw NumericError("md oracle: bracket expansion failed");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (residual(mid) >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double mu = 0.5 * (lo + hi);
    Eigen::VectorXd w(m);
    for (Eigen::Index i = 0; i < m; ++i) w(i) = std::min(y(i) * std::exp(-mu), u(i));
    if (std::abs(w.sum() - w_total) > 1e-12 * std::max(1.0, w_total))
        throw NumericError("md oracle: dual residual " + std::to_string(w.sum() - w_total));
    return w;
}

KktReport kkt_check(const Eigen::Ref<const Eigen::VectorXd>& w,
                    const Eigen::Ref<const Eigen::VectorXd>& y, double w_total,
                    const Eigen::Ref<const Eigen::VectorXd>& u, double tol) {
    KktReport rep;
    const Eigen::Index m = w.size();
    if (m == 0 || y.size() != m || u.size() != m) {
        rep.detail = "length mismatch";
        return rep;
    }
    rep.budget_residual = std::abs(w.sum() - w_total) / std::max(1.0, w_total);
    double max_slack_gap = -std::numeric_limits<double>::infinity();
    Eigen::Index pivot = -1;
    for (Eigen::Index i = 0; i < m; ++i) {
        if (!(w(i) > 0.0)) {
            rep.detail = "nonpositive weight at " + std::to_string(i);
            return rep;
        }
        rep.worst_cap_violation = std::max(rep.worst_cap_violation, w(i) - u(i));
        const double gap = u(i) - w(i);
        if (gap > max_slack_gap) {
            max_slack_gap = gap;
            pivot = i;
        }
    }
    if (rep.budget_residual > tol) {
        rep.detail = "budget residual " + std::to_string(rep.budget_residual);
        return rep;
    }
    if (rep.worst_cap_violation > tol) {
        rep.detail = "cap violated by " + std::to_string(rep.worst_cap_violation);
        return rep;
    }
    if (max_slack_gap <= tol) {
        // Every coordinate sits at its cap; the system is consistent iff the
        // caps exhaust the budget.
        rep.ok = std::abs(u.sum() - w_total) <= tol * std::max(1.0, w_total);
        rep.detail = rep.ok ? "all coordinates at caps" : "caps exhausted but budget mismatch";
        return rep;
    }

    rep.mu = std::log(y(pivot) / w(pivot));
    rep.worst_multiplier = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
        const double lambda_i = std::log(y(i) / w(i)) - rep.mu;
        rep.worst_multiplier = std::min(rep.worst_multiplier, lambda_i);
        const double slack = std::isinf(u(i)) ? std::abs(lambda_i)
                                              : std::abs(lambda_i * (w(i) - u(i)));
        rep.worst_slack = std::max(rep.worst_slack, slack);
    }
    if (rep.worst_multiplier < -tol) {
        rep.detail = "negative multiplier " + std::to_string(rep.worst_multiplier);
        return rep;
    }
    if (rep.worst_slack > tol) {
        rep.detail = "complementary slackness residual " + std::to_string(rep.worst_slack);
        return rep;
    }
    rep.ok = true;
    rep.detail = "ok";
    return rep;
}

double saddle_value(const Eigen::Ref<const Eigen::VectorXd>& w, const SaddleContext& ctx,
                    const SdpSolveOptions& opts, const SdpPoint* warm, SdpPoint* out_x) {
    const Eigen::MatrixXd m = block_embed(triangle_adjacency_raw(ctx.n, w) - ctx.target);
    SdpPoint x = inner_sdp_solve(m, ctx.lambda, opts, warm);
    const double value = F_triangle(w, x.x, ctx);
    if (out_x) *out_x = std::move(x);
    return value;
}

Eigen::VectorXd exact_gradient(const Eigen::Ref<const Eigen::VectorXd>& w,
                               const SaddleContext& ctx, double tol_sdp) {
    PairIndexer px(ctx.n);
    if (w.size() != px.count()) throw ConfigError("exact_gradient: weight length mismatch");
    const Eigen::MatrixXd m = block_embed(triangle_adjacency_raw(ctx.n, w) - ctx.target);
    SdpSolveOptions opts;
    opts.tol = tol_sdp;
    const SdpPoint x = inner_sdp_solve(m, ctx.lambda, opts);
    Eigen::VectorXd g(px.count());
    std::int64_t k = 0;
    for (int i = 0; i < ctx.n; ++i)
        for (int j = i + 1; j < ctx.n; ++j, ++k) {
            const Eigen::MatrixXd d = triangle_derivative_raw(ctx.n, w, i, j);
            g(k) = block_dot(d, x.x) + 2.0 * ctx.rho(k) * (w(k) - ctx.ref_weights(k));
        }
    return g;
}

namespace {

// Oracle-local feasibility: plain alternating projection (no Dykstra
// corrections), ending on the diagonal step.
Eigen::MatrixXd oracle_feasify(Eigen::MatrixXd x, double floor) {
    x = 0.5 * (x + x.transpose());
    for (int sweep = 0; sweep < 5000; ++sweep) {
        x.diagonal().setConstant(1.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
        if (es.info() != Eigen::Success) throw NumericError("sdp_oracle_small: eig failed");
        if (es.eigenvalues().minCoeff() >= floor - 1e-12) return x;
        Eigen::VectorXd ev = es.eigenvalues().cwiseMax(floor);
        x = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
        x = 0.5 * (x + x.transpose());
    }
    throw NumericError("sdp_oracle_small: feasification failed to converge");
}

double oracle_objective(const Eigen::MatrixXd& m, double lambda, const Eigen::MatrixXd& x) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("sdp_oracle_small: eig failed");
    double ld = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        if (!(es.eigenvalues()(i) > 0.0)) return -std::numeric_limits<double>::infinity();
        ld += std::log(es.eigenvalues()(i));
    }
    return m.cwiseProduct(x).sum() + lambda * ld;
}

}  // namespace

double sdp_oracle_small(const Eigen::MatrixXd& m, double lambda) {
    if (m.rows() != 4 || m.cols() != 4)
        throw ConfigError("sdp_oracle_small: expected a 4 x 4 matrix (two vertices)");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9)
        throw ConfigError("sdp_oracle_small: matrix not symmetric");
    if (!(lambda > 0.0)) throw ConfigError("sdp_oracle_small: lambda must be positive");
    const double floor = 0.5;

    std::mt19937_64 rng(0x5eedful);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_symmetric = [&]() {
        Eigen::MatrixXd r(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) r(i, j) = r(j, i) = gauss(rng);
        return r;
    };

    // The objective is strictly concave over a convex domain, so every
    // restart anneals toward the same maximizer; the extra starts only
    // guard against a stalled random walk.
    double best = -std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < 5; ++restart) {
        Eigen::MatrixXd x =
            restart == 0 ? Eigen::MatrixXd::Identity(4, 4).eval()
                         : oracle_feasify(Eigen::MatrixXd::Identity(4, 4) + 0.7 * random_symmetric(),
                                          floor);
        double g = oracle_objective(m, lambda, x);
        double sigma = 0.5;
        int fails = 0;
        int proposals = 0;
        while (sigma > 1e-6 && proposals < 4000) {
            ++proposals;
            Eigen::MatrixXd dir;
            if (proposals % 3 == 0) {
                dir = m + lambda * x.inverse();
                dir = 0.5 * (dir + dir.transpose());
            } else {
                dir = random_symmetric();
            }
            const double norm = dir.norm();
            if (norm < 1e-14) continue;
            const Eigen::MatrixXd xt = oracle_feasify(x + (sigma / norm) * dir, floor);
            const double gt = oracle_objective(m, lambda, xt);
            if (gt > g) {
                x = xt;
                g = gt;
                fails = 0;
            } else if (++fails >= 30) {
                sigma *= 0.6;
                fails = 0;
            }
        }
        best = std::max(best, g);
    }
    return best;
}

}  // namespace motifcut
