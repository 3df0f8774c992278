// End-to-end acceptance checks.  Each criterion is one function printing a
// single [PASS]/[FAIL] line from main; failures also carry a file:line
// detail on standard error.  Tolerances are pinned here and must not drift.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "motifcut/common.hpp"
#include "motifcut/eval.hpp"
#include "motifcut/graph_io.hpp"
#include "motifcut/mechanism.hpp"
#include "motifcut/noise.hpp"
#include "motifcut/params.hpp"
#include "motifcut/report.hpp"
#include "motifcut/sdp.hpp"
#include "motifcut/triangle.hpp"
#include "motifcut/weighted_graph.hpp"

namespace {

using namespace motifcut;

// Always-on requirement: never compiled out in Release.  Failing aborts the
// enclosing criterion, not the whole binary, so every criterion reports.
#define REQUIRE(cond, msg)                                                      \
    do {                                                                        \
        if (!(cond)) {                                                          \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg \
                      << "\n";                                                  \
            return false;                                                       \
        }                                                                       \
    } while (0)

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

// Criterion 1: the production water-filling projection agrees with the
// independent bisection oracle and satisfies the optimality system, over
// mixed cap-binding regimes.
bool projection_matches_oracle() {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> dim(2, 12);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int inst = 0; inst < 1000; ++inst) {
        const int m = dim(rng);
        Eigen::VectorXd w(m), g(m), u(m);
        for (int i = 0; i < m; ++i) {
            u(i) = 0.2 + 2.8 * unit(rng);
            w(i) = u(i) * (0.05 + 0.95 * unit(rng));
            g(i) = -3.0 + 6.0 * unit(rng);
        }
        const double w_total = (0.2 + 0.799 * unit(rng)) * u.sum();
        const double eta = 0.01 + 0.99 * unit(rng);
        const Eigen::VectorXd fast = md_update(w, g, w_total, u, eta);
        const Eigen::VectorXd y = md_scores(w, g, eta);
        const Eigen::VectorXd slow = brute_force_md_oracle(y, w_total, u);
        const double gap = (fast - slow).cwiseAbs().maxCoeff();
        REQUIRE(gap <= 1e-8, "projection gap " << gap << " on instance " << inst);
        const KktReport kkt = kkt_check(fast, y, w_total, u, 1e-8);
        REQUIRE(kkt.ok, "optimality check rejected instance " << inst << ": " << kkt.detail);
    }
    return true;
}

// Criterion 2: the matrix route and direct triple enumeration give the same
// cut value on every bipartition, for unit and random weights.
bool cuts_match_enumeration() {
    NoiseStream stream(202);
    for (int inst = 0; inst < 50; ++inst) {
        const int n = 3 + inst % 8;
        WeightedGraph g = gen_gnp(n, 0.6, stream);
        if (inst >= 25)
            for (double& x : g.w)
                if (x > 0.0) x = stream.uniform01();
        const std::int64_t top = (std::int64_t{1} << (n - 1)) - 1;
        for (std::int64_t mask = 0; mask < top; ++mask) {
            CutSpec cut;
            cut.s.push_back(0);
            for (int v = 1; v < n; ++v)
                (((mask >> (v - 1)) & 1) ? cut.s : cut.t).push_back(v);
            const double via_matrix = triangle_cut_bipartition(g, cut.s);
            const double via_triples = triangle_cut_general(g, cut);
            REQUIRE(std::abs(via_matrix - via_triples) <= 1e-12,
                    "cut mismatch on instance " << inst << " mask " << mask << ": "
                                                << via_matrix << " vs " << via_triples);
        }
    }
    return true;
}

// Criterion 3: the closed-form saddle gradient matches central finite
// differences of the saddle value, coordinate by coordinate.
bool gradient_matches_differences() {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double h = 2e-3;
    SdpSolveOptions opts;
    opts.tol = 1e-10;
    opts.max_steps = 200000;
    for (int inst = 0; inst < 20; ++inst) {
        const int n = 3 + inst % 4;
        const std::int64_t m = PairIndexer(n).count();
        Eigen::VectorXd ref(m), caps(m), w(m);
        for (std::int64_t e = 0; e < m; ++e) {
            ref(e) = 0.3 + 0.5 * unit(rng);
            caps(e) = ref(e) + 0.1 + 0.4 * unit(rng);
            w(e) = caps(e) * (0.4 + 0.55 * unit(rng));
        }
        const SaddleContext ctx =
            make_saddle_context(n, triangle_adjacency_raw(n, ref), ref, caps, 2.0);
        SdpPoint base;
        saddle_value(w, ctx, opts, nullptr, &base);
        const Eigen::VectorXd grad = exact_gradient(w, ctx, 1e-10);
        for (std::int64_t e = 0; e < m; ++e) {
            Eigen::VectorXd wp = w;
            Eigen::VectorXd wm = w;
            wp(e) += h;
            wm(e) -= h;
            const double fp = saddle_value(wp, ctx, opts, &base);
            const double fm = saddle_value(wm, ctx, opts, &base);
            const double fd = (fp - fm) / (2.0 * h);
            const double scale = std::max(1.0, std::abs(grad(e)));
            REQUIRE(std::abs(grad(e) - fd) <= 1e-4 * scale,
                    "gradient mismatch on instance " << inst << " pair " << e << ": exact "
                                                     << grad(e) << " differenced " << fd);
        }
    }
    return true;
}

// Criterion 4: the one-sample sketch estimator is unbiased; over 1e5 draws
// its mean lands inside the 3-sigma empirical interval of the closed-form
// gradient in every coordinate.
bool estimator_is_unbiased() {
    SdpSolveOptions opts;
    opts.tol = 1e-10;
    opts.max_steps = 200000;
    for (int inst = 0; inst < 3; ++inst) {
        const int n = 5;
        const std::int64_t m = PairIndexer(n).count();
        std::mt19937_64 rng(static_cast<std::uint64_t>(404 + 7 * inst));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Eigen::VectorXd ref(m), caps(m), w(m);
        for (std::int64_t e = 0; e < m; ++e) {
            ref(e) = 0.4 + 0.6 * unit(rng);
            caps(e) = ref(e) + 0.2 + 0.6 * unit(rng);
            w(e) = caps(e) * (0.3 + 0.6 * unit(rng));
        }
        const SaddleContext ctx =
            make_saddle_context(n, triangle_adjacency_raw(n, ref), ref, caps, 2.0);
        SdpPoint xstar;
        saddle_value(w, ctx, opts, nullptr, &xstar);
        const Eigen::VectorXd exact = exact_gradient(w, ctx, 1e-10);
        NoiseStream draws(808 + static_cast<std::uint64_t>(inst));
        const int total = 100000;
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(m);
        Eigen::VectorXd sumsq = Eigen::VectorXd::Zero(m);
        for (int s = 0; s < total; ++s) {
            const Eigen::VectorXd zeta = draws.gaussian_vector(2 * n);
            Eigen::VectorXd wt(m);
            for (std::int64_t e = 0; e < m; ++e) wt(e) = ref(e) + draws.laplace(0.5);
            const Eigen::VectorXd ghat = estimate_gradient(w, xstar, zeta, wt, caps);
            sum += ghat;
            sumsq += ghat.cwiseAbs2();
        }
        for (std::int64_t e = 0; e < m; ++e) {
            const double mean = sum(e) / total;
            const double var =
                std::max(0.0, sumsq(e) / total - mean * mean) * (total / (total - 1.0));
            const double ci = 3.0 * std::sqrt(var / total);
            const double bias = std::abs(mean - exact(e));
            REQUIRE(bias <= ci, "estimator bias " << bias << " outside 3-sigma interval " << ci
                                                  << " on instance " << inst << " pair " << e);
        }
    }
    return true;
}

// Criterion 5: the production inner solver matches the independent
// hill-climbing oracle on two-vertex instances, and every returned point
// sits in the domain with the implied entry and eigenvalue bounds.
bool solver_matches_small_oracle() {
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const SdpSolveOptions opts;  // the production configuration is what gets certified
    for (int inst = 0; inst < 50; ++inst) {
        Eigen::MatrixXd d(2, 2);
        const double a = -1.5 + 3.0 * unit(rng);
        const double b = -1.5 + 3.0 * unit(rng);
        const double c = -1.5 + 3.0 * unit(rng);
        d << a, b, b, c;
        const double lambda = 0.3 + 2.7 * unit(rng);
        const Eigen::MatrixXd m4 = block_embed(d);
        SdpSolveInfo info;
        const SdpPoint x = inner_sdp_solve(m4, lambda, opts, nullptr, &info);
        const double reference = sdp_oracle_small(m4, lambda);
        const double gap = std::abs(info.objective - reference);
        REQUIRE(gap <= 1e-4, "objective gap " << gap << " on instance " << inst << " (solver "
                                              << info.objective << " oracle " << reference << ")");
        const double residual = domain_residuals(x.x, 2).worst();
        REQUIRE(residual <= 1e-7, "domain residual " << residual << " on instance " << inst);
        const double largest_entry = x.x.cwiseAbs().maxCoeff();
        REQUIRE(largest_entry <= 1.0 + 1e-7,
                "entry bound violated on instance " << inst << ": " << largest_entry);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x.x);
        const double lo = es.eigenvalues().minCoeff();
        const double hi = es.eigenvalues().maxCoeff();
        REQUIRE(lo >= 0.5 - 1e-7, "eigenvalue floor violated on instance " << inst << ": " << lo);
        REQUIRE(hi <= 4.0 + 1e-7, "eigenvalue cap violated on instance " << inst << ": " << hi);
    }
    return true;
}

// Criterion 6: the sensitivity proxy equals the brute-force maximum over
// single-pair unit perturbations of the max bipartition cut difference.
bool sensitivity_matches_brute_force() {
    NoiseStream stream(606);
    for (int inst = 0; inst < 30; ++inst) {
        const int n = 4 + inst % 4;
        WeightedGraph g = gen_gnp(n, 0.7, stream);
        if (inst >= 15)
            for (double& x : g.w)
                if (x > 0.0) x = 1.5 * stream.uniform01();
        const double fast = local_sensitivity_l3(g);
        double brute = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (const double h : {1.0, -1.0}) {
                    WeightedGraph pert = g;
                    pert.at(i, j) += h;
                    brute = std::max(brute, max_cut_error(pert, g).max_error);
                }
        REQUIRE(std::abs(fast - brute) <= 1e-9, "sensitivity mismatch on instance "
                                                    << inst << ": proxy " << fast
                                                    << " brute force " << brute);
    }
    return true;
}

// Criterion 7: calibration reproduces the pinned restart and step counts
// exactly, splits the three preprocessing rates evenly, and the consumed
// budget identity holds across a grid.
bool calibration_is_pinned() {
    const MechanismParams a = calibrate(6.0, 1e-6, 0.3, 100.0, 6.0, 4.0, 15.0, 10);
    REQUIRE(a.restarts == 3, "restart count " << a.restarts << " at beta 0.3, expected 3");
    REQUIRE(a.eps4 == 6.0 / (6.0 * 3.0), "per-restart rate " << a.eps4 << " at epsilon 6");
    const MechanismParams b = calibrate(1.0, 1e-3, 0.3, 100.0, 10.0, 5.0, 2.0, 10);
    REQUIRE(b.steps == 8, "step count " << b.steps << ", expected 8");
    for (const double eps : {0.5, 1.0, 2.0, 4.0, 6.0, 8.0})
        for (const double beta : {0.05, 0.1, 0.25, 0.5, 0.9}) {
            const MechanismParams p = calibrate(eps, 1e-4, beta, 80.0, 6.0, 4.0, 1.5, 12);
            REQUIRE(p.eps1 == p.eps2, "uneven preprocessing split at epsilon " << eps);
            REQUIRE(p.eps2 == p.eps3, "uneven preprocessing split at epsilon " << eps);
            const double consumed = p.eps1 + p.eps2 + p.eps3 + p.restarts * p.eps4;
            const double gap = std::abs(consumed - 2.0 * eps / 3.0);
            REQUIRE(gap <= 1e-12, "budget identity off by " << gap << " at epsilon " << eps
                                                            << " beta " << beta);
        }
    return true;
}

// Criterion 8: every release is feasible (budget met, caps respected), and
// empty or below-threshold inputs come back as the empty graph.  The median
// cut error against the noisy baseline is reported, not asserted.
bool releases_are_feasible() {
    std::vector<double> release_err;
    std::vector<double> baseline_err;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        NoiseStream gstream(seed);
        const WeightedGraph g = gen_gnp(12, 0.5, gstream);
        const MechanismResult res = run_mechanism(g, 2.0, 1e-6, 0.25, seed);
        if (res.report.degenerate) {
            const double mass = res.output.weights().cwiseAbs().maxCoeff();
            REQUIRE(mass == 0.0, "degenerate release not empty on seed " << seed);
        } else {
            const double w_total = res.report.w_total;
            const double budget_gap = std::abs(res.output.total_weight() - w_total);
            const double budget_tol = 1e-9 * std::max(1.0, w_total);
            REQUIRE(budget_gap <= budget_tol,
                    "budget gap " << budget_gap << " on seed " << seed);
            for (std::size_t e = 0; e < res.output.w.size(); ++e) {
                const double we = res.output.w[e];
                const double cap = res.report.caps[e];
                REQUIRE(we >= 0.0, "negative weight on seed " << seed << " pair " << e);
                REQUIRE(we <= cap + 1e-9, "cap violated on seed " << seed << " pair " << e
                                                                  << ": " << we << " > " << cap);
            }
        }
        release_err.push_back(max_cut_error(res.output, g).max_error);
        NoiseStream rr_stream(5000 + seed);
        const WeightedGraph rr = randomized_response(g, 2.0, rr_stream);
        baseline_err.push_back(max_cut_error(rr, g).max_error);
    }

    const MechanismResult empty_res = run_mechanism(WeightedGraph(12), 2.0, 1e-6, 0.25, 99);
    REQUIRE(empty_res.report.degenerate, "empty input not flagged degenerate");
    REQUIRE(empty_res.output.weights().cwiseAbs().maxCoeff() == 0.0,
            "empty input released mass");
    REQUIRE(empty_res.report.restarts.empty(), "empty input ran restarts");

    WeightedGraph tiny(12);
    tiny.at(0, 1) = 0.05;
    const MechanismResult tiny_res = run_mechanism(tiny, 2.0, 1e-6, 0.25, 99);
    REQUIRE(tiny_res.report.degenerate, "below-threshold input not flagged degenerate");
    REQUIRE(tiny_res.output.weights().cwiseAbs().maxCoeff() == 0.0,
            "below-threshold input released mass");

    const double med_release = median_of(release_err);
    const double med_baseline = median_of(baseline_err);
    std::cout << "[info] median cut error: release " << std::setprecision(4) << med_release
              << " vs baseline " << med_baseline
              << (med_release <= med_baseline ? " (release ahead)" : " (baseline ahead)")
              << "\n";
    return true;
}

// Criterion 9: the noisy baseline's measured worst bipartition error stays
// below ten times the coarse analytic envelope; the observed ratio is
// reported.
bool baseline_inside_envelope() {
    const int n = 16;
    const double eps = 1.0;
    const double beta = 0.25;
    const double logterm = std::log(n / beta);
    const double envelope = (logterm * logterm * logterm / (eps * eps * eps)) *
                            (std::pow(n, 2.5) + n * n * std::log(1.0 / beta));
    double worst_ratio = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        NoiseStream gstream(900 + seed);
        const WeightedGraph g = gen_gnp(n, 0.5, gstream);
        NoiseStream rr_stream(7000 + seed);
        const WeightedGraph rr = randomized_response(g, eps, rr_stream);
        const CutErrorResult r = max_cut_error(rr, g);
        REQUIRE(r.cuts_evaluated == (std::uint64_t{1} << 15) - 1,
                "unexpected sweep size " << r.cuts_evaluated);
        REQUIRE(r.max_error <= 10.0 * envelope, "baseline error " << r.max_error
                                                                  << " above slack envelope "
                                                                  << 10.0 * envelope);
        worst_ratio = std::max(worst_ratio, r.max_error / envelope);
    }
    std::cout << "[info] worst baseline error ratio " << std::setprecision(4) << worst_ratio
              << " of envelope (slack allows 10)\n";
    return true;
}

// Criterion 10: equal seeds reproduce byte-identical reports once timing
// fields are scrubbed, on both the solver path and the degenerate path.
bool reports_replay_identically() {
    NoiseStream gstream(4242);
    const WeightedGraph g = gen_gnp(12, 0.5, gstream);
    const MechanismResult first = run_mechanism(g, 2.0, 1e-6, 0.25, 31337);
    const MechanismResult second = run_mechanism(g, 2.0, 1e-6, 0.25, 31337);
    nlohmann::json ja = report_to_json(first.report);
    nlohmann::json jb = report_to_json(second.report);
    scrub_timing(ja);
    scrub_timing(jb);
    REQUIRE(ja.dump() == jb.dump(), "solver-path replays differ");

    const MechanismResult da = run_mechanism(WeightedGraph(12), 2.0, 1e-6, 0.25, 31337);
    const MechanismResult db = run_mechanism(WeightedGraph(12), 2.0, 1e-6, 0.25, 31337);
    nlohmann::json jda = report_to_json(da.report);
    nlohmann::json jdb = report_to_json(db.report);
    scrub_timing(jda);
    scrub_timing(jdb);
    REQUIRE(jda.dump() == jdb.dump(), "degenerate-path replays differ");
    return true;
}

struct Criterion {
    const char* name;
    bool (*fn)();
    double limit_seconds;  // 0 means no budget pinned
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"capped-simplex projection matches the bisection oracle", &projection_matches_oracle,
         10.0},
        {"bipartition cuts match triple enumeration on every split", &cuts_match_enumeration,
         30.0},
        {"saddle gradient matches central finite differences", &gradient_matches_differences,
         300.0},
        {"stochastic gradient estimator is unbiased", &estimator_is_unbiased, 120.0},
        {"inner solver matches the small-instance oracle", &solver_matches_small_oracle, 120.0},
        {"sensitivity proxy matches brute-force perturbation", &sensitivity_matches_brute_force,
         60.0},
        {"calibration reproduces pinned values and the budget split", &calibration_is_pinned,
         0.0},
        {"releases are feasible and degenerate inputs come back empty", &releases_are_feasible,
         600.0},
        {"baseline error stays inside the coarse envelope", &baseline_inside_envelope, 900.0},
        {"equal seeds reproduce byte-identical reports", &reports_replay_identically, 0.0},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = c.fn();
        } catch (const std::exception& ex) {
            std::cerr << "[FAIL] unexpected exception: " << ex.what() << "\n";
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (ok && c.limit_seconds > 0.0 && elapsed > c.limit_seconds) {
            std::cerr << "[FAIL] over the " << c.limit_seconds << "s budget: " << elapsed
                      << "s\n";
            ok = false;
        }
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << c.name << " (" << std::fixed
                  << std::setprecision(1) << elapsed << "s)\n"
                  << std::defaultfloat;
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
