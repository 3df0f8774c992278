#include "motifcut/verify.hpp"

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

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace motifcut {
namespace {

// Runs one named check; an exception or a nonempty returned message fails it.
template <typename Fn>
void run_check(std::vector<CheckResult>& out, const std::string& name, Fn&& fn) {
    CheckResult r;
    r.name = name;
    try {
        std::string msg = fn();
        r.pass = msg.empty();
        r.detail = msg;
    } catch (const std::exception& ex) {
        r.pass = false;
        r.detail = ex.what();
    }
    out.push_back(std::move(r));
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

WeightedGraph random_graph(NoiseStream& stream, int n, double density, bool unit_weights) {
    WeightedGraph g(n);
    for (std::size_t k = 0; k < g.w.size(); ++k) {
        if (stream.uniform01() < density)
            g.w[k] = unit_weights ? 1.0 : 2.0 * stream.uniform01();
    }
    return g;
}

std::vector<int> side_from_mask(std::uint64_t mask, int n) {
    std::vector<int> s;
    for (int v = 0; v < n; ++v)
        if (mask >> v & 1) s.push_back(v);
    return s;
}

// Projects a random symmetric matrix into the spectahedron domain.
Eigen::MatrixXd random_domain_matrix(NoiseStream& stream, int half_n) {
    const int m = 2 * half_n;
    Eigen::MatrixXd y(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            double v = 2.0 * stream.uniform01() - 1.0;
            y(i, j) = v;
            y(j, i) = v;
        }
    return project_domain(y, half_n);
}

std::string check_close(double got, double want, double tol, const char* what) {
    if (std::abs(got - want) <= tol) return {};
    return std::string(what) + ": got " + fmt(got) + " want " + fmt(want);
}

}  // namespace

std::vector<CheckResult> verify_graph_core(std::uint64_t seed) {
    std::vector<CheckResult> out;
    NoiseStream stream(seed);

    run_check(out, "graph.adjacency_shape", [&]() -> std::string {
        for (int rep = 0; rep < 20; ++rep) {
            int n = 3 + static_cast<int>(stream.uniform_bits() % 7);
            WeightedGraph g = random_graph(stream, n, 0.7, rep % 2 == 0);
            Eigen::MatrixXd a = triangle_adjacency(g).a;
            if (a.rows() != n || a.cols() != n) return "wrong dimensions";
            if ((a - a.transpose()).cwiseAbs().maxCoeff() > 0.0) return "not symmetric";
            if (a.diagonal().cwiseAbs().maxCoeff() > 0.0) return "nonzero diagonal";
            if (a.minCoeff() < 0.0) return "negative entry";
            if (!a.allFinite()) return "non-finite entry";
        }
        return {};
    });

    run_check(out, "graph.adjacency_cubic_scaling", [&]() -> std::string {
        for (int rep = 0; rep < 10; ++rep) {
            int n = 3 + static_cast<int>(stream.uniform_bits() % 5);
            WeightedGraph g = random_graph(stream, n, 0.8, false);
            Eigen::MatrixXd a = triangle_adjacency(g).a;
            for (double c : {0.5, 2.0, 3.0}) {
                WeightedGraph h = g;
                for (double& w : h.w) w *= c;
                Eigen::MatrixXd ac = triangle_adjacency(h).a;
                double ref = std::max(1.0, a.cwiseAbs().maxCoeff() * c * c * c);
                if ((ac - c * c * c * a).cwiseAbs().maxCoeff() > 1e-12 * ref)
                    return "scaling mismatch at c=" + fmt(c);
            }
        }
        return {};
    });

    run_check(out, "graph.adjacency_empty", [&]() -> std::string {
        for (int n : {1, 2, 5}) {
            WeightedGraph g(n);
            Eigen::MatrixXd a = triangle_adjacency(g).a;
            if (a.size() > 0 && a.cwiseAbs().maxCoeff() > 0.0)
                return "empty graph produced nonzero motif weight";
        }
        return {};
    });

    run_check(out, "graph.derivative_exact_difference", [&]() -> std::string {
        for (int rep = 0; rep < 12; ++rep) {
            int n = 4 + static_cast<int>(stream.uniform_bits() % 4);
            WeightedGraph g = random_graph(stream, n, 0.9, false);
            PairIndexer idx(n);
            std::int64_t k = static_cast<std::int64_t>(stream.uniform_bits() %
                                                       static_cast<std::uint64_t>(idx.count()));
            auto [i, j] = idx.unpack(k);
            Eigen::MatrixXd d = triangle_derivative(g, i, j).d;
            if ((d - d.transpose()).cwiseAbs().maxCoeff() > 0.0) return "derivative not symmetric";
            Eigen::MatrixXd base = triangle_adjacency(g).a;
            for (double h : {1.0, 0.37, -0.2}) {
                WeightedGraph gp = g;
                gp.w[static_cast<std::size_t>(k)] += h;
                Eigen::MatrixXd diff = triangle_adjacency_raw(n, gp.weights()) - base;
                double ref = std::max(1.0, diff.cwiseAbs().maxCoeff());
                if ((diff - h * d).cwiseAbs().maxCoeff() > 1e-9 * ref)
                    return "difference is not linear in the perturbed pair";
            }
            for (int r = 0; r < n; ++r) {
                if (r == i || r == j) continue;
                for (int c = 0; c < n; ++c) {
                    if (c == i || c == j) continue;
                    if (d(r, c) != 0.0) return "support leak outside the perturbed pair";
                }
            }
        }
        return {};
    });

    run_check(out, "graph.cut_identity", [&]() -> std::string {
        for (int rep = 0; rep < 10; ++rep) {
            int n = 3 + static_cast<int>(stream.uniform_bits() % 5);
            WeightedGraph g = random_graph(stream, n, 0.8, false);
            Eigen::MatrixXd a = triangle_adjacency(g).a;
            double scale = std::max(1.0, a.sum());
            for (std::uint64_t mask = 1; mask + 1 < (1ull << n); ++mask) {
                std::vector<int> s = side_from_mask(mask, n);
                std::vector<int> t = side_from_mask(~mask & ((1ull << n) - 1), n);
                std::vector<bool> in_s(static_cast<std::size_t>(n), false);
                for (int v : s) in_s[static_cast<std::size_t>(v)] = true;
                double lhs = triangle_cut_bipartition(g, s);
                double rhs = triangle_cut_general(g, CutSpec{s, t});
                double mat = cut_value_from_adjacency(a, in_s);
                if (std::abs(lhs - rhs) > 1e-12 * scale) return "bipartition vs triple enumeration";
                if (std::abs(lhs - mat) > 1e-12 * scale) return "bipartition vs adjacency form";
            }
        }
        return {};
    });

    run_check(out, "graph.cut_worked_values", [&]() -> std::string {
        WeightedGraph k3(3);
        k3.w = {2.0, 3.0, 5.0};
        if (auto m = check_close(triangle_cut_bipartition(k3, {0}), 30.0, 1e-12,
                                 "weighted triangle singleton cut");
            !m.empty())
            return m;
        if (auto m =
                check_close(triangle_cut_general(k3, CutSpec{{0}, {1}}), 30.0, 1e-12,
                            "weighted triangle partial cut");
            !m.empty())
            return m;
        WeightedGraph k4 = gen_complete(4);
        if (auto m = check_close(triangle_cut_bipartition(k4, {0, 1}), 4.0, 1e-12,
                                 "unit K4 balanced cut");
            !m.empty())
            return m;
        if (auto m = check_close(triangle_cut_bipartition(k4, {0}), 3.0, 1e-12,
                                 "unit K4 singleton cut");
            !m.empty())
            return m;
        return {};
    });

    run_check(out, "graph.l3_regular_bound", [&]() -> std::string {
        NoiseStream gen = stream.substream(17);
        for (int d : {2, 3}) {
            for (int n : {8, 12}) {
                WeightedGraph g = gen_regular(n, d, gen);
                double l3 = local_sensitivity_l3(g);
                if (l3 > d + 1e-12) return "wedge weight exceeds degree on a regular graph";
            }
        }
        return {};
    });

    run_check(out, "graph.l3_max_over_pairs", [&]() -> std::string {
        for (int rep = 0; rep < 10; ++rep) {
            int n = 3 + static_cast<int>(stream.uniform_bits() % 6);
            WeightedGraph g = random_graph(stream, n, 0.7, false);
            double best = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    double s = 0.0;
                    for (int v = 0; v < n; ++v) {
                        if (v == i || v == j) continue;
                        s += g.at(i, v) * g.at(j, v);
                    }
                    best = std::max(best, s);
                }
            double got = local_sensitivity_l3(g);
            if (std::abs(got - best) > 1e-12 * std::max(1.0, best)) return "pairwise wedge maximum";
        }
        return {};
    });

    run_check(out, "graph.cap_quantities_worked", [&]() -> std::string {
        Eigen::VectorXd u3 = Eigen::VectorXd::Ones(3);
        UQuantities q3 = u_quantities(3, u3);
        if (auto m = check_close(q3.u_triangle, 3.0, 1e-12, "triangle bound on unit K3 caps");
            !m.empty())
            return m;
        if (auto m = check_close(q3.u_lambda, 2.0, 1e-12, "wedge bound on unit K3 caps");
            !m.empty())
            return m;
        Eigen::VectorXd u4 = Eigen::VectorXd::Ones(6);
        UQuantities q4 = u_quantities(4, u4);
        if (auto m = check_close(q4.u_triangle, 6.0, 1e-12, "triangle bound on unit K4 caps");
            !m.empty())
            return m;
        if (auto m = check_close(q4.u_lambda, 4.0, 1e-12, "wedge bound on unit K4 caps");
            !m.empty())
            return m;
        UQuantities qz = u_quantities(4, Eigen::VectorXd::Zero(6));
        if (qz.u_triangle != 0.0 || qz.u_lambda != 0.0) return "zero caps must give zero bounds";
        if (auto m = check_close(local_sensitivity_l3(gen_complete(4)), 2.0, 1e-12,
                                 "pair sensitivity on unit K4");
            !m.empty())
            return m;
        return {};
    });

    return out;
}

std::vector<CheckResult> verify_dp_primitives(std::uint64_t seed) {
    std::vector<CheckResult> out;
    NoiseStream stream(seed);

    run_check(out, "noise.laplace_median_zero", [&]() -> std::string {
        for (double b : {0.5, 1.0, 7.0})
            if (laplace_from_uniform(0.5, b) != 0.0) return "median draw is not exactly zero";
        return {};
    });

    run_check(out, "noise.laplace_scale_linear", [&]() -> std::string {
        for (double u : {0.01, 0.2, 0.4999, 0.5001, 0.77, 0.99}) {
            double base = laplace_from_uniform(u, 1.0);
            double scaled = laplace_from_uniform(u, 3.0);
            if (std::abs(scaled - 3.0 * base) > 1e-12 * std::max(1.0, std::abs(scaled)))
                return "scale is not a pure multiplier";
        }
        return {};
    });

    run_check(out, "noise.laplace_tails", [&]() -> std::string {
        NoiseStream draws = stream.substream(1);
        const int trials = 40000;
        std::vector<double> xs(trials);
        for (double& x : xs) x = draws.laplace(1.0);
        for (double t : {0.5, 1.0, 2.0}) {
            int hits = 0;
            for (double x : xs)
                if (std::abs(x) >= t) ++hits;
            double p = std::exp(-t);
            double sigma = std::sqrt(p * (1.0 - p) / trials);
            double frac = static_cast<double>(hits) / trials;
            if (std::abs(frac - p) > 5.0 * sigma)
                return "tail mass off at t=" + fmt(t) + ": " + fmt(frac) + " vs " + fmt(p);
        }
        return {};
    });

    run_check(out, "noise.stream_determinism", [&]() -> std::string {
        NoiseStream a(12345), b(12345);
        for (int i = 0; i < 200; ++i) {
            if (a.laplace(1.0) != b.laplace(1.0)) return "laplace sequences diverge";
            if (a.gaussian() != b.gaussian()) return "gaussian sequences diverge";
            if (a.uniform01() != b.uniform01()) return "uniform sequences diverge";
        }
        return {};
    });

    run_check(out, "noise.family_isolation", [&]() -> std::string {
        NoiseStream a(777), b(777);
        std::vector<double> first;
        for (int i = 0; i < 5; ++i) first.push_back(a.laplace(2.0));
        for (int i = 0; i < 9; ++i) (void)b.gaussian();
        for (int i = 0; i < 4; ++i) (void)b.uniform01();
        for (std::size_t i = 0; i < 5; ++i)
            if (b.laplace(2.0) != first[i])
                return "gaussian or uniform draws shifted the laplace stream";
        return {};
    });

    run_check(out, "noise.substreams_distinct", [&]() -> std::string {
        NoiseStream root(9001);
        NoiseStream s1 = root.substream(1);
        NoiseStream s2 = root.substream(2);
        if (s1.laplace(1.0) == s2.laplace(1.0)) return "distinct keys produced identical draws";
        NoiseStream s1b = NoiseStream(9001).substream(1);
        NoiseStream s1c = NoiseStream(9001).substream(1);
        if (s1b.laplace(1.0) != s1c.laplace(1.0)) return "same key is not reproducible";
        return {};
    });

    run_check(out, "noise.gaussian_moments", [&]() -> std::string {
        NoiseStream draws = stream.substream(2);
        const int trials = 30000, dim = 4;
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
        Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
        for (int t = 0; t < trials; ++t) {
            Eigen::VectorXd z = draws.gaussian_vector(dim);
            mean += z;
            cov += z * z.transpose();
        }
        mean /= trials;
        cov /= trials;
        if (mean.cwiseAbs().maxCoeff() > 0.05) return "sample mean too far from zero";
        if ((cov - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff() > 0.06)
            return "sample covariance too far from identity";
        return {};
    });

    run_check(out, "budget.split_identity", [&]() -> std::string {
        for (double eps : {0.5, 1.0, 2.0, 6.0}) {
            for (double beta : {0.05, 0.25, 0.3, 0.9}) {
                MechanismParams p = calibrate(eps, 1e-6, beta, 100.0, 10.0, 5.0, 2.0, 10);
                double spent = p.eps1 + p.eps2 + p.eps3 + p.restarts * p.eps4;
                if (std::abs(spent - 2.0 * eps / 3.0) > 1e-12 * eps)
                    return "stage budgets do not sum to two thirds at eps=" + fmt(eps);
            }
        }
        return {};
    });

    run_check(out, "budget.worked_restarts", [&]() -> std::string {
        MechanismParams p = calibrate(6.0, 1e-6, 0.3, 100.0, 10.0, 5.0, 2.0, 10);
        if (p.restarts != 3) return "restart count: got " + std::to_string(p.restarts) + " want 3";
        if (auto m = check_close(p.eps4, 1.0 / 3.0, 1e-12, "per-restart budget"); !m.empty())
            return m;
        return {};
    });

    run_check(out, "budget.worked_steps", [&]() -> std::string {
        MechanismParams p = calibrate(1.0, 1e-3, 0.3, 100.0, 10.0, 5.0, 2.0, 10);
        if (p.steps != 8) return "step count: got " + std::to_string(p.steps) + " want 8";
        return {};
    });

    run_check(out, "budget.outputs_positive", [&]() -> std::string {
        for (double eps : {0.25, 1.0, 4.0}) {
            MechanismParams p = calibrate(eps, 1e-5, 0.2, 37.0, 6.0, 3.0, 1.5, 9);
            for (double v : {p.eps1, p.eps2, p.eps3, p.eps4, p.lambda, p.eta, p.radius,
                             p.grad_bound})
                if (!(v > 0.0) || !std::isfinite(v)) return "nonpositive calibrated quantity";
            if (p.restarts < 1 || p.steps < 1) return "iteration counts below one";
        }
        return {};
    });

    run_check(out, "budget.lambda_grows_with_l3", [&]() -> std::string {
        double prev = 0.0;
        for (double l3 : {0.5, 1.0, 2.0, 4.0}) {
            MechanismParams p = calibrate(1.0, 1e-4, 0.25, 50.0, 8.0, 4.0, l3, 12);
            if (p.lambda < prev) return "regularizer weight decreased as sensitivity grew";
            prev = p.lambda;
        }
        return {};
    });

    return out;
}

std::vector<CheckResult> verify_sdp(std::uint64_t seed) {
    std::vector<CheckResult> out;
    NoiseStream stream(seed);

    auto random_sym = [&](int n) {
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double v = 2.0 * stream.uniform01() - 1.0;
                m(i, j) = v;
                m(j, i) = v;
            }
        return m;
    };

    run_check(out, "sdp.block_eigenvalue_pairs", [&]() -> std::string {
        for (int n : {2, 3, 4}) {
            Eigen::MatrixXd d = random_sym(n);
            Eigen::MatrixXd m = block_embed(d);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_d(d), es_m(m);
            std::vector<double> want;
            for (int i = 0; i < n; ++i) {
                want.push_back(es_d.eigenvalues()(i));
                want.push_back(-es_d.eigenvalues()(i));
            }
            std::sort(want.begin(), want.end());
            for (int i = 0; i < 2 * n; ++i)
                if (std::abs(es_m.eigenvalues()(i) - want[static_cast<std::size_t>(i)]) > 1e-9)
                    return "embedded spectrum is not the signed pair spectrum";
        }
        return {};
    });

    run_check(out, "sdp.block_rejects_asymmetric", [&]() -> std::string {
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
        d(0, 1) = 1.0;
        try {
            (void)block_embed(d);
        } catch (const ConfigError&) {
            return {};
        }
        return "asymmetric input was accepted";
    });

    run_check(out, "sdp.projection_identity_fixed", [&]() -> std::string {
        for (int n : {2, 4}) {
            Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2 * n, 2 * n);
            Eigen::MatrixXd p = project_domain(eye, n);
            if ((p - eye).cwiseAbs().maxCoeff() > 1e-12) return "identity moved under projection";
        }
        return {};
    });

    run_check(out, "sdp.projection_idempotent", [&]() -> std::string {
        for (int rep = 0; rep < 6; ++rep) {
            int n = 2 + static_cast<int>(stream.uniform_bits() % 3);
            Eigen::MatrixXd y = 3.0 * random_sym(2 * n);
            Eigen::MatrixXd p1 = project_domain(y, n);
            Eigen::MatrixXd p2 = project_domain(p1, n);
            if ((p2 - p1).cwiseAbs().maxCoeff() > 1e-8) return "projection is not idempotent";
        }
        return {};
    });

    run_check(out, "sdp.projection_residuals", [&]() -> std::string {
        for (int rep = 0; rep < 8; ++rep) {
            int n = 2 + static_cast<int>(stream.uniform_bits() % 4);
            Eigen::MatrixXd y = 5.0 * random_sym(2 * n);
            Eigen::MatrixXd p = project_domain(y, n);
            DomainResiduals r = domain_residuals(p, n);
            if (r.worst() > 1e-7)
                return "projected point violates the domain beyond tolerance: " + fmt(r.worst());
        }
        return {};
    });

    run_check(out, "sdp.solve_zero_objective", [&]() -> std::string {
        for (int n : {2, 3}) {
            Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
            SdpSolveInfo info;
            SdpPoint x = inner_sdp_solve(m, 1.0, {}, nullptr, &info);
            if ((x.x - Eigen::MatrixXd::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() > 1e-5)
                return "maximizer of pure log-det is not the identity";
            if (std::abs(info.objective) > 1e-8) return "pure log-det optimum is not zero";
        }
        return {};
    });

    run_check(out, "sdp.solve_large_lambda_near_identity", [&]() -> std::string {
        for (int rep = 0; rep < 4; ++rep) {
            int n = 2 + static_cast<int>(stream.uniform_bits() % 2);
            Eigen::MatrixXd m = block_embed(random_sym(n));
            double lam = 100.0 * m.cwiseAbs().sum();
            SdpPoint x = inner_sdp_solve(m, lam);
            if ((x.x - Eigen::MatrixXd::Identity(2 * n, 2 * n)).norm() > 0.1)
                return "heavy regularization did not pin the solution near identity";
        }
        return {};
    });

    run_check(out, "sdp.solve_monotone_feasible", [&]() -> std::string {
        for (int rep = 0; rep < 6; ++rep) {
            int n = 2 + static_cast<int>(stream.uniform_bits() % 2);
            Eigen::MatrixXd m = block_embed(random_sym(n));
            SdpSolveInfo info;
            SdpPoint x = inner_sdp_solve(m, 0.7, {}, nullptr, &info);
            if (!info.monotone) return "objective decreased during ascent";
            DomainResiduals r = domain_residuals(x.x, n);
            if (r.worst() > 1e-7) return "solution left the domain";
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x.x);
            if (es.eigenvalues().maxCoeff() > 2.0 * n + 1e-7) return "eigenvalue exceeds trace bound";
            if (x.x.cwiseAbs().maxCoeff() > 1.0 + 1e-7) return "entry left [-1, 1]";
        }
        return {};
    });

    run_check(out, "sdp.solve_warm_start_consistent", [&]() -> std::string {
        for (int rep = 0; rep < 4; ++rep) {
            Eigen::MatrixXd m = block_embed(random_sym(3));
            SdpSolveInfo cold_info, warm_info;
            (void)inner_sdp_solve(m, 0.9, {}, nullptr, &cold_info);
            SdpPoint start = SdpPoint::checked(random_domain_matrix(stream, 3), 3);
            (void)inner_sdp_solve(m, 0.9, {}, &start, &warm_info);
            double scale = std::max(1.0, std::abs(cold_info.objective));
            if (std::abs(cold_info.objective - warm_info.objective) > 1e-4 * scale)
                return "warm and cold solves disagree on the objective";
        }
        return {};
    });

    run_check(out, "sdp.solve_matches_dense_search", [&]() -> std::string {
        for (int rep = 0; rep < 5; ++rep) {
            Eigen::MatrixXd m = block_embed(random_sym(2));
            double lam = 0.4 + stream.uniform01();
            SdpSolveInfo info;
            (void)inner_sdp_solve(m, lam, {}, nullptr, &info);
            double oracle = sdp_oracle_small(m, lam);
            if (std::abs(info.objective - oracle) > 1e-4 * (1.0 + std::abs(oracle)))
                return "ascent disagrees with the randomized search optimum: " +
                       fmt(info.objective) + " vs " + fmt(oracle);
        }
        return {};
    });

    run_check(out, "sdp.objective_concave_on_chords", [&]() -> std::string {
        for (int rep = 0; rep < 5; ++rep) {
            int n = 2 + static_cast<int>(stream.uniform_bits() % 2);
            Eigen::MatrixXd m = block_embed(random_sym(n));
            double lam = 0.5 + stream.uniform01();
            Eigen::MatrixXd x1 = random_domain_matrix(stream, n);
            Eigen::MatrixXd x2 = random_domain_matrix(stream, n);
            auto value = [&](const Eigen::MatrixXd& x) {
                return m.cwiseProduct(x).sum() + lam * log_det_pd(x);
            };
            double v1 = value(x1), v2 = value(x2);
            for (double t : {0.25, 0.5, 0.75}) {
                double chord = t * v1 + (1.0 - t) * v2;
                double mid = value(t * x1 + (1.0 - t) * x2);
                if (mid < chord - 1e-9 * std::max(1.0, std::abs(chord)))
                    return "objective dipped below its chord";
            }
        }
        return {};
    });

    run_check(out, "sdp.sqrt_roundtrip", [&]() -> std::string {
        for (int rep = 0; rep < 6; ++rep) {
            int n = 2 + static_cast<int>(stream.uniform_bits() % 3);
            Eigen::MatrixXd x = random_domain_matrix(stream, n);
            Eigen::MatrixXd s = matrix_sqrt_psd(x);
            double err = (s * s - x).cwiseAbs().maxCoeff();
            if (err > 1e-10 * std::max(1.0, x.cwiseAbs().maxCoeff()))
                return "square of the root drifts from the input";
        }
        return {};
    });

    run_check(out, "sdp.saddle_objective_worked", [&]() -> std::string {
        WeightedGraph g = gen_complete(3);
        Eigen::VectorXd ref = g.weights();
        Eigen::VectorXd caps = Eigen::VectorXd::Constant(3, 2.0);
        SaddleContext ctx = make_saddle_context(3, triangle_adjacency(g).a, ref, caps, 0.0);
        Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(6, 6);
        double at_ref = F_triangle(ref, eye, ctx);
        if (std::abs(at_ref) > 1e-12) return "objective at the reference point is not zero";
        Eigen::VectorXd shifted = ref;
        shifted(0) += 0.5;
        // With identity X the bilinear block term vanishes, leaving the penalty.
        double want = ctx.rho(0) * 0.25;
        if (auto m = check_close(F_triangle(shifted, eye, ctx), want,
                                 1e-12 * std::max(1.0, want), "quadratic-only objective");
            !m.empty())
            return m;
        SaddleContext reg = make_saddle_context(3, triangle_adjacency(g).a, ref, caps, 2.0);
        Eigen::MatrixXd x = random_domain_matrix(stream, 3);
        if (F_triangle(ref, x, reg) > 1e-9)
            return "log-det term must be nonpositive on the domain";
        return {};
    });

    return out;
}

std::vector<CheckResult> verify_mechanism(std::uint64_t seed) {
    std::vector<CheckResult> out;
    NoiseStream stream(seed);

    run_check(out, "preprocess.worked_total", [&]() -> std::string {
        WeightedGraph g(3);
        g.w = {2.0, 3.0, 5.0};
        PreprocessNoise noise;
        noise.w_draw = 0.3;
        noise.cap_draws = Eigen::VectorXd::Zero(3);
        noise.l3_draw = 0.0;
        PreprocessedInstance pre = preprocess(g, 1.0, 1.0, 1.0, 0.3, stream, {}, &noise);
        if (pre.degenerate) return "worked instance flagged degenerate: " + pre.degenerate_reason;
        double want = 10.0 + 0.3 + std::log(10.0);
        if (auto m = check_close(pre.w_total, want, 1e-12, "noisy total weight"); !m.empty())
            return m;
        if (std::abs(pre.w_bar.sum() - pre.w_total) > 1e-9 * pre.w_total)
            return "rescaled weights do not sum to the released total";
        double floor = pre.w_total / 3.0 + std::log(6.0 * 9.0 / 0.3);
        // Zero draws: u_e = w_bar_e + ln(6 n^2 / beta) / eps2 + W / C(n,2) exactly.
        for (int e = 0; e < 3; ++e)
            if (std::abs(pre.caps(e) - (pre.w_bar(e) + floor)) > 1e-9)
                return "cap formula mismatch under zero draws";
        return {};
    });

    run_check(out, "preprocess.caps_feasible", [&]() -> std::string {
        for (int rep = 0; rep < 6; ++rep) {
            WeightedGraph g = random_graph(stream, 6, 0.8, false);
            if (g.total_weight() <= 0.0) continue;
            PreprocessedInstance pre = preprocess(g, 0.5, 0.5, 0.5, 0.25, stream);
            double floor = pre.w_total / static_cast<double>(PairIndexer(6).count());
            if (pre.caps.minCoeff() < floor - 1e-12 * std::max(1.0, floor))
                return "cap fell below the uniform floor";
            if (pre.caps.sum() < pre.w_total - 1e-9 * std::max(1.0, pre.w_total))
                return "caps cannot carry the released total";
            if (std::abs(pre.w_bar.sum() - pre.w_total) > 1e-9 * std::max(1.0, pre.w_total))
                return "rescaled weights lost the released total";
        }
        return {};
    });

    run_check(out, "preprocess.l3_floor", [&]() -> std::string {
        WeightedGraph g = gen_complete(4);
        PreprocessNoise noise;
        noise.w_draw = 0.0;
        noise.cap_draws = Eigen::VectorXd::Zero(6);
        noise.l3_draw = -1e9;
        PreprocessedInstance pre = preprocess(g, 1.0, 1.0, 1.0, 0.25, stream, {}, &noise);
        if (pre.l3_tilde < 1e-12) return "sensitivity proxy fell below its floor";
        return {};
    });

    run_check(out, "preprocess.degenerate_paths", [&]() -> std::string {
        WeightedGraph empty(6);
        PreprocessedInstance p1 = preprocess(empty, 1.0, 1.0, 1.0, 0.25, stream);
        if (!p1.degenerate) return "empty graph was not flagged degenerate";
        WeightedGraph tiny(2);
        tiny.w = {5.0};
        PreprocessedInstance p2 = preprocess(tiny, 1.0, 1.0, 1.0, 0.25, stream);
        if (!p2.degenerate) return "two-vertex graph was not flagged degenerate";
        if (p2.degenerate_reason.empty()) return "degenerate flag carries no reason";
        return {};
    });

    run_check(out, "md.worked_fixed_point", [&]() -> std::string {
        Eigen::VectorXd w(2), u(2), g(2);
        w << 4.0 / 3.0, 2.0 / 3.0;
        u << 1.5, 2.0;
        double lg = -std::log(1.5);
        g << lg, lg;
        Eigen::VectorXd next = md_update(w, g, 2.0, u, 1.0);
        if (std::abs(next(0) - 4.0 / 3.0) > 1e-12 || std::abs(next(1) - 2.0 / 3.0) > 1e-12)
            return "proportional fixed point moved";
        return {};
    });

    run_check(out, "md.worked_oracle_values", [&]() -> std::string {
        Eigen::VectorXd y(2), u(2);
        y << 2.0, 1.0;
        u << 1.5, 2.0;
        Eigen::VectorXd a = brute_force_md_oracle(y, 2.0, u);
        if (std::abs(a(0) - 4.0 / 3.0) > 1e-12 || std::abs(a(1) - 2.0 / 3.0) > 1e-12)
            return "proportional split";
        y << 10.0, 1.0;
        u << 1.0, 5.0;
        Eigen::VectorXd b = brute_force_md_oracle(y, 2.0, u);
        if (std::abs(b(0) - 1.0) > 1e-12 || std::abs(b(1) - 1.0) > 1e-12) return "cap saturation";
        y << 1.0, 1.0;
        u << 0.5, 0.5;
        Eigen::VectorXd c = brute_force_md_oracle(y, 1.0, u);
        if (std::abs(c(0) - 0.5) > 1e-12 || std::abs(c(1) - 0.5) > 1e-12) return "tight budget";
        return {};
    });

    run_check(out, "md.matches_oracle", [&]() -> std::string {
        for (int rep = 0; rep < 200; ++rep) {
            int n = 2 + static_cast<int>(stream.uniform_bits() % 9);
            Eigen::VectorXd u(n), g(n);
            for (int i = 0; i < n; ++i) u(i) = 0.05 + 2.0 * stream.uniform01();
            double budget = u.sum() * (0.2 + 0.75 * stream.uniform01());
            Eigen::VectorXd w = brute_force_md_oracle(Eigen::VectorXd::Ones(n), budget, u);
            for (int i = 0; i < n; ++i) g(i) = 4.0 * stream.uniform01() - 2.0;
            double eta = 0.1 + stream.uniform01();
            Eigen::VectorXd fast = md_update(w, g, budget, u, eta);
            Eigen::VectorXd scores = md_scores(w, g, eta);
            Eigen::VectorXd slow = brute_force_md_oracle(scores, budget, u);
            double err = (fast - slow).cwiseAbs().maxCoeff();
            if (err > 1e-9 * std::max(1.0, budget)) return "closed form vs bisection: " + fmt(err);
            KktReport kkt = kkt_check(fast, scores, budget, u, 1e-8);
            if (!kkt.ok) return "stationarity certificate failed: " + kkt.detail;
        }
        return {};
    });

    run_check(out, "md.output_feasible", [&]() -> std::string {
        for (int rep = 0; rep < 50; ++rep) {
            int n = 3 + static_cast<int>(stream.uniform_bits() % 6);
            Eigen::VectorXd u(n), g(n);
            for (int i = 0; i < n; ++i) u(i) = 0.1 + stream.uniform01();
            double budget = u.sum() * 0.6;
            Eigen::VectorXd w = brute_force_md_oracle(Eigen::VectorXd::Ones(n), budget, u);
            for (int i = 0; i < n; ++i) g(i) = 6.0 * stream.uniform01() - 3.0;
            Eigen::VectorXd next = md_update(w, g, budget, u, 0.7);
            if (std::abs(next.sum() - budget) > 1e-9 * std::max(1.0, budget))
                return "budget not preserved";
            if ((next - u).maxCoeff() > 1e-12) return "cap exceeded";
            if (next.minCoeff() <= 0.0) return "nonpositive weight";
        }
        return {};
    });

    run_check(out, "gradient.zero_reference", [&]() -> std::string {
        int n = 3;
        Eigen::VectorXd w = Eigen::VectorXd::Zero(3);
        Eigen::VectorXd u = Eigen::VectorXd::Ones(3);
        SdpPoint eye = SdpPoint::checked(Eigen::MatrixXd::Identity(6, 6), n);
        Eigen::VectorXd zeta = Eigen::VectorXd::Ones(6);
        Eigen::VectorXd g = estimate_gradient(w, eye, zeta, w, u);
        if (g.cwiseAbs().maxCoeff() > 0.0) return "empty graph gradient is not identically zero";
        return {};
    });

    run_check(out, "gradient.triangle_worked_value", [&]() -> std::string {
        int n = 3;
        Eigen::VectorXd w = Eigen::VectorXd::Ones(3);
        Eigen::VectorXd u = Eigen::VectorXd::Ones(3);
        SdpPoint eye = SdpPoint::checked(Eigen::MatrixXd::Identity(6, 6), n);
        Eigen::VectorXd zeta = Eigen::VectorXd::Ones(6);
        Eigen::VectorXd g = estimate_gradient(w, eye, zeta, w, u);
        for (int i = 0; i < 3; ++i)
            if (std::abs(g(i) - 12.0) > 1e-12)
                return "unit triangle probe value: got " + fmt(g(i)) + " want 12";
        return {};
    });

    run_check(out, "gradient.forms_agree", [&]() -> std::string {
        for (int rep = 0; rep < 8; ++rep) {
            int n = 4 + static_cast<int>(stream.uniform_bits() % 3);
            Eigen::Index m = static_cast<Eigen::Index>(PairIndexer(n).count());
            Eigen::VectorXd w(m), ref(m), u(m);
            for (Eigen::Index k = 0; k < m; ++k) {
                w(k) = stream.uniform01();
                ref(k) = stream.uniform01();
                u(k) = 0.5 + stream.uniform01();
            }
            SdpPoint point = SdpPoint::checked(random_domain_matrix(stream, n), n);
            Eigen::VectorXd zeta = stream.gaussian_vector(2 * n);
            Eigen::VectorXd fast = estimate_gradient(w, point, zeta, ref, u);
            Eigen::VectorXd probe = matrix_sqrt_psd(point.x) * zeta;
            Eigen::VectorXd direct = gradient_from_released(n, w, probe, ref, wedge_sums(n, u));
            double scale = std::max(1.0, fast.cwiseAbs().maxCoeff());
            if ((fast - direct).cwiseAbs().maxCoeff() > 1e-9 * scale)
                return "streamed and assembled estimators disagree";
        }
        return {};
    });

    run_check(out, "gradient.mean_matches_expectation", [&]() -> std::string {
        int n = 4;
        Eigen::Index m = static_cast<Eigen::Index>(PairIndexer(n).count());
        NoiseStream local = stream.substream(31);
        Eigen::VectorXd w(m), ref(m), u(m);
        for (Eigen::Index k = 0; k < m; ++k) {
            w(k) = 0.3 + local.uniform01();
            ref(k) = 0.3 + local.uniform01();
            u(k) = 1.0 + local.uniform01();
        }
        Eigen::MatrixXd x = random_domain_matrix(local, n);
        Eigen::VectorXd wedge = wedge_sums(n, u);
        // Expectation over zeta: E[v v'] = X, so each coordinate averages to
        // block(D_e) . X plus the deterministic quadratic part.
        Eigen::VectorXd expected(m);
        PairIndexer idx(n);
        for (Eigen::Index k = 0; k < m; ++k) {
            auto [i, j] = idx.unpack(k);
            expected(k) = block_dot(triangle_derivative_raw(n, w, i, j), x) +
                          6.0 * wedge(k) * (w(k) - ref(k));
        }
        Eigen::MatrixXd root = matrix_sqrt_psd(x);
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
        const int trials = 60000;
        for (int t = 0; t < trials; ++t) {
            Eigen::VectorXd v = root * local.gaussian_vector(2 * n);
            mean += gradient_from_released(n, w, v, ref, wedge);
        }
        mean /= trials;
        // Monte Carlo error scales like sigma / sqrt(trials); generous band.
        if ((mean - expected).cwiseAbs().maxCoeff() > 0.5)
            return "estimator mean drifts from its expectation";
        return {};
    });

    run_check(out, "mechanism.feasible_and_deterministic", [&]() -> std::string {
        NoiseStream gen = stream.substream(5);
        WeightedGraph g = gen_gnp(8, 0.9, gen);
        MechanismResult r1 = run_mechanism(g, 2.0, 1e-4, 0.25, 424242);
        MechanismResult r2 = run_mechanism(g, 2.0, 1e-4, 0.25, 424242);
        if (r1.report.degenerate)
            return "healthy instance flagged degenerate: " + r1.report.degenerate_reason;
        double sum = r1.output.total_weight();
        if (std::abs(sum - r1.report.w_total) > 1e-9 * std::max(1.0, r1.report.w_total))
            return "released weights break the budget";
        for (std::size_t e = 0; e < r1.output.w.size(); ++e)
            if (r1.output.w[e] > r1.report.caps[e] + 1e-9) return "released weights break a cap";
        nlohmann::json j1 = report_to_json(r1.report);
        nlohmann::json j2 = report_to_json(r2.report);
        scrub_timing(j1);
        scrub_timing(j2);
        if (j1.dump() != j2.dump()) return "same seed produced different scrubbed reports";
        MechanismResult r3 = run_mechanism(g, 2.0, 1e-4, 0.25, 424243);
        nlohmann::json j3 = report_to_json(r3.report);
        scrub_timing(j3);
        if (!r3.report.degenerate && j3.dump() == j1.dump())
            return "different seeds produced identical reports";
        return {};
    });

    run_check(out, "mechanism.triangle_mass_bound", [&]() -> std::string {
        for (int rep = 0; rep < 10; ++rep) {
            int n = 4 + static_cast<int>(stream.uniform_bits() % 5);
            WeightedGraph g = random_graph(stream, n, 0.8, rep % 2 == 0);
            double mass = total_triangle_weight(g);
            double bound = g.total_weight() * local_sensitivity_l3(g);
            if (mass > bound * (1.0 + 1e-12) + 1e-15)
                return "triangle mass exceeded the weight-sensitivity product";
        }
        return {};
    });

    run_check(out, "baseline.injected_draws", [&]() -> std::string {
        WeightedGraph g(3);
        g.w = {1.0, 2.0, 0.5};
        Eigen::VectorXd draws(3);
        draws << 0.25, -3.0, 0.0;
        WeightedGraph noisy = randomized_response(g, 1.0, stream, &draws);
        if (noisy.w[0] != 1.25 || noisy.w[1] != -1.0 || noisy.w[2] != 0.5)
            return "injected noise was not applied verbatim";
        WeightedGraph clipped = clip_negative(noisy);
        if (clipped.w[1] != 0.0 || clipped.w[0] != 1.25) return "clipping altered the wrong entries";
        return {};
    });

    return out;
}

std::vector<CheckResult> verify_eval(std::uint64_t seed) {
    std::vector<CheckResult> out;
    NoiseStream stream(seed);

    run_check(out, "eval.sweep_matches_naive", [&]() -> std::string {
        for (int rep = 0; rep < 8; ++rep) {
            int n = 2 + static_cast<int>(stream.uniform_bits() % 9);
            WeightedGraph a = random_graph(stream, n, 0.7, false);
            // Signed comparisons must work too; emulate an unclipped noisy release.
            WeightedGraph b = a;
            for (double& w : b.w) w += 0.6 * stream.uniform01() - 0.3;
            CutErrorResult fast = max_cut_error(a, b);
            CutErrorResult slow = max_cut_error_naive(a, b);
            if (fast.cuts_evaluated != slow.cuts_evaluated) return "cut enumeration count";
            double scale = std::max(1.0, slow.max_error);
            if (std::abs(fast.max_error - slow.max_error) > 1e-12 * scale)
                return "incremental sweep disagrees with recomputation";
        }
        return {};
    });

    run_check(out, "eval.sweep_worked_values", [&]() -> std::string {
        WeightedGraph k3 = gen_complete(3), e3(3);
        CutErrorResult r3 = max_cut_error(k3, e3);
        if (auto m = check_close(r3.max_error, 1.0, 1e-12, "unit triangle vs empty"); !m.empty())
            return m;
        WeightedGraph k4 = gen_complete(4), e4(4);
        CutErrorResult r4 = max_cut_error(k4, e4);
        if (auto m = check_close(r4.max_error, 4.0, 1e-12, "unit K4 vs empty"); !m.empty())
            return m;
        if (r4.argmax_side.size() != 2) return "maximizing side of K4 is not balanced";
        CutErrorResult self = max_cut_error(k4, k4);
        if (self.max_error != 0.0) return "self comparison is not exactly zero";
        if (r4.cuts_evaluated != 7) return "K4 bipartition count";
        return {};
    });

    run_check(out, "eval.sweep_symmetric_arguments", [&]() -> std::string {
        for (int rep = 0; rep < 5; ++rep) {
            WeightedGraph a = random_graph(stream, 7, 0.6, false);
            WeightedGraph b = random_graph(stream, 7, 0.6, false);
            CutErrorResult ab = max_cut_error(a, b);
            CutErrorResult ba = max_cut_error(b, a);
            if (std::abs(ab.max_error - ba.max_error) > 1e-12 * std::max(1.0, ab.max_error))
                return "error is not symmetric in its arguments";
        }
        return {};
    });

    run_check(out, "eval.sampled_below_exhaustive", [&]() -> std::string {
        WeightedGraph a = random_graph(stream, 10, 0.7, false);
        WeightedGraph b = random_graph(stream, 10, 0.7, false);
        CutErrorResult full = max_cut_error(a, b);
        CutMode mode = CutMode::sampled(100, 99);
        CutErrorResult sampled = max_cut_error(a, b, mode);
        if (sampled.cuts_evaluated != 100) return "sample count is not exact";
        if (sampled.max_error > full.max_error + 1e-12) return "sampled maximum exceeds exhaustive";
        CutErrorResult again = max_cut_error(a, b, mode);
        if (again.max_error != sampled.max_error) return "sampling is not reproducible";
        return {};
    });

    run_check(out, "eval.kkt_accepts_oracle", [&]() -> std::string {
        for (int rep = 0; rep < 40; ++rep) {
            int n = 2 + static_cast<int>(stream.uniform_bits() % 7);
            Eigen::VectorXd y(n), u(n);
            for (int i = 0; i < n; ++i) {
                y(i) = 0.05 + 3.0 * stream.uniform01();
                u(i) = 0.05 + 2.0 * stream.uniform01();
            }
            double budget = u.sum() * (0.3 + 0.6 * stream.uniform01());
            Eigen::VectorXd w = brute_force_md_oracle(y, budget, u);
            KktReport rep_k = kkt_check(w, y, budget, u, 1e-8);
            if (!rep_k.ok) return "oracle solution rejected: " + rep_k.detail;
        }
        return {};
    });

    run_check(out, "eval.kkt_rejects_perturbed", [&]() -> std::string {
        int rejected = 0, total = 0;
        for (int rep = 0; rep < 20; ++rep) {
            int n = 3 + static_cast<int>(stream.uniform_bits() % 5);
            Eigen::VectorXd y(n), u(n);
            for (int i = 0; i < n; ++i) {
                y(i) = 0.1 + stream.uniform01();
                u(i) = 0.2 + stream.uniform01();
            }
            double budget = u.sum() * 0.5;
            Eigen::VectorXd w = brute_force_md_oracle(y, budget, u);
            // Move mass between two interior coordinates, keeping the budget.
            int a = -1, b = -1;
            for (int i = 0; i < n && b < 0; ++i)
                if (w(i) < u(i) - 1e-6 && w(i) > 1e-6) (a < 0 ? a : b) = i;
            if (b < 0) continue;
            Eigen::VectorXd bad = w;
            double shift = 1e-3 * std::min(bad(a), u(b) - bad(b));
            if (shift <= 0.0) continue;
            bad(a) -= shift;
            bad(b) += shift;
            ++total;
            if (!kkt_check(bad, y, budget, u, 1e-8).ok) ++rejected;
        }
        if (total == 0) return "no perturbable instances generated";
        if (rejected != total)
            return "accepted " + std::to_string(total - rejected) + " perturbed points";
        return {};
    });

    run_check(out, "eval.gradient_matches_differences", [&]() -> std::string {
        NoiseStream local = stream.substream(7);
        for (int rep = 0; rep < 2; ++rep) {
            int n = 4;
            Eigen::Index m = static_cast<Eigen::Index>(PairIndexer(n).count());
            Eigen::VectorXd w(m), ref(m), caps(m);
            WeightedGraph anchor(n);
            for (Eigen::Index k = 0; k < m; ++k) {
                ref(k) = 0.4 + local.uniform01();
                caps(k) = 3.0;
                w(k) = 0.3 + local.uniform01();
                anchor.w[static_cast<std::size_t>(k)] = ref(k);
            }
            SaddleContext ctx =
                make_saddle_context(n, triangle_adjacency(anchor).a, ref, caps, 0.8);
            SdpSolveOptions tight;
            tight.tol = 1e-9;
            Eigen::VectorXd grad = exact_gradient(w, ctx, 1e-9);
            const double h = 1e-4;
            for (Eigen::Index k = 0; k < m; ++k) {
                Eigen::VectorXd wp = w, wm = w;
                wp(k) += h;
                wm(k) -= h;
                double fd =
                    (saddle_value(wp, ctx, tight) - saddle_value(wm, ctx, tight)) / (2.0 * h);
                double scale = std::max(1.0, std::abs(fd));
                if (std::abs(fd - grad(k)) > 5e-4 * scale)
                    return "finite differences disagree with the envelope gradient";
            }
        }
        return {};
    });

    return out;
}

std::vector<CheckResult> run_all_verifications(std::uint64_t seed) {
    std::vector<CheckResult> out;
    for (auto* suite : {&verify_graph_core, &verify_dp_primitives, &verify_sdp, &verify_mechanism,
                        &verify_eval}) {
        std::vector<CheckResult> part = (*suite)(seed);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

}  // namespace motifcut
