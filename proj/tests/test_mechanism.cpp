#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>

#include "motifcut/common.hpp"
#include "motifcut/eval.hpp"
#include "motifcut/graph_io.hpp"
#include "motifcut/mechanism.hpp"
#include "motifcut/noise.hpp"
#include "motifcut/report.hpp"
#include "motifcut/triangle.hpp"
#include "motifcut/weighted_graph.hpp"

using namespace motifcut;

namespace {

WeightedGraph weighted_triangle() {
    WeightedGraph g(3);
    g.w = {2.0, 3.0, 5.0};
    return g;
}

PreprocessNoise silent_noise(std::int64_t pairs) {
    PreprocessNoise z;
    z.cap_draws = Eigen::VectorXd::Zero(pairs);
    return z;
}

}  // namespace

TEST_CASE("preprocessing matches the worked noisy totals") {
    const WeightedGraph g = weighted_triangle();
    NoiseStream stream(99);
    PreprocessNoise inj = silent_noise(3);
    inj.w_draw = 0.3;

    const PreprocessedInstance pre = preprocess(g, 1.0, 1.0, 1.0, 0.3, stream, {}, &inj);
    CHECK_FALSE(pre.degenerate);
    CHECK_FALSE(pre.caps_clamped);
    // 10 + 0.3 + ln(3/0.3)
    CHECK(pre.w_total == doctest::Approx(12.602585092994047).epsilon(1e-14));
    CHECK(pre.w_bar.sum() == doctest::Approx(pre.w_total).epsilon(1e-14));
    const double scale = pre.w_total / 10.0;
    CHECK(pre.w_bar(0) == doctest::Approx(2.0 * scale).epsilon(1e-14));
    CHECK(pre.w_bar(1) == doctest::Approx(3.0 * scale).epsilon(1e-14));
    CHECK(pre.w_bar(2) == doctest::Approx(5.0 * scale).epsilon(1e-14));

    // Caps: rescaled weight + ln(6 * 9 / 0.3) + uniform floor w_total / 3.
    const double offset = 5.19295685089021;  // ln(180)
    for (int k = 0; k < 3; ++k)
        CHECK(pre.caps(k) ==
              doctest::Approx(pre.w_bar(k) + offset + pre.w_total / 3.0).epsilon(1e-13));

    CHECK(pre.l3_hat == 15.0);  // max wedge product 3 * 5
    CHECK(pre.l3_tilde ==
          doctest::Approx(15.0 + pre.caps.maxCoeff() * offset).epsilon(1e-13));

    const UQuantities uq = u_quantities(3, pre.caps);
    CHECK(pre.u_triangle == uq.u_triangle);
    CHECK(pre.u_lambda == uq.u_lambda);

    CHECK(pre.noise.w_draw == 0.3);
    CHECK(pre.noise.cap_draws.cwiseAbs().maxCoeff() == 0.0);
    CHECK(pre.noise.l3_draw == 0.0);
}

TEST_CASE("preprocessing flags inputs too small to release") {
    NoiseStream stream(7);

    const PreprocessedInstance tiny_n = preprocess(WeightedGraph(2), 1.0, 1.0, 1.0, 0.3, stream);
    CHECK(tiny_n.degenerate);
    CHECK(tiny_n.degenerate_reason.find("fewer than three") != std::string::npos);

    PreprocessNoise z10 = silent_noise(10);
    const PreprocessedInstance empty =
        preprocess(WeightedGraph(5), 1.0, 1.0, 1.0, 0.25, stream, {}, &z10);
    CHECK(empty.degenerate);
    CHECK(empty.degenerate_reason.find("total weight") != std::string::npos);

    WeightedGraph lone_edge(3);
    lone_edge.at(0, 1) = 10.0;  // no triangle, so the sensitivity proxy is zero
    PreprocessNoise z3 = silent_noise(3);
    const PreprocessedInstance flat =
        preprocess(lone_edge, 1.0, 1.0, 1.0, 0.3, stream, {}, &z3);
    CHECK(flat.degenerate);
    CHECK(flat.degenerate_reason.find("sensitivity") != std::string::npos);

    WeightedGraph faint(3);
    faint.w = {0.1, 0.1, 0.1};
    const PreprocessedInstance cold =
        preprocess(faint, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 0.25, stream, {}, &z3);
    CHECK(cold.degenerate);
    CHECK(cold.degenerate_reason.find("total weight") != std::string::npos);

    // The worked instance stays releasable at the same budget.
    const PreprocessedInstance fine =
        preprocess(weighted_triangle(), 1.0, 1.0, 1.0, 0.3, stream, {}, &z3);
    CHECK_FALSE(fine.degenerate);
}

TEST_CASE("preprocessing clamps left-tail cap draws and floors the proxy") {
    const WeightedGraph g = weighted_triangle();
    NoiseStream stream(7);

    PreprocessNoise low = silent_noise(3);
    low.cap_draws(0) = -1000.0;
    const PreprocessedInstance floored = preprocess(g, 1.0, 1.0, 1.0, 0.3, stream, {}, &low);
    CHECK(floored.caps_clamped);
    CHECK(floored.caps(0) == doctest::Approx(floored.w_total / 3.0).epsilon(1e-13));

    PreprocessNoise mid = silent_noise(3);
    mid.cap_draws(2) = -11.0;  // lands between the floor and the rescaled weight
    const PreprocessedInstance kept = preprocess(g, 1.0, 1.0, 1.0, 0.3, stream, {}, &mid);
    CHECK(kept.caps_clamped);
    CHECK(kept.caps(2) == doctest::Approx(kept.w_bar(2) + kept.w_total / 3.0).epsilon(1e-13));

    PreprocessNoise sink = silent_noise(3);
    sink.l3_draw = -1e6;
    const PreprocessedInstance proxy = preprocess(g, 1.0, 1.0, 1.0, 0.3, stream, {}, &sink);
    CHECK(proxy.l3_tilde == 1e-12);
}

TEST_CASE("preprocessing rejects invalid rates and weights") {
    NoiseStream stream(7);
    const WeightedGraph g = weighted_triangle();
    CHECK_THROWS_AS(preprocess(g, 0.0, 1.0, 1.0, 0.3, stream), ConfigError);
    CHECK_THROWS_AS(preprocess(g, 1.0, -1.0, 1.0, 0.3, stream), ConfigError);
    CHECK_THROWS_AS(preprocess(g, 1.0, 1.0, 1.0, 0.0, stream), ConfigError);
    CHECK_THROWS_AS(preprocess(g, 1.0, 1.0, 1.0, 1.0, stream), ConfigError);

    WeightedGraph bad(3);
    bad.w = {1.0, -1.0, 1.0};
    CHECK_THROWS_AS(preprocess(bad, 1.0, 1.0, 1.0, 0.3, stream), InputError);

    PreprocessNoise short_draws = silent_noise(2);
    CHECK_THROWS_AS(preprocess(g, 1.0, 1.0, 1.0, 0.3, stream, {}, &short_draws), ConfigError);
}

TEST_CASE("multiplicative scores normalize and ignore gradient shifts") {
    Eigen::VectorXd w(3), g(3);
    w << 0.5, 1.5, 2.0;
    g << 0.3, -0.7, 1.1;
    const Eigen::VectorXd y = md_scores(w, g, 0.4);
    CHECK(y.maxCoeff() == 1.0);
    CHECK((md_scores(w, (g.array() + 7.0).matrix(), 0.4) - y).cwiseAbs().maxCoeff() <= 1e-12);

    CHECK_THROWS_AS(md_scores(w, Eigen::VectorXd::Zero(2), 0.4), ConfigError);
    CHECK_THROWS_AS(md_scores(w, g, 0.0), ConfigError);
    Eigen::VectorXd flat = w;
    flat(1) = 0.0;
    CHECK_THROWS_AS(md_scores(flat, g, 0.4), ConfigError);
    Eigen::VectorXd inf_g = g;
    inf_g(0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(md_scores(w, inf_g, 0.4), NumericError);
}

TEST_CASE("capped projection matches worked allocations") {
    // Scores (10, 1) against caps (1, 5) and budget 2: the first coordinate
    // wants 20/11 but caps at 1, leaving 1 for the second.
    Eigen::VectorXd w(2), g(2), u(2);
    w << 0.9, 1.1;
    g << std::log(0.9 / 10.0), std::log(1.1 / 1.0);
    u << 1.0, 5.0;
    const Eigen::VectorXd capped = md_update(w, g, 2.0, u, 1.0);
    CHECK(capped(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(capped(1) == doctest::Approx(1.0).epsilon(1e-12));

    // Zero gradient with the budget already spent is a fixed point.
    Eigen::VectorXd stay(2);
    stay << 4.0 / 3.0, 2.0 / 3.0;
    const Eigen::VectorXd fixed =
        md_update(stay, Eigen::VectorXd::Zero(2), 2.0, Eigen::VectorXd::Constant(2, 10.0), 0.5);
    CHECK((fixed - stay).cwiseAbs().maxCoeff() <= 1e-12);

    // No binding caps: allocation is proportional to the scores.
    Eigen::VectorXd w3(3);
    w3 << 1.0, 1.0, 2.0;
    const Eigen::VectorXd prop = md_update(w3, Eigen::VectorXd::Zero(3), 8.0,
                                           Eigen::VectorXd::Constant(3, 100.0), 1.0);
    CHECK(prop(0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(prop(1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(prop(2) == doctest::Approx(4.0).epsilon(1e-12));

    Eigen::VectorXd u2(2);
    u2 << 0.5, 0.5;
    CHECK_THROWS_AS(md_update(w, g, 2.0, u2, 1.0), ConfigError);  // caps below budget
    CHECK_THROWS_AS(md_update(w, g, 0.0, u, 1.0), ConfigError);
    CHECK_THROWS_AS(md_update(w, g, 2.0, Eigen::VectorXd::Zero(2), 1.0), ConfigError);
    CHECK_THROWS_AS(md_update(w, Eigen::VectorXd::Zero(3), 2.0, u, 1.0), ConfigError);
}

TEST_CASE("capped projection agrees with the dual-bracket reference") {
    std::mt19937_64 rng(314);
    std::uniform_real_distribution<double> unif(0.1, 2.0);
    for (int trial = 0; trial < 60; ++trial) {
        const int m = 2 + static_cast<int>(rng() % 7);
        Eigen::VectorXd w(m), g(m), u(m);
        for (int i = 0; i < m; ++i) {
            w(i) = unif(rng);
            g(i) = unif(rng) - 1.0;
            u(i) = unif(rng);
        }
        const double w_total = 0.9 * u.sum() * std::uniform_real_distribution<double>(0.3, 1.0)(rng);
        const double eta = unif(rng);

        const Eigen::VectorXd fast = md_update(w, g, w_total, u, eta);
        const Eigen::VectorXd y = md_scores(w, g, eta);
        const Eigen::VectorXd slow = brute_force_md_oracle(y, w_total, u);
        CHECK((fast - slow).cwiseAbs().maxCoeff() <= 1e-8);

        const KktReport kkt = kkt_check(fast, y, w_total, u, 1e-7);
        CHECK(kkt.ok);
        CHECK(fast.sum() == doctest::Approx(w_total).epsilon(1e-12));
        CHECK((fast.array() <= u.array() + 1e-12).all());
        CHECK((fast.array() > 0.0).all());
    }
}

TEST_CASE("gradient estimator matches the worked sketch value") {
    // Unit triangle, X = I, zeta = 1: each derivative matrix sums to 6 and
    // the sketch quadratic form doubles it.
    const Eigen::VectorXd ones3 = Eigen::VectorXd::Ones(3);
    const Eigen::VectorXd zeta = Eigen::VectorXd::Ones(6);
    const SdpPoint eye{3, Eigen::MatrixXd::Identity(6, 6)};
    const Eigen::VectorXd at_ref = estimate_gradient(ones3, eye, zeta, ones3, ones3);
    CHECK((at_ref - Eigen::VectorXd::Constant(3, 12.0)).cwiseAbs().maxCoeff() <= 1e-12);

    // Moving the anchor by c adds 6 * wedge * c = 12 c per pair.
    const Eigen::VectorXd shifted =
        estimate_gradient(ones3, eye, zeta, (ones3.array() - 0.25).matrix(), ones3);
    CHECK((shifted - Eigen::VectorXd::Constant(3, 15.0)).cwiseAbs().maxCoeff() <= 1e-12);

    CHECK_THROWS_AS(estimate_gradient(ones3, eye, Eigen::VectorXd::Ones(4), ones3, ones3),
                    ConfigError);
}

TEST_CASE("gradient estimator forms agree on random inputs") {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> unif(0.1, 1.5);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 3);
        const PairIndexer px(n);
        Eigen::VectorXd w(px.count()), wt(px.count()), u(px.count());
        for (Eigen::Index k = 0; k < px.count(); ++k) {
            w(k) = unif(rng);
            wt(k) = unif(rng);
            u(k) = unif(rng);
        }
        Eigen::VectorXd zeta(2 * n);
        for (Eigen::Index k = 0; k < zeta.size(); ++k) zeta(k) = unif(rng) - 0.75;

        const Eigen::MatrixXd x =
            0.2 * Eigen::MatrixXd::Ones(2 * n, 2 * n) +
            0.8 * Eigen::MatrixXd::Identity(2 * n, 2 * n);
        const SdpPoint p = SdpPoint::checked(x, n, 1e-9);

        const Eigen::VectorXd direct = estimate_gradient(w, p, zeta, wt, u);
        const Eigen::VectorXd via_sketch = gradient_from_released(
            n, w, matrix_sqrt_psd(p.x) * zeta, wt, wedge_sums(n, u));
        CHECK((direct - via_sketch).cwiseAbs().maxCoeff() <=
              1e-10 * (1.0 + direct.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("full release is feasible and seed-deterministic") {
    NoiseStream gen_stream(17);
    const WeightedGraph g = gen_gnp(8, 0.9, gen_stream);
    const MechanismResult first = run_mechanism(g, 2.0, 1e-6, 0.25, 5);
    REQUIRE_FALSE(first.report.degenerate);

    CHECK(first.output.n == 8);
    const double sum = first.output.total_weight();
    CHECK(sum == doctest::Approx(first.report.w_total).epsilon(1e-9));
    REQUIRE(first.report.caps.size() == first.output.w.size());
    for (std::size_t k = 0; k < first.output.w.size(); ++k) {
        CHECK(first.output.w[k] > 0.0);
        CHECK(first.output.w[k] <= first.report.caps[k] + 1e-9);
    }

    CHECK(first.report.params.restarts == 3);  // ceil(log3(12))
    CHECK(int(first.report.restarts.size()) == first.report.params.restarts);
    CHECK(first.report.chosen_restart >= 0);
    CHECK(first.report.chosen_restart < first.report.params.restarts);
    CHECK(first.report.final_weights == first.output.w);
    for (const RestartSummary& rs : first.report.restarts)
        CHECK(std::int64_t(rs.steps.size()) == first.report.params.steps);

    // The budget split recombines to two thirds of epsilon.
    const MechanismParams& p = first.report.params;
    CHECK(p.eps1 + p.eps2 + p.eps3 + p.restarts * p.eps4 ==
          doctest::Approx(2.0 * p.epsilon / 3.0).epsilon(1e-12));

    const MechanismResult again = run_mechanism(g, 2.0, 1e-6, 0.25, 5);
    CHECK(again.report.final_weights == first.report.final_weights);
    CHECK(again.report.w_total == first.report.w_total);

    const MechanismResult other = run_mechanism(g, 2.0, 1e-6, 0.25, 6);
    CHECK(other.report.final_weights != first.report.final_weights);
}

TEST_CASE("degenerate inputs release the empty graph") {
    const MechanismResult res = run_mechanism(WeightedGraph(6), 1.0, 1e-6, 0.25, 3);
    CHECK(res.report.degenerate);
    CHECK_FALSE(res.report.degenerate_reason.empty());
    CHECK(res.output.n == 6);
    CHECK(res.output.total_weight() == 0.0);
    CHECK(res.report.restarts.empty());
    CHECK(res.report.chosen_restart == -1);
    CHECK(std::all_of(res.report.final_weights.begin(), res.report.final_weights.end(),
                      [](double v) { return v == 0.0; }));
}

TEST_CASE("baseline adds the injected noise verbatim") {
    const WeightedGraph g = weighted_triangle();
    NoiseStream stream(11);
    Eigen::VectorXd draws(3);
    draws << 0.5, -4.0, 0.25;
    const WeightedGraph noisy = randomized_response(g, 1.0, stream, &draws);
    CHECK(noisy.w[0] == 2.5);
    CHECK(noisy.w[1] == -1.0);
    CHECK(noisy.w[2] == 5.25);

    const WeightedGraph clipped = clip_negative(noisy);
    CHECK(clipped.w[0] == 2.5);
    CHECK(clipped.w[1] == 0.0);
    CHECK(clipped.w[2] == 5.25);

    CHECK_THROWS_AS(randomized_response(g, 0.0, stream), ConfigError);
    Eigen::VectorXd two(2);
    two << 0.0, 0.0;
    CHECK_THROWS_AS(randomized_response(g, 1.0, stream, &two), ConfigError);

    // Without injection the draws come from the stream and are reproducible.
    NoiseStream a(123), b(123);
    const WeightedGraph ra = randomized_response(g, 0.7, a);
    const WeightedGraph rb = randomized_response(g, 0.7, b);
    CHECK(ra.w == rb.w);
}

TEST_CASE("report serialization round trips and scrubs wall-clock fields") {
    NoiseStream gen_stream(23);
    const WeightedGraph g = gen_gnp(7, 0.9, gen_stream);
    const MechanismResult res = run_mechanism(g, 2.0, 1e-6, 0.25, 8);

    nlohmann::json j = report_to_json(res.report);
    const MechanismReport back = report_from_json(j);
    CHECK(report_to_json(back) == j);

    scrub_timing(j);
    CHECK_FALSE(j.contains("total_seconds"));
    for (const auto& rs : j.at("restarts")) CHECK_FALSE(rs.contains("seconds"));

    const std::string header = csv_header();
    const std::string row = csv_row(res.report);
    CHECK(std::count(header.begin(), header.end(), ',') ==
          std::count(row.begin(), row.end(), ','));
    CHECK(header.rfind("seed,", 0) == 0);

    std::ostringstream csv;
    emit_report(res.report, csv, ReportFormat::csv_summary);
    CHECK(csv.str() == header + "\n" + row + "\n");
}
